#include "cmrad/polybuild.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "cmrad/exactpoly.hpp"
#include "cmrad/invariants.hpp"
#include "cmrad/quadforms.hpp"

namespace cmrad::pb {

using ap::Complex;
using ap::PrecisionContext;
using ap::Real;

IntPoly IntPoly::derivative() const {
    IntPoly d;
    for (size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(mpz_class(i) * coeffs[i]);
    if (d.coeffs.empty()) d.coeffs.push_back(0);
    return d;
}

mpq_class IntPoly::eval(const mpq_class& x) const {
    mpq_class v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

ap::Real IntPoly::eval(const Real& x) const {
    PrecisionContext ctx(std::max(2L, x.prec() - 64));
    Real v(0, ctx);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + Real(*it, ctx);
    return v;
}

ap::Complex IntPoly::eval(const Complex& x) const {
    PrecisionContext ctx(std::max(2L, x.re.prec() - 64));
    Complex v(Real(0, ctx), Real(0, ctx));
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        v = v * x + Complex(Real(*it, ctx), Real(0, ctx));
    return v;
}

namespace {

using CPoly = std::vector<Complex>;  // ascending coefficients

CPoly mul(const CPoly& a, const CPoly& b, const PrecisionContext& ctx) {
    CPoly out(a.size() + b.size() - 1, Complex(Real(0, ctx), Real(0, ctx)));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

// Balanced product of linear factors (x - root).
CPoly product_tree(const std::vector<Complex>& roots, size_t lo, size_t hi,
                   const PrecisionContext& ctx) {
    if (hi - lo == 1) {
        Complex one(Real(1, ctx), Real(0, ctx));
        return CPoly{-roots[lo], one};
    }
    size_t mid = lo + (hi - lo) / 2;
    return mul(product_tree(roots, lo, mid, ctx), product_tree(roots, mid, hi, ctx), ctx);
}

long heuristic_digits(const mpz_class& N, unsigned long h) {
    double n = N.get_d();
    return static_cast<long>(std::ceil(M_PI * std::sqrt(n) * double(h) / (96.0 * std::log(10.0)))) +
           20 * static_cast<long>(h) + 100;
}

// gamma2(R) = 256/R^16 - R^8
Complex gamma2_of(const Complex& R, const PrecisionContext& ctx) {
    Complex r8 = pow_ui(R, 8);
    Complex r16 = r8 * r8;
    Complex c256(Real(256, ctx), Real(0, ctx));
    return c256 / r16 - r8;
}

bool close(const Complex& a, const Complex& b, long bits) {
    Complex d = a - b;
    double scale = std::max(abs(a).mag(), 1.0);
    double dm = std::max(d.re.mag(), d.im.mag());
    return dm < scale - double(bits) / 2;
}

}  // namespace

std::pair<IntPoly, RoundingCertificate> poly_from_roots(
    const std::vector<Complex>& roots, const PrecisionContext& ctx) {
    if (roots.empty()) throw domain_error("poly_from_roots: no roots");
    CPoly p = product_tree(roots, 0, roots.size(), ctx);
    RoundingCertificate cert;
    cert.bits_used = ctx.work();
    IntPoly out;
    double margin_limit = std::pow(2.0, -double(ctx.guard_bits) / 2);
    for (const Complex& c : p) {
        double d = c.re.distance_to_int();
        double di = std::abs(c.im.to_double());
        cert.max_distance = std::max(cert.max_distance, std::max(d, di));
        if (cert.max_distance >= margin_limit)
            throw precision_error("poly_from_roots: rounding margin too large");
        out.coeffs.push_back(c.re.round_to_int());
    }
    while (out.coeffs.size() > 1 && out.coeffs.back() == 0) out.coeffs.pop_back();
    return {std::move(out), cert};
}

IntPoly hilbert_poly(const mpz_class& N, long digits_hint) {
    if (N <= 3 || N % 4 != 3 || !qf::is_squarefree(N))
        throw domain_error("hilbert_poly: need squarefree N = 3 mod 4, N > 3");
    qf::ClassGroup grp = qf::enumerate(-N);
    long digits = digits_hint > 0 ? digits_hint : heuristic_digits(N, grp.h);
    for (int attempt = 0;; ++attempt) {
        PrecisionContext ctx = PrecisionContext::from_digits(digits);
        try {
            std::vector<Complex> roots;
            Real sN = sqrt(Real(N, ctx));
            for (const qf::Form& f : grp.classes) {
                Real a2(mpz_class(2 * f.a), ctx);
                Complex z(Real(f.b, ctx) / a2, sN / a2);
                roots.push_back(inv::klein_j(z, ctx));
            }
            return poly_from_roots(roots, ctx).first;
        } catch (const precision_error&) {
            if (attempt >= 4) throw;
            digits *= 2;
        }
    }
}

namespace {

struct GroupedRoots {
    // triples[j] = three Weber roots sharing one gamma2 value
    std::vector<std::array<Complex, 3>> triples;
};

GroupedRoots group_roots(const qf::ClassGroup& grp, const mpz_class& N,
                         const PrecisionContext& ctx) {
    const unsigned long order = grp.h;
    if (order % 3 != 0) throw internal_error("group_roots: 3h not divisible by 3");
    const unsigned long h = order / 3;
    GroupedRoots out;

    if (grp.is_cyclic() && !grp.generators.empty()) {
        // r_{j,k} = R(gen^(j+(k-1)h)), the paper's labelling
        const qf::Form& gen = grp.generators[0].first;
        std::vector<qf::Form> pw;
        pw.reserve(order + 1);
        pw.push_back(qf::principal(grp.disc));
        for (unsigned long e = 1; e <= order; ++e) pw.push_back(qf::compose(pw.back(), gen));
        for (unsigned long j = 1; j <= h; ++j) {
            std::array<Complex, 3> tri{Complex(ctx), Complex(ctx), Complex(ctx)};
            for (int k = 0; k < 3; ++k)
                tri[k] = inv::broker_root(pw[j + static_cast<unsigned long>(k) * h], N, ctx);
            Complex g0 = gamma2_of(tri[0], ctx);
            for (int k = 1; k < 3; ++k)
                if (!close(g0, gamma2_of(tri[k], ctx), ctx.bits))
                    throw grouping_error("group_roots: generator labelling broke gamma2 equality");
            out.triples.push_back(std::move(tri));
        }
        return out;
    }

    // Fallback: cluster the 3h roots by their gamma2 values.
    std::vector<Complex> roots;
    std::vector<Complex> g2;
    for (const qf::Form& f : grp.classes) {
        roots.push_back(inv::broker_root(f, N, ctx));
        g2.push_back(gamma2_of(roots.back(), ctx));
    }
    // Greedy clustering: conjugate triples differ only in the sign of
    // Im(gamma2), so compare full complex values rather than sorting.
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> cluster{i};
        for (size_t j = i + 1; j < roots.size(); ++j)
            if (!used[j] && close(g2[i], g2[j], ctx.bits)) cluster.push_back(j);
        if (cluster.size() != 3)
            throw grouping_error("group_roots: cluster of size != 3");
        for (size_t j : cluster) used[j] = true;
        out.triples.push_back({roots[cluster[0]], roots[cluster[1]], roots[cluster[2]]});
    }
    return out;
}

InvariantPolys build_invariant_polys(const mpz_class& N, const qf::ClassGroup& grp,
                                     long digits) {
    PrecisionContext ctx = PrecisionContext::from_digits(digits);
    GroupedRoots gr = group_roots(grp, N, ctx);
    Real half(mpq_class(1, 2), ctx);
    Complex one(Real(1, ctx), Real(0, ctx));
    std::vector<Complex> froots, groots;
    for (const auto& tri : gr.triples) {
        froots.push_back((tri[0] + tri[1] + tri[2]) * half);
        groots.push_back(-(one / tri[0] + one / tri[1] + one / tri[2]));
    }
    auto [F, certF] = poly_from_roots(froots, ctx);
    auto [G, certG] = poly_from_roots(groots, ctx);
    RoundingCertificate cert;
    cert.max_distance = std::max(certF.max_distance, certG.max_distance);
    cert.bits_used = ctx.work();
    return InvariantPolys{std::move(F), std::move(G), cert};
}

}  // namespace

InvariantPolys invariant_polys(const mpz_class& N, long digits_hint, bool verify) {
    if (N <= 3 || N % 8 != 3 || N % 3 == 0 || !qf::is_squarefree(N))
        throw domain_error("invariant_polys: need squarefree N = 3 mod 8 coprime to 3, N > 3");
    qf::ClassGroup grp = qf::enumerate(mpz_class(-4) * N);
    long digits = digits_hint > 0 ? digits_hint : heuristic_digits(N, grp.h / 3);
    for (int attempt = 0;; ++attempt) {
        try {
            InvariantPolys res = build_invariant_polys(N, grp, digits);
            res.cert.escalations = attempt;
            if (verify) {
                InvariantPolys check = build_invariant_polys(N, grp, digits + digits / 4);
                if (!(check.F == res.F) || !(check.G == res.G))
                    throw precision_error("invariant_polys: 1.25x recheck disagreed");
            }
            return res;
        } catch (const precision_error&) {
            if (attempt >= 4) throw;
            digits *= 2;
        }
    }
}

std::vector<Complex> invariant_g_roots(const mpz_class& N, const PrecisionContext& ctx) {
    if (N <= 3 || N % 8 != 3 || N % 3 == 0 || !qf::is_squarefree(N))
        throw domain_error("invariant_g_roots: need squarefree N = 3 mod 8 coprime to 3, N > 3");
    qf::ClassGroup grp = qf::enumerate(mpz_class(-4) * N);
    GroupedRoots gr = group_roots(grp, N, ctx);
    Complex one(Real(1, ctx), Real(0, ctx));
    std::vector<Complex> groots;
    for (const auto& tri : gr.triples)
        groots.push_back(-(one / tri[0] + one / tri[1] + one / tri[2]));
    return groots;
}

mpz_class poly_height(const IntPoly& p) {
    mpz_class h = 0;
    for (const mpz_class& c : p.coeffs) h = std::max(h, mpz_class(abs(c)));
    return h;
}

mpz_class poly_index(const IntPoly& p, const mpz_class& N) {
    long d = p.degree();
    if (d < 1 || d % 2 == 0 || !p.monic())
        throw domain_error("poly_index: need a monic polynomial of odd degree");
    mpz_class disc = xp::discriminant(p);
    mpz_class denom;
    mpz_class mN = -N;
    mpz_pow_ui(denom.get_mpz_t(), mN.get_mpz_t(), static_cast<unsigned long>((d - 1) / 2));
    if (disc % denom != 0)
        throw assumption_error("poly_index: discriminant not divisible by (-N)^((d-1)/2)");
    mpz_class q = disc / denom;
    if (q < 0 || mpz_perfect_square_p(q.get_mpz_t()) == 0)
        throw assumption_error("poly_index: quotient is not a perfect square");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), q.get_mpz_t());
    return r;
}

}  // namespace cmrad::pb
