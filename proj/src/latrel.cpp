#include "cmrad/latrel.hpp"

#include <algorithm>
#include <cmath>

#include "cmrad/chowla.hpp"
#include "cmrad/invariants.hpp"
#include "cmrad/polybuild.hpp"
#include "cmrad/quadforms.hpp"

namespace cmrad::lr {

using ap::PrecisionContext;
using ap::Real;

namespace {

mpz_class dot(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
    mpz_class s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_log2(const std::vector<mpz_class>& v) {
    mpz_class s = dot(v, v);
    if (s == 0) return -1e300;
    return 0.5 * static_cast<double>(mpz_sizeinbase(s.get_mpz_t(), 2));
}

}  // namespace

// Integer-arithmetic LLL (Cohen, Alg. 2.6.3) with Lovasz parameter 99/100.
Matrix lll_reduce(Matrix b) {
    const long n = static_cast<long>(b.size());
    if (n == 0) return b;
    std::vector<std::vector<mpz_class>> lam(n + 1, std::vector<mpz_class>(n + 1, mpz_class(0)));
    std::vector<mpz_class> d(n + 1);
    d[0] = 1;
    d[1] = dot(b[0], b[1 - 1]);
    if (d[1] == 0) throw domain_error("lll_reduce: zero vector in basis");

    auto red = [&](long k, long l) {
        // make |mu_{k,l}| <= 1/2:  lambda scaled by d[l]
        mpz_class two_lam = 2 * lam[k][l];
        if (abs(two_lam) <= d[l]) return;
        mpz_class q, num = two_lam + d[l], den = 2 * d[l];
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());  // round(lam/d)
        for (size_t c = 0; c < b[k - 1].size(); ++c) b[k - 1][c] -= q * b[l - 1][c];
        lam[k][l] -= q * d[l];
        for (long i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };

    long kmax = 1;
    long k = 2;
    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (long j = 1; j <= k; ++j) {
                mpz_class u = dot(b[k - 1], b[j - 1]);
                for (long i = 1; i < j; ++i) {
                    u = d[i] * u - lam[k][i] * lam[j][i];
                    mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d[i - 1].get_mpz_t());
                }
                if (j < k)
                    lam[k][j] = u;
                else {
                    d[k] = u;
                    if (d[k] == 0) throw domain_error("lll_reduce: dependent rows");
                }
            }
        }
        while (true) {
            red(k, k - 1);
            // Lovasz: 100 (d_k d_{k-2} + lam^2) < 99 d_{k-1}^2  => swap
            if (100 * (d[k] * d[k - 2] + lam[k][k - 1] * lam[k][k - 1]) <
                99 * d[k - 1] * d[k - 1]) {
                std::swap(b[k - 1], b[k - 2]);
                for (long j = 1; j <= k - 2; ++j) std::swap(lam[k][j], lam[k - 1][j]);
                mpz_class lv = lam[k][k - 1];
                mpz_class B = d[k - 2] * d[k] + lv * lv;
                mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), d[k - 1].get_mpz_t());
                for (long i = k + 1; i <= kmax; ++i) {
                    mpz_class t = lam[i][k];
                    lam[i][k] = d[k] * lam[i][k - 1] - lv * t;
                    mpz_divexact(lam[i][k].get_mpz_t(), lam[i][k].get_mpz_t(),
                                 d[k - 1].get_mpz_t());
                    lam[i][k - 1] = B * t + lv * lam[i][k];
                    mpz_divexact(lam[i][k - 1].get_mpz_t(), lam[i][k - 1].get_mpz_t(),
                                 d[k].get_mpz_t());
                }
                d[k - 1] = B;
                k = std::max(2L, k - 1);
            } else {
                for (long l = k - 2; l >= 1; --l) red(k, l);
                ++k;
                break;
            }
        }
    }
    return b;
}

RelationResult lindep(const std::vector<Real>& values, const PrecisionContext& ctx) {
    const size_t m = values.size();
    if (m < 2) throw domain_error("lindep: need at least two values");
    // The scaling must leave the true relation's rounding error below the
    // Minkowski floor of the lattice.  Value magnitude beyond one guard
    // band eats into the error budget bit for bit and comes off the shift;
    // otherwise no amount of extra precision can ever surface a relation
    // among values of large dynamic range.
    double maxmag = 0.0;
    for (const Real& v : values)
        if (!v.is_zero()) maxmag = std::max(maxmag, v.mag());
    long excess = std::max(0L, static_cast<long>(maxmag) - ctx.guard_bits);
    long shift = ctx.bits - 2 * ctx.guard_bits - excess;
    if (shift < 16) throw domain_error("lindep: precision too low for scaling");

    Matrix basis(m, std::vector<mpz_class>(m + 1, mpz_class(0)));
    for (size_t i = 0; i < m; ++i) {
        basis[i][i] = 1;
        mpfr_t t;
        mpfr_init2(t, values[i].prec());
        mpfr_mul_2si(t, values[i].raw(), shift, MPFR_RNDN);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
        mpfr_clear(t);
        // a value that scales to zero could take any coefficient for free,
        // making every "relation" unsound
        if (z == 0 && !values[i].is_zero())
            throw domain_error("lindep: scaling underflow, raise the precision");
        basis[i][m] = z;
    }
    Matrix red = lll_reduce(std::move(basis));

    RelationResult res;
    res.coefficients.assign(red[0].begin(), red[0].end() - 1);
    bool all_zero = true;
    for (const mpz_class& c : res.coefficients)
        if (c != 0) all_zero = false;
    if (all_zero) throw not_found_error("lindep: degenerate relation");

    res.confidence_gap = std::pow(2.0, norm_log2(red[1]) - norm_log2(red[0]));

    // residual at full precision
    Real sum(0, ctx);
    for (size_t i = 0; i < m; ++i) sum = sum + Real(res.coefficients[i], ctx) * values[i];
    res.residual_log2 = sum.is_zero() ? -1e300 : sum.mag();

    if (res.residual_log2 >= -double(ctx.bits) / 2)
        throw not_found_error("lindep: residual too large");
    if (res.confidence_gap <= 65536.0)
        throw not_found_error("lindep: confidence gap too small");
    return res;
}

pb::IntPoly algdep(const Real& x, long d, const PrecisionContext& ctx) {
    if (d < 1) throw domain_error("algdep: degree must be >= 1");
    std::vector<Real> vals;
    Real p(1, ctx);
    vals.push_back(p);
    for (long i = 1; i <= d; ++i) {
        p = p * x;
        vals.push_back(p);
    }
    RelationResult rel = lindep(vals, ctx);

    pb::IntPoly poly;
    poly.coeffs = rel.coefficients;
    while (poly.coeffs.size() > 1 && poly.coeffs.back() == 0) poly.coeffs.pop_back();
    if (poly.degree() < 1) throw not_found_error("algdep: constant relation");
    // primitive, positive leading coefficient
    mpz_class content = 0;
    for (const mpz_class& c : poly.coeffs) content = gcd(content, c);
    for (mpz_class& c : poly.coeffs) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
    if (poly.lead() < 0)
        for (mpz_class& c : poly.coeffs) c = -c;

    // Guard against near-miss polynomials: Newton refinement from x must
    // converge back to x, i.e. the correction step is tiny and shrinks.
    Real px = poly.eval(x);
    Real dpx = poly.derivative().eval(x);
    if (dpx.is_zero()) throw not_found_error("algdep: derivative vanished at x");
    Real step = px / dpx;
    double scale = std::max(x.mag(), 0.0);
    if (!step.is_zero() && step.mag() > scale - double(ctx.bits) / 2 + 8)
        throw not_found_error("algdep: Newton step did not stay at x");
    Real x2 = x - step;
    Real px2 = poly.eval(x2);
    if (!px2.is_zero() && !px.is_zero() && px2.mag() > px.mag() + 2)
        throw not_found_error("algdep: Newton refinement failed to contract");
    return poly;
}

pb::IntPoly minpoly_in_field(const Real& x, const Real& g,
                             const std::vector<ap::Complex>& g_roots,
                             const PrecisionContext& ctx) {
    const long h = static_cast<long>(g_roots.size());
    if (h < 1) throw domain_error("minpoly_in_field: empty root list");
    std::vector<Real> vals;
    vals.push_back(x);
    Real p(1, ctx);
    vals.push_back(p);
    for (long i = 1; i < h; ++i) {
        p = p * g;
        vals.push_back(p);
    }
    RelationResult rel = lindep(vals, ctx);
    const mpz_class& c = rel.coefficients[0];
    if (c == 0) throw not_found_error("minpoly_in_field: x absent from relation");

    // sigma(x) = -(sum d_i sigma(g)^i) / c across every embedding of g
    ap::Complex cden(Real(c, ctx), Real(0, ctx));
    std::vector<ap::Complex> conj;
    for (const ap::Complex& gj : g_roots) {
        ap::Complex v(Real(0, ctx), Real(0, ctx));
        for (long i = h - 1; i >= 0; --i)
            v = v * gj + ap::Complex(Real(rel.coefficients[i + 1], ctx), Real(0, ctx));
        conj.push_back(-(v / cden));
    }
    pb::IntPoly L;
    try {
        L = pb::poly_from_roots(conj, ctx).first;
    } catch (const precision_error& e) {
        throw not_found_error(std::string("minpoly_in_field: ") + e.what());
    }
    Real resid = L.eval(x);
    if (!resid.is_zero() && resid.mag() > -double(ctx.bits) / 4)
        throw not_found_error("minpoly_in_field: candidate does not vanish at x");
    return L;
}

namespace {

void record(UnitTestReport& rep, pb::IntPoly L, bool square, long bits) {
    rep.L = std::move(L);
    rep.degree = rep.L.degree();
    rep.recognized = true;
    rep.is_unit = rep.L.monic() && abs(rep.L.coeffs.front()) == 1;
    rep.used_square = square;
    rep.precision_bits = bits;
}

// Direct power-basis recognition: lambda at degree h, then lambda^2 at h
// (composite N), then lambda at 2h.
bool direct_attempts(UnitTestReport& rep, const mpz_class& N, long h,
                     bool composite, long digits, int max_attempts) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        PrecisionContext ctx = PrecisionContext::from_digits(digits);
        Real lam = cs::lambda(N, ctx);
        Real lam2 = lam * lam;
        struct Try {
            const Real* x;
            long deg;
            bool square;
        };
        // the lambda^2 unit candidate must precede the degree-2h fallback,
        // which can absorb it
        std::vector<Try> plan{{&lam, h, false}};
        if (composite) plan.push_back({&lam2, h, true});
        plan.push_back({&lam, 2 * h, false});
        for (const Try& t : plan) {
            try {
                pb::IntPoly L = algdep(*t.x, t.deg, ctx);
                record(rep, std::move(L), t.square, ctx.work());
                return true;
            } catch (const not_found_error&) {
            }
        }
        rep.precision_bits = ctx.work();
        digits *= 2;
    }
    return false;
}

// Class-field recognition through Q(g): needs the invariant machinery,
// i.e. squarefree N = 3 mod 8 coprime to 3.  lambda can be thousands of
// bits smaller than its conjugates, which puts its minimal polynomial far
// beyond the reach of a power-basis lattice; the coordinates of lambda
// over powers of g stay small, so that lattice is the one to reduce.
bool field_attempts(UnitTestReport& rep, const mpz_class& N, long h,
                    bool composite, int max_attempts) {
    // precision: the lattice spans from lambda (far below 1) up to g^(h-1),
    // and the shift inside lindep must clear both ends with room for the
    // relation coefficients
    double lam_mag, g_mag;
    {
        PrecisionContext coarse = PrecisionContext::from_digits(40 + 2 * h);
        lam_mag = std::abs(cs::lambda(N, coarse).mag());
        g_mag = std::max(1.0, inv::fg_pair(N, coarse).g.mag());
    }
    double maxmag = (h - 1) * g_mag;
    long bits = static_cast<long>(lam_mag + maxmag) + 4 * h + 640;
    bits = std::max({bits, static_cast<long>(2 * maxmag) + 256,
                     static_cast<long>(2 * lam_mag) + 256});
    long digits = static_cast<long>(double(bits) / 3.32) + 1;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        PrecisionContext ctx = PrecisionContext::from_digits(digits);
        Real lam = cs::lambda(N, ctx);
        Real g = inv::fg_pair(N, ctx).g;
        std::vector<ap::Complex> groots = pb::invariant_g_roots(N, ctx);
        if (static_cast<long>(groots.size()) != h)
            throw internal_error("unit_test_lambda: degree of G differs from h");
        Real lam2 = lam * lam;
        struct Try {
            const Real* x;
            bool square;
        };
        std::vector<Try> plan{{&lam, false}};
        if (composite) plan.push_back({&lam2, true});
        for (const Try& t : plan) {
            try {
                pb::IntPoly L = minpoly_in_field(*t.x, g, groots, ctx);
                record(rep, std::move(L), t.square, ctx.work());
                return true;
            } catch (const not_found_error&) {
            }
        }
        rep.precision_bits = ctx.work();
        digits *= 2;
    }
    return false;
}

// Galois-conjugate certification through weight-12 Delta-quotients.
//
// lambda^48 = prod_A N(a_A)^-12 * Delta(O)^2 / (Delta(a_A) Delta(conj a_A))
// over the reduced ideal classes of the maximal order O = Z[(1+sqrt(-N))/2],
// and translating every ideal by a class C gives the conjugate
//   W_C = prod_A N(a_A)^-12 * Delta(c)^2 / (Delta(a_A c) Delta(conj(a_A) c)).
// prod_C (x - W_C) therefore has rational-integer coefficients, and its
// constant term is +-1 exactly when lambda^48 is a unit, which forces lambda
// itself to be one (lambda and 1/lambda are roots of the monic integer
// polynomials x^48 -+ lambda^+-48 over the corresponding rings).  Each W_C
// costs O(h) eta evaluations and no lattice reduction, so this reaches class
// numbers where both recognition lattices above are hopeless.
namespace conj48 {

struct El {
    mpz_class x, y;  // x + y*delta with delta^2 = delta - (N+1)/4
};

struct Ideal {
    El b1, b2;  // Z-basis in HNF: (n, 0), (x, g)
};

struct Order {
    mpz_class q;  // (N+1)/4

    El mul(const El& a, const El& b) const {
        mpz_class yy = a.y * b.y;
        return {a.x * b.x - q * yy, a.x * b.y + a.y * b.x + yy};
    }

    static Ideal hnf(std::vector<El> rows) {
        El acc{0, 0};
        std::vector<mpz_class> xs;
        for (El& r : rows) {
            if (r.y == 0) {
                if (r.x != 0) xs.push_back(r.x);
                continue;
            }
            if (acc.y == 0) {
                acc = std::move(r);
                continue;
            }
            mpz_class g, u, v;
            mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(),
                       acc.y.get_mpz_t(), r.y.get_mpz_t());
            mpz_class x0 = (r.y / g) * acc.x - (acc.y / g) * r.x;
            if (x0 != 0) xs.push_back(x0);
            acc = {u * acc.x + v * r.x, g};
        }
        mpz_class n = 0;
        for (const mpz_class& x : xs) n = gcd(n, x);
        if (n == 0 || acc.y == 0) throw domain_error("hnf: degenerate ideal");
        if (n < 0) n = -n;
        if (acc.y < 0) {  // negate the whole row, not just one entry
            acc.x = -acc.x;
            acc.y = -acc.y;
        }
        mpz_class xr = acc.x % n;
        if (xr < 0) xr += n;
        return {{n, 0}, {xr, acc.y}};
    }

    Ideal mul(const Ideal& A, const Ideal& B) const {
        return hnf({mul(A.b1, B.b1), mul(A.b1, B.b2), mul(A.b2, B.b1),
                    mul(A.b2, B.b2)});
    }

    static Ideal conj(const Ideal& A) {
        auto cj = [](const El& e) { return El{e.x + e.y, -e.y}; };
        return hnf({cj(A.b1), cj(A.b2)});
    }

    static mpz_class norm(const Ideal& A) {
        return abs(A.b1.x * A.b2.y - A.b1.y * A.b2.x);
    }
};

ap::Complex embed(const El& e, const ap::Complex& delta,
                  const PrecisionContext& ctx) {
    return ap::Complex(Real(e.x, ctx), Real(0, ctx)) + delta * Real(e.y, ctx);
}

// Delta of the lattice spanned by the ideal basis: reduce tau to the
// fundamental domain, tracking the weight-12 cocycle, then eta(tau)^24.
ap::Complex delta_of(const Ideal& I, const ap::Complex& delta,
                     const PrecisionContext& ctx) {
    ap::Complex g1 = embed(I.b1, delta, ctx);
    ap::Complex g2 = embed(I.b2, delta, ctx);
    ap::Complex tau = g1 / g2;
    ap::Complex den = g2;
    if (tau.im.sign() < 0) {
        tau = g2 / g1;
        den = g1;
    }
    ap::Complex one(Real(1, ctx), Real(0, ctx));
    ap::Complex acc = one;
    while (true) {
        mpz_class t = tau.re.round_to_int();
        tau.re = tau.re - Real(t, ctx);
        Real n2 = tau.re * tau.re + tau.im * tau.im;
        if (!(n2.to_double() < 1.0)) break;
        acc = acc * (one / ap::pow_ui(tau, 12));
        tau = -(one / tau);
    }
    return acc * ap::pow_ui(ap::eta(tau, ctx), 24) / ap::pow_ui(den, 12);
}

struct Setup {
    Order ord;
    std::vector<Ideal> ideals;
    std::vector<long> inv_of;  // index of the inverse class
    long principal = -1;
};

Setup make_setup(const mpz_class& N, const qf::ClassGroup& grp) {
    Setup s;
    s.ord.q = (N + 1) / 4;
    auto index_of = [&grp](const qf::Form& f) {
        auto it = std::lower_bound(grp.classes.begin(), grp.classes.end(), f);
        if (it == grp.classes.end() || f < *it || *it < f)
            throw internal_error("conjugate route: class lookup failed");
        return static_cast<long>(it - grp.classes.begin());
    };
    for (const qf::Form& f : grp.classes) {
        // [a, (-b + sqrt(-N))/2] = [a, -(b+1)/2 + delta]
        s.ideals.push_back(Order::hnf({{f.a, 0}, {-(f.b + 1) / 2, 1}}));
        s.inv_of.push_back(index_of(qf::inverse(f)));
    }
    s.principal = index_of(qf::principal(-N));
    return s;
}

// All W_C at the given precision.  W_{C^-1} = conj(W_C) because lambda^48 is
// real, so only one member of each inverse pair is computed.
std::vector<ap::Complex> conjugates(const Setup& s, const mpz_class& N,
                                    const PrecisionContext& ctx) {
    const long h = static_cast<long>(s.ideals.size());
    ap::Complex delta(Real(mpq_class(1, 2), ctx),
                      sqrt(Real(N, ctx)) / Real(2, ctx));
    std::vector<ap::Complex> dc;
    Real nfac(1, ctx);  // prod_A N(a_A)^12, shared by every class
    for (const Ideal& I : s.ideals) {
        dc.push_back(delta_of(I, delta, ctx));
        nfac = nfac * ap::pow_ui(Real(Order::norm(I), ctx), 12);
    }
    std::vector<ap::Complex> w(h, ap::Complex(Real(0, ctx), Real(0, ctx)));
    std::vector<bool> done(h, false);
    for (long ci = 0; ci < h; ++ci) {
        if (done[ci]) continue;
        ap::Complex acc = ap::pow_ui(dc[ci], 2 * static_cast<unsigned long>(h));
        for (long ai = 0; ai < h; ++ai) {
            Ideal p1 = s.ord.mul(s.ideals[ai], s.ideals[ci]);
            Ideal p2 = s.ord.mul(Order::conj(s.ideals[ai]), s.ideals[ci]);
            acc = acc / (delta_of(p1, delta, ctx) * delta_of(p2, delta, ctx));
        }
        w[ci] = acc / nfac;
        done[ci] = true;
        if (!done[s.inv_of[ci]]) {
            w[s.inv_of[ci]] = w[ci].conj();
            done[s.inv_of[ci]] = true;
        }
    }
    return w;
}

}  // namespace conj48

// Certify lambda as an algebraic unit from the integer polynomial
// prod_C (x - W_C) annihilating lambda^48.  Needs the maximal order
// Z[(1+sqrt(-N))/2], i.e. squarefree N = 3 mod 4.
bool conjugate_attempts(UnitTestReport& rep, const mpz_class& N,
                        const qf::ClassGroup& grp, int max_attempts) {
    const long h = static_cast<long>(grp.h);
    conj48::Setup s = conj48::make_setup(N, grp);

    // Low-precision prepass: the polynomial's height is governed by the sum
    // of the positive conjugate magnitudes, which fixes the working precision.
    double height = 0.0;
    {
        PrecisionContext coarse = PrecisionContext::from_digits(60);
        for (const ap::Complex& wc : conj48::conjugates(s, N, coarse))
            height += std::max(0.0, ap::abs(wc).mag());
    }
    long bits = static_cast<long>(height) + 8 * h + 2048;
    long digits = static_cast<long>(double(bits) / 3.32) + 1;

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        PrecisionContext ctx = PrecisionContext::from_digits(digits);
        try {
            std::vector<ap::Complex> w = conj48::conjugates(s, N, ctx);

            // cross-check: the principal conjugate must equal lambda^48
            Real l48 = ap::pow_ui(cs::lambda(N, ctx), 48);
            Real ratio = w[s.principal].re / l48 - Real(1, ctx);
            const Real& im = w[s.principal].im;
            bool im_ok = im.is_zero() || im.mag() <= im.err_log2() + 1.0;
            if (!im_ok || (!ratio.is_zero() && ratio.mag() > -32.0))
                throw internal_error(
                    "conjugate route: principal conjugate does not match "
                    "lambda^48");

            pb::IntPoly L = pb::poly_from_roots(w, ctx).first;
            if (L.degree() != h || !L.monic())
                throw precision_error("conjugate route: degenerate product");
            record(rep, std::move(L), false, ctx.work());
            return true;
        } catch (const precision_error&) {
            rep.precision_bits = ctx.work();
            digits += digits / 2;
        }
    }
    return false;
}

}  // namespace

UnitTestReport unit_test_lambda(const mpz_class& N, long digits_hint) {
    UnitTestReport rep;
    rep.N = N;
    qf::ClassGroup grp = qf::enumerate(-N);
    rep.h = grp.h;
    long h = static_cast<long>(grp.h);
    bool composite = mpz_probab_prime_p(N.get_mpz_t(), 40) == 0;
    bool field_ok = N > 3 && N % 8 == 3 && N % 3 != 0 && qf::is_squarefree(N);
    long digits = digits_hint > 0 ? digits_hint : 60 + 6 * h;

    // Small degrees: the power-basis lattice is cheap and needs no
    // auxiliary machinery.  Large degrees: go through Q(g) when possible.
    if (h <= 16 || !field_ok) {
        if (direct_attempts(rep, N, h, composite, digits, 4)) return rep;
        if (field_ok) field_attempts(rep, N, h, composite, 2);
        return rep;
    }
    if (field_attempts(rep, N, h, composite, 3)) return rep;
    direct_attempts(rep, N, h, composite, digits, 1);
    return rep;
}

}  // namespace cmrad::lr
