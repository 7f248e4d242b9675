#include "cmrad/exactpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace {

mpq_class frac(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace

namespace cmrad::xp {

namespace {

// Fraction-free (Bareiss) determinant of a square mpz matrix; destroys m.
mpz_class bareiss_det(std::vector<std::vector<mpz_class>>& m) {
    const size_t n = m.size();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

}  // namespace

mpz_class resultant(const pb::IntPoly& a, const pb::IntPoly& b) {
    if (a.coeffs.empty() || b.coeffs.empty())
        throw domain_error("resultant: zero polynomial");
    long da = a.degree(), db = b.degree();
    if (da == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), a.coeffs[0].get_mpz_t(), db);
        return r;
    }
    if (db == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), b.coeffs[0].get_mpz_t(), da);
        return r;
    }
    size_t n = static_cast<size_t>(da + db);
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n, mpz_class(0)));
    // Sylvester matrix: db rows of a's coefficients (descending), then da of b's
    for (long i = 0; i < db; ++i)
        for (long j = 0; j <= da; ++j) m[i][i + j] = a.coeffs[da - j];
    for (long i = 0; i < da; ++i)
        for (long j = 0; j <= db; ++j) m[db + i][i + j] = b.coeffs[db - j];
    return bareiss_det(m);
}

namespace {

// Dense polynomials over Z/q, ascending coefficients, q a small prime.
using PolyP = std::vector<unsigned long>;

void trim(PolyP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP mulmod(const PolyP& a, const PolyP& b, const PolyP& f, unsigned long q) {
    if (a.empty() || b.empty()) return {};
    std::vector<mpz_class> acc(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] += mpz_class(a[i]) * b[j];
    // reduce modulo monic-scaled f: f is monic mod q by construction
    size_t n = f.size() - 1;
    for (size_t d = acc.size(); d-- > n;) {
        mpz_class c = acc[d] % q;
        if (c == 0) continue;
        for (size_t j = 0; j <= n; ++j)
            acc[d - n + j] -= c * f[j];
        acc[d] = 0;
    }
    PolyP out(std::min(acc.size(), n), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        mpz_class c = acc[i] % q;
        if (c < 0) c += q;
        out[i] = c.get_ui();
    }
    trim(out);
    return out;
}

PolyP powmod(PolyP base, mpz_class e, const PolyP& f, unsigned long q) {
    PolyP result{1};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mulmod(result, base, f, q);
        base = mulmod(base, base, f, q);
        e >>= 1;
    }
    return result;
}

unsigned long inv_mod(unsigned long a, unsigned long q) {
    mpz_class r;
    mpz_class am(a), qm(q);
    if (mpz_invert(r.get_mpz_t(), am.get_mpz_t(), qm.get_mpz_t()) == 0)
        throw internal_error("inv_mod: not invertible");
    return r.get_ui();
}

PolyP gcd_mod(PolyP a, PolyP b, unsigned long q) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        unsigned long binv = inv_mod(b.back(), q);
        while (a.size() >= b.size()) {
            unsigned long c = mpz_class(mpz_class(a.back()) * binv % q).get_ui();
            size_t off = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j) {
                mpz_class v = mpz_class(a[off + j]) - mpz_class(c) * b[j];
                v %= q;
                if (v < 0) v += q;
                a[off + j] = v.get_ui();
            }
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

PolyP sub_x(const PolyP& a, unsigned long q) {
    PolyP r = a;
    if (r.size() < 2) r.resize(2, 0);
    r[1] = (r[1] + q - 1) % q;
    trim(r);
    return r;
}

}  // namespace

bool irreducible_mod_p(const pb::IntPoly& p, unsigned long q) {
    long n = p.degree();
    if (n < 1) return false;
    if (mpz_class(p.lead() % q) == 0)
        throw domain_error("irreducible_mod_p: prime divides the leading coefficient");
    // monic image mod q
    unsigned long lc = mpz_class((p.lead() % q + q) % q).get_ui();
    unsigned long linv = inv_mod(lc, q);
    PolyP f(n + 1, 0);
    for (long i = 0; i <= n; ++i) {
        mpz_class c = p.coeffs[i] % q;
        if (c < 0) c += q;
        f[i] = mpz_class(c * linv % q).get_ui();
    }
    if (n == 1) return true;
    PolyP x{0, 1};
    // x^(q^n) == x mod f, and gcd(x^(q^(n/t)) - x, f) = 1 for prime t | n
    mpz_class qn;
    mpz_class qm(q);
    mpz_pow_ui(qn.get_mpz_t(), qm.get_mpz_t(), n);
    PolyP top = powmod(x, qn, f, q);
    if (top != x) return false;
    long m = n;
    for (long t = 2; t * t <= n; ++t) {
        if (m % t != 0) continue;
        while (m % t == 0) m /= t;
        mpz_class e;
        mpz_pow_ui(e.get_mpz_t(), qm.get_mpz_t(), n / t);
        PolyP g = gcd_mod(sub_x(powmod(x, e, f, q), q), f, q);
        if (g.size() != 1) return false;
    }
    if (m > 1) {
        mpz_class e;
        mpz_pow_ui(e.get_mpz_t(), qm.get_mpz_t(), n / m);
        PolyP g = gcd_mod(sub_x(powmod(x, e, f, q), q), f, q);
        if (g.size() != 1) return false;
    }
    return true;
}

bool certify_irreducible(const pb::IntPoly& p, int tries) {
    static const unsigned long primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                           73, 79, 83, 89, 97, 101, 103, 107, 109, 113};
    int used = 0;
    for (unsigned long q : primes) {
        if (used >= tries) break;
        if (mpz_class(p.lead() % q) == 0) continue;
        ++used;
        if (irreducible_mod_p(p, q)) return true;
    }
    throw not_found_error("certify_irreducible: inconclusive after all primes tried");
}

mpz_class discriminant(const pb::IntPoly& p) {
    long d = p.degree();
    if (d < 1) throw domain_error("discriminant: degree must be >= 1");
    mpz_class r = resultant(p, p.derivative());
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), r.get_mpz_t(), p.lead().get_mpz_t());
    return ((d * (d - 1) / 2) % 2 == 0) ? q : mpz_class(-q);
}

// ---------------------------------------------------------------- MultiPoly

void MultiPoly::add(const std::vector<unsigned long>& expo, const mpz_class& c) {
    if (expo.size() != vars.size())
        throw domain_error("MultiPoly::add: exponent tuple length mismatch");
    if (c == 0) return;
    mpz_class& slot = terms[expo];
    slot += c;
    if (slot == 0) terms.erase(expo);
}

long MultiPoly::degree_in(const std::string& var) const {
    auto it = std::find(vars.begin(), vars.end(), var);
    if (it == vars.end()) return 0;
    size_t idx = static_cast<size_t>(it - vars.begin());
    long d = terms.empty() ? -1 : 0;
    for (const auto& [e, c] : terms) d = std::max(d, static_cast<long>(e[idx]));
    return d;
}

mpz_class MultiPoly::coeff(const std::vector<unsigned long>& expo) const {
    auto it = terms.find(expo);
    return it == terms.end() ? mpz_class(0) : it->second;
}

mpz_class MultiPoly::eval(const std::vector<mpz_class>& point) const {
    if (point.size() != vars.size())
        throw domain_error("MultiPoly::eval: point length mismatch");
    mpz_class sum = 0;
    for (const auto& [e, c] : terms) {
        mpz_class t = c;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), point[i].get_mpz_t(), e[i]);
            t *= pw;
        }
        sum += t;
    }
    return sum;
}

mpz_class MultiPoly::content() const {
    mpz_class g = 0;
    for (const auto& [e, c] : terms) g = gcd(g, c);
    return g;
}

MultiPoly MultiPoly::aligned_to(const std::vector<std::string>& allvars) const {
    MultiPoly out(allvars);
    std::vector<size_t> pos(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) {
        auto it = std::find(allvars.begin(), allvars.end(), vars[i]);
        if (it == allvars.end())
            throw domain_error("MultiPoly::aligned_to: variable not in target list");
        pos[i] = static_cast<size_t>(it - allvars.begin());
    }
    for (const auto& [e, c] : terms) {
        std::vector<unsigned long> ne(allvars.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
        out.add(ne, c);
    }
    return out;
}

namespace {

// Newton interpolation at nodes 0..n-1, monomial coefficients (ascending).
std::vector<mpq_class> interp_nodes(const std::vector<mpq_class>& vals) {
    const long n = static_cast<long>(vals.size());
    std::vector<mpq_class> dd = vals;  // divided differences in place
    for (long j = 1; j < n; ++j)
        for (long i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / j;
    std::vector<mpq_class> poly{dd[n - 1]};
    for (long i = n - 2; i >= 0; --i) {
        // poly <- poly * (x - i) + dd[i]
        std::vector<mpq_class> np(poly.size() + 1, mpq_class(0));
        for (size_t k = 0; k < poly.size(); ++k) {
            np[k + 1] += poly[k];
            np[k] -= mpq_class(i) * poly[k];
        }
        np[0] += dd[i];
        poly = std::move(np);
    }
    return poly;
}

// Coefficient list (ascending in `var`, padded to declared degree) of a
// MultiPoly specialized at integer values for all other variables.
std::vector<mpz_class> specialize(const MultiPoly& p, size_t var_idx, long deg,
                                  const std::vector<mpz_class>& others_point,
                                  const std::vector<size_t>& other_idx) {
    std::vector<mpz_class> out(static_cast<size_t>(deg) + 1, mpz_class(0));
    for (const auto& [e, c] : p.terms) {
        mpz_class t = c;
        for (size_t oi = 0; oi < other_idx.size(); ++oi) {
            unsigned long ex = e[other_idx[oi]];
            if (ex == 0) continue;
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), others_point[oi].get_mpz_t(), ex);
            t *= pw;
        }
        out[e[var_idx]] += t;
    }
    return out;
}

}  // namespace

MultiPoly resultant(const MultiPoly& a0, const MultiPoly& b0, const std::string& var) {
    // common variable list: a's order, then b's extras
    std::vector<std::string> allvars = a0.vars;
    for (const std::string& v : b0.vars)
        if (std::find(allvars.begin(), allvars.end(), v) == allvars.end())
            allvars.push_back(v);
    MultiPoly a = a0.aligned_to(allvars);
    MultiPoly b = b0.aligned_to(allvars);
    long da = a.degree_in(var), db = b.degree_in(var);
    if (da < 1 || db < 1)
        throw domain_error("resultant: both polynomials must be nonzero in the variable");
    auto vit = std::find(allvars.begin(), allvars.end(), var);
    size_t var_idx = static_cast<size_t>(vit - allvars.begin());
    std::vector<std::string> others;
    std::vector<size_t> other_idx;
    for (size_t i = 0; i < allvars.size(); ++i)
        if (i != var_idx) {
            others.push_back(allvars[i]);
            other_idx.push_back(i);
        }

    // Bezout-style degree bound per remaining variable
    std::vector<long> dims;
    for (const std::string& v : others)
        dims.push_back(a.degree_in(v) * db + b.degree_in(v) * da + 1);

    size_t total = 1;
    for (long d : dims) total *= static_cast<size_t>(d);

    // evaluate the fixed-size Sylvester determinant on the whole grid
    std::vector<mpq_class> values(total);
    std::vector<mpz_class> point(others.size());
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rest = idx;
        for (size_t v = 0; v < others.size(); ++v) {
            point[v] = static_cast<long>(rest % static_cast<size_t>(dims[v]));
            rest /= static_cast<size_t>(dims[v]);
        }
        std::vector<mpz_class> ca = specialize(a, var_idx, da, point, other_idx);
        std::vector<mpz_class> cb = specialize(b, var_idx, db, point, other_idx);
        size_t n = static_cast<size_t>(da + db);
        std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n, mpz_class(0)));
        for (long i = 0; i < db; ++i)
            for (long j = 0; j <= da; ++j) m[i][i + j] = ca[static_cast<size_t>(da - j)];
        for (long i = 0; i < da; ++i)
            for (long j = 0; j <= db; ++j) m[db + i][i + j] = cb[static_cast<size_t>(db - j)];
        values[idx] = bareiss_det(m);
    }

    // interpolate one axis at a time
    for (size_t v = 0; v < others.size(); ++v) {
        size_t dim = static_cast<size_t>(dims[v]);
        size_t stride = 1;
        for (size_t w = 0; w < v; ++w) stride *= static_cast<size_t>(dims[w]);
        size_t block = stride * dim;
        for (size_t base = 0; base < total; base += block)
            for (size_t off = 0; off < stride; ++off) {
                std::vector<mpq_class> line(dim);
                for (size_t i = 0; i < dim; ++i) line[i] = values[base + off + i * stride];
                std::vector<mpq_class> cf = interp_nodes(line);
                cf.resize(dim, mpq_class(0));
                for (size_t i = 0; i < dim; ++i) values[base + off + i * stride] = cf[i];
            }
    }

    MultiPoly out(others);
    for (size_t idx = 0; idx < total; ++idx) {
        if (values[idx] == 0) continue;
        if (values[idx].get_den() != 1)
            throw internal_error("resultant: interpolation produced a non-integer");
        size_t rest = idx;
        std::vector<unsigned long> e(others.size());
        for (size_t v = 0; v < others.size(); ++v) {
            e[v] = rest % static_cast<size_t>(dims[v]);
            rest /= static_cast<size_t>(dims[v]);
        }
        out.add(e, values[idx].get_num());
    }
    return out;
}

// --------------------------------------------------- the Appendix relation

namespace {

MultiPoly constraint_Z() {
    MultiPoly Z({"f", "g"});
    // 2f^4 - 16f^3g^2 + 20f^2g^4 - 12f^2g - 8fg^6 + 16fg^3 - 2f
    //   + g^8 - 4g^5 + 3g^2
    Z.add({4, 0}, 2);
    Z.add({3, 2}, -16);
    Z.add({2, 4}, 20);
    Z.add({2, 1}, -12);
    Z.add({1, 6}, -8);
    Z.add({1, 3}, 16);
    Z.add({1, 0}, -2);
    Z.add({0, 8}, 1);
    Z.add({0, 5}, -4);
    Z.add({0, 2}, 3);
    return Z;
}

MultiPoly integrality_T() {
    MultiPoly T({"f", "g"});
    // 8f^8 + 32f^6g + 16f^5 + 40f^4g^2 + 32f^3g + 16f^2g^3 + 6f^2
    //   + 12fg^2 + g^4 + 2g
    T.add({8, 0}, 8);
    T.add({6, 1}, 32);
    T.add({5, 0}, 16);
    T.add({4, 2}, 40);
    T.add({3, 1}, 32);
    T.add({2, 3}, 16);
    T.add({2, 0}, 6);
    T.add({1, 2}, 12);
    T.add({0, 4}, 1);
    T.add({0, 1}, 2);
    return T;
}

}  // namespace

MultiPoly derive_modular_relation() {
    MultiPoly Z = constraint_Z().aligned_to({"f", "g", "t"});
    MultiPoly Tt = integrality_T().aligned_to({"f", "g", "t"});
    Tt.add({0, 0, 1}, -1);  // T(f,g) - t
    MultiPoly R1 = resultant(Z, Tt, "f");  // in (g, t)
    MultiPoly S = R1.aligned_to({"g", "t", "J"});
    MultiPoly cube(std::vector<std::string>{"g", "t", "J"});
    cube.add({0, 3, 0}, 32768);  // gamma2 = -32 t, J = gamma2^3 = -32768 t^3
    cube.add({0, 0, 1}, 1);
    MultiPoly phi0 = resultant(S, cube, "t");  // in (g, J)

    mpz_class cont = phi0.content();
    if (cont == 0) throw internal_error("derive_modular_relation: zero resultant");
    MultiPoly phi(phi0.vars);
    for (const auto& [e, c] : phi0.terms) phi.add(e, mpz_class(c / cont));
    // orient: the pure g^192 coefficient positive
    if (phi.coeff({192, 0}) < 0) {
        MultiPoly neg(phi.vars);
        for (const auto& [e, c] : phi.terms) neg.add(e, mpz_class(-c));
        phi = std::move(neg);
    }

    // anchor at the five h=1 (J, g) pairs
    static const std::pair<const char*, long> points[] = {
        {"-32768", -1}, {"-884736", 1}, {"-884736000", 0}, {"-147197952000", 1}};
    for (int i = 0; i < 4; ++i) {
        if (phi.eval({mpz_class(points[i].second), mpz_class(points[i].first)}) != 0)
            throw assumption_error(
                "derive_modular_relation: primitive part misses an h=1 data point");
    }
    mpz_class j163("-262537412640768000");
    if (phi.eval({mpz_class(-2), j163}) != 0)
        throw assumption_error(
            "derive_modular_relation: primitive part misses the N=163 point");
    return phi;
}

// ------------------------------------------------------------ radical forms

CubicRadical cubic_radicals(const pb::IntPoly& p) {
    if (p.degree() != 3 || !p.monic())
        throw domain_error("cubic_radicals: need a monic cubic");
    mpq_class a2(p.coeffs[2]), a1(p.coeffs[1]), a0(p.coeffs[0]);
    // depress with x = y - a2/3
    mpq_class P = a1 - a2 * a2 / 3;
    mpq_class Q = 2 * a2 * a2 * a2 / 27 - a2 * a1 / 3 + a0;
    CubicRadical c;
    c.u = -a2 / 3;
    c.A = -Q / 2;
    c.B = Q * Q / 4 + P * P * P / 27;
    if (c.B <= 0)
        throw domain_error("cubic_radicals: three real roots (casus irreducibilis)");
    return c;
}

namespace {

ap::Real cbrt_rational_shift(const mpq_class& A, const ap::Real& sB, int sign,
                             const ap::PrecisionContext& ctx) {
    ap::Real base = ap::Real(A, ctx) + (sign > 0 ? sB : -sB);
    return nthroot(base, 3);
}

}  // namespace

ap::Real cubic_value(const CubicRadical& c, const pb::IntPoly& p,
                     const ap::PrecisionContext& ctx) {
    ap::PrecisionContext inner(ctx.bits + 2 * ctx.guard_bits, ctx.guard_bits);
    ap::Real sB = sqrt(ap::Real(c.B, inner));
    ap::Real v = ap::Real(c.u, inner) + cbrt_rational_shift(c.A, sB, +1, inner) +
                 cbrt_rational_shift(c.A, sB, -1, inner);
    ap::Real resid = p.eval(v);
    if (!resid.is_zero() && resid.mag() > resid.err_log2() + 8)
        throw assumption_error("cubic_value: Cardano data does not satisfy the cubic");
    return v;
}

// -------------------------------------------------------------- poly_roots

std::vector<ap::Complex> poly_roots(const pb::IntPoly& p,
                                    const ap::PrecisionContext& ctx) {
    using ap::Complex;
    using ap::Real;
    const long n = p.degree();
    if (n < 1) throw domain_error("poly_roots: degree must be >= 1");
    ap::PrecisionContext work(ctx.bits + 2 * ctx.guard_bits, ctx.guard_bits);

    // Cauchy bound on root magnitude
    double lead_mag = mpz_sizeinbase(p.lead().get_mpz_t(), 2);
    double rmag = 0.0;
    for (long i = 0; i < n; ++i)
        if (p.coeffs[i] != 0)
            rmag = std::max(rmag, (double(mpz_sizeinbase(p.coeffs[i].get_mpz_t(), 2)) -
                                   lead_mag) /
                                      double(n - i));
    Real radius = ap::exp(Real(static_cast<long>(rmag) + 1, work) *
                          ap::log(Real(2, work)));

    std::vector<Complex> z;
    Real twopi = Real(2, work) * ap::pi(work);
    for (long k = 0; k < n; ++k) {
        Real angle = twopi * Real(frac(4 * k + 1, 4 * n), work);
        Complex u = ap::unit_phase(angle, work);
        z.push_back(Complex(u.re * radius, u.im * radius));
    }

    const double target = -double(ctx.bits + ctx.guard_bits / 2);
    pb::IntPoly dp = p.derivative();
    bool converged = false;
    for (int iter = 0; iter < 4000 && !converged; ++iter) {
        double worst = -std::numeric_limits<double>::infinity();
        for (long k = 0; k < n; ++k) {
            Complex denom(Real(p.lead(), work), Real(0, work));
            for (long j = 0; j < n; ++j)
                if (j != k) denom = denom * (z[k] - z[j]);
            Complex step = p.eval(z[k]) / denom;
            z[k] = z[k] - step;
            double rel = std::max(step.re.mag(), step.im.mag()) -
                         std::max(0.0, abs(z[k]).mag());
            worst = std::max(worst, rel);
        }
        if (worst < target) converged = true;
    }
    if (!converged) throw precision_error("poly_roots: Durand-Kerner did not converge");

    // strip the pessimistic per-operation error accumulation, then certify
    // each root with a Newton step whose size bounds the true error
    std::vector<Complex> out;
    for (long k = 0; k < n; ++k) {
        Complex r = z[k];
        r.re.set_err_log2(-std::numeric_limits<double>::infinity());
        r.im.set_err_log2(-std::numeric_limits<double>::infinity());
        for (int it = 0; it < 2; ++it) {
            Complex step = p.eval(r) / dp.eval(r);
            r = r - step;
            r.re.set_err_log2(-std::numeric_limits<double>::infinity());
            r.im.set_err_log2(-std::numeric_limits<double>::infinity());
        }
        Complex step = p.eval(r) / dp.eval(r);
        double err = std::max(step.re.mag(), step.im.mag()) + 8;
        r.re.set_err_log2(err);
        r.im.set_err_log2(err);
        out.push_back(r);
    }
    return out;
}

// -------------------------------------------------------------- resolvents

ap::Real radical_eval(const ResolventData& data, const pb::IntPoly& q,
                      const ap::PrecisionContext& ctx) {
    using ap::Real;
    const int p = data.p;
    if (p != 5 && p != 7) throw domain_error("radical_eval: p must be 5 or 7");
    if (q.degree() != p || !q.monic())
        throw domain_error("radical_eval: q must be monic of degree p");
    if (data.pairs.size() != static_cast<size_t>((p - 1) / 2))
        throw domain_error("radical_eval: need (p-1)/2 pairs");
    ap::PrecisionContext inner(ctx.bits + 2 * ctx.guard_bits, ctx.guard_bits);

    Real sN = sqrt(Real(data.N, inner));
    Real twopi = Real(2, inner) * ap::pi(inner);
    Real den(data.denom, inner);
    Real sum(0, inner);
    for (int n = 1; n < p; ++n) {
        Real un(0, inner);
        for (size_t k = 0; k < data.pairs.size(); ++k) {
            Real angle = twopi * Real(frac((static_cast<long>(k) + 1) * n, p), inner);
            ap::Complex ph = ap::unit_phase(angle, inner);
            un = un + (Real(data.pairs[k].first, inner) * ph.re -
                       Real(data.pairs[k].second, inner) * sN * ph.im) /
                          den;
        }
        sum = sum + nthroot(un, static_cast<unsigned long>(p));
    }
    Real trace = -Real(q.coeffs[static_cast<size_t>(p - 1)], inner);
    Real value = (trace + sum) / Real(p, inner);
    Real resid = q.eval(value);
    if (!resid.is_zero() && resid.mag() > resid.err_log2() + 8)
        throw assumption_error("radical_eval: data does not reproduce a root");
    return value;
}

ResolventData derive_resolvents(const pb::IntPoly& q, const mpz_class& N,
                                const ap::PrecisionContext& ctx) {
    using ap::Complex;
    using ap::Real;
    const long p = q.degree();
    if ((p != 5 && p != 7) || !q.monic())
        throw domain_error("derive_resolvents: need a monic quintic or septic");
    const long m = (p - 1) / 2;
    ap::PrecisionContext inner(ctx.bits + 2 * ctx.guard_bits, ctx.guard_bits);

    std::vector<Complex> roots = poly_roots(q, inner);
    std::vector<Complex> cplx;
    const Complex* real_root = nullptr;
    for (const Complex& r : roots) {
        double scale = std::max(0.0, abs(r).mag());
        if (r.im.is_zero() || r.im.mag() < scale - double(inner.bits) / 2) {
            if (real_root) throw domain_error("derive_resolvents: several real roots");
            real_root = &r;
        } else if (r.im.sign() > 0) {
            cplx.push_back(r);
        }
    }
    if (!real_root || static_cast<long>(cplx.size()) != m)
        throw domain_error("derive_resolvents: root pattern is not 1 real + m pairs");

    // zeta^j table
    std::vector<Complex> zeta;
    Real twopi = Real(2, inner) * ap::pi(inner);
    for (long j = 0; j < p; ++j)
        zeta.push_back(ap::unit_phase(twopi * Real(frac(j, p), inner), inner));
    Real sN = sqrt(Real(N, inner));

    std::vector<long> perm(m);
    for (long i = 0; i < m; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end());
    do {
        for (long flips = 0; flips < (1L << m); ++flips) {
            std::vector<Complex> slot(static_cast<size_t>(p), Complex(inner));
            slot[0] = *real_root;
            for (long i = 0; i < m; ++i) {
                Complex r = cplx[static_cast<size_t>(perm[i])];
                if ((flips >> i) & 1) r = r.conj();
                slot[static_cast<size_t>(i + 1)] = r;
                slot[static_cast<size_t>(p - (i + 1))] = r.conj();
            }
            // resolvent p-th powers must be real
            std::vector<Real> theta;
            bool ok = true;
            for (long n = 1; n < p && ok; ++n) {
                Complex t(Real(0, inner), Real(0, inner));
                for (long mm = 0; mm < p; ++mm)
                    t = t + slot[static_cast<size_t>(mm)] *
                                zeta[static_cast<size_t>((n * mm) % p)];
                double scale = std::max(0.0, t.re.mag());
                if (!t.im.is_zero() && t.im.mag() > scale - double(inner.bits) / 4) {
                    ok = false;
                    break;
                }
                theta.push_back(pow_ui(t.re, static_cast<unsigned long>(p)));
            }
            if (!ok) continue;
            Real S(0, inner);
            for (const Real& th : theta) S = S + th;
            ResolventData data;
            data.N = N;
            data.p = static_cast<int>(p);
            for (long k = 1; k <= m && ok; ++k) {
                Complex ck(Real(0, inner), Real(0, inner));
                for (long n = 1; n < p; ++n)
                    ck = ck + zeta[static_cast<size_t>(((p - k) * n) % p)] *
                                  theta[static_cast<size_t>(n - 1)];
                Real A = (Real(2, inner) * ck.re - Real(2, inner) * S) / Real(p, inner);
                Real B = Real(2, inner) * ck.im / (Real(p, inner) * sN);
                // integer or half-integer recognition
                mpz_class dn = 1;
                Real A2 = A, B2 = B;
                if (A.distance_to_int() > 1e-8 || B.distance_to_int() > 1e-8) {
                    dn = 2;
                    A2 = A + A;
                    B2 = B + B;
                    if (A2.distance_to_int() > 1e-8 || B2.distance_to_int() > 1e-8) {
                        ok = false;
                        break;
                    }
                }
                if (dn == 2 && data.denom == 1 && !data.pairs.empty()) {
                    for (auto& pr : data.pairs) {
                        pr.first *= 2;
                        pr.second *= 2;
                    }
                }
                if (dn == 2) data.denom = 2;
                if (data.denom == 2 && dn == 1) {
                    A2 = A + A;
                    B2 = B + B;
                }
                data.pairs.emplace_back(A2.round_to_int(), B2.round_to_int());
            }
            if (!ok) continue;
            try {
                Real v = radical_eval(data, q, ctx);
                Real gap = v - real_root->re;
                if (gap.is_zero() || gap.mag() < -double(ctx.bits) / 2) return data;
            } catch (const assumption_error&) {
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    throw not_found_error("derive_resolvents: no ordering recognized at " +
                          std::to_string(ctx.bits) + " bits");
}

}  // namespace cmrad::xp
