#ifndef CMRAD_EXACTPOLY_HPP
#define CMRAD_EXACTPOLY_HPP

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cmrad/apnum.hpp"
#include "cmrad/common.hpp"
#include "cmrad/polybuild.hpp"

namespace cmrad::xp {

// Resultant of two integer polynomials (Sylvester determinant, exact
// fraction-free Gaussian elimination).
mpz_class resultant(const pb::IntPoly& a, const pb::IntPoly& b);

// disc(p) = (-1)^(d(d-1)/2) res(p, p') / lead(p)
mpz_class discriminant(const pb::IntPoly& p);

// Rabin irreducibility test for p modulo a prime q (q must not divide the
// leading coefficient).
bool irreducible_mod_p(const pb::IntPoly& p, unsigned long q);

// True once p is irreducible modulo one of the first `tries` primes not
// dividing lead*disc; throws not_found_error when every attempt is
// inconclusive (the polynomial may still be irreducible over Z).
bool certify_irreducible(const pb::IntPoly& p, int tries = 25);

// Sparse multivariate integer polynomial over a fixed ordered variable list.
// No zero coefficients are stored.
struct MultiPoly {
    std::vector<std::string> vars;
    std::map<std::vector<unsigned long>, mpz_class> terms;  // exponents -> coeff

    explicit MultiPoly(std::vector<std::string> v) : vars(std::move(v)) {}

    void add(const std::vector<unsigned long>& expo, const mpz_class& c);
    long degree_in(const std::string& var) const;
    bool is_zero() const { return terms.empty(); }
    mpz_class coeff(const std::vector<unsigned long>& expo) const;
    // Exact evaluation at one integer per variable, in order.
    mpz_class eval(const std::vector<mpz_class>& point) const;
    // gcd of all coefficients (0 for the zero polynomial).
    mpz_class content() const;
    // Same polynomial re-indexed over a superset of the variables.
    MultiPoly aligned_to(const std::vector<std::string>& allvars) const;
};

// Sylvester resultant eliminating `var`, exact.  Sign convention: the
// determinant of the Sylvester matrix with the rows of `a` on top, so
// resultant(x - 1, x + 1, x) = 2.  Computed by evaluation at integer
// grids and interpolation on the remaining variables.
MultiPoly resultant(const MultiPoly& a, const MultiPoly& b, const std::string& var);

// The relation Phi(J, g) between the level-48 invariant g and the
// j-invariant: eliminate f from the octic constraint Z(f,g) and the
// integrality polynomial T(f,g) - t, then eliminate t against
// 32768 t^3 + J (since gamma2 = -32 t and J = gamma2^3), and take the
// primitive part.  The result is anchored by five h=1 data points; an
// assumption_error signals that the primitive part failed that test.
MultiPoly derive_modular_relation();

// root = u + cbrt(A + sqrt(B)) + cbrt(A - sqrt(B)), all rational.
struct CubicRadical {
    mpq_class u, A, B;
};

// Cardano data for the unique real root of a monic cubic with negative
// discriminant; three real roots raise domain_error (real radicals do not
// reach the casus irreducibilis).
CubicRadical cubic_radicals(const pb::IntPoly& p);

// Evaluate the Cardano data and assert p vanishes there.
ap::Real cubic_value(const CubicRadical& c, const pb::IntPoly& p,
                     const ap::PrecisionContext& ctx);

// Integer data A_k + B_k sqrt(-N) defining the Lagrange resolvents of a
// degree-p subfield generator, p in {5, 7}; pairs has (p-1)/2 entries,
// conjugate terms implied.  denom scales the pairs (1 here; 2 would allow
// half-integer data).
struct ResolventData {
    mpz_class N;
    int p = 0;
    std::vector<std::pair<mpz_class, mpz_class>> pairs;
    mpz_class denom = 1;
};

// Real root of q from its resolvent data: the real p-th roots of
// u_n = Re[sum_k (A_k + B_k sqrt(-N)) e^(2 pi i k n / p)], n = 1..p-1,
// summed with the trace and divided by p.  Asserts q(result) is zero to
// the certified error bound.
ap::Real radical_eval(const ResolventData& data, const pb::IntPoly& q,
                      const ap::PrecisionContext& ctx);

// All complex roots of p by Durand-Kerner iteration with a final Newton
// polish; error bounds are set from the last correction step.
std::vector<ap::Complex> poly_roots(const pb::IntPoly& p,
                                    const ap::PrecisionContext& ctx);

// Search cyclic orderings of the roots of q (monic, prime degree p in
// {5,7}, exactly one real root) until every Lagrange resolvent p-th power
// is a real number recognizable as A + B sqrt(-N) with integer (or
// half-integer) A, B; verified by radical_eval reproducing the real root.
ResolventData derive_resolvents(const pb::IntPoly& q, const mpz_class& N,
                                const ap::PrecisionContext& ctx);

}  // namespace cmrad::xp

#endif
