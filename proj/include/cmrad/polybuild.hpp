#ifndef CMRAD_POLYBUILD_HPP
#define CMRAD_POLYBUILD_HPP

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "cmrad/apnum.hpp"
#include "cmrad/common.hpp"

namespace cmrad::pb {

// Dense integer polynomial, constant term first, leading coefficient nonzero.
struct IntPoly {
    std::vector<mpz_class> coeffs;

    long degree() const { return static_cast<long>(coeffs.size()) - 1; }
    const mpz_class& lead() const { return coeffs.back(); }
    bool monic() const { return !coeffs.empty() && coeffs.back() == 1; }
    bool operator==(const IntPoly& o) const { return coeffs == o.coeffs; }

    // Formal derivative.
    IntPoly derivative() const;
    // Exact evaluation.
    mpq_class eval(const mpq_class& x) const;
    ap::Real eval(const ap::Real& x) const;
    ap::Complex eval(const ap::Complex& x) const;
};

// How close the float coefficients were to integers before rounding.
struct RoundingCertificate {
    double max_distance = 0.0;  // largest |coefficient - nearest integer|
    long bits_used = 0;
    int escalations = 0;
};

// Monic integer polynomial from a conjugation-closed multiset of roots.
// Throws precision_error when the rounding margin is too large (the caller
// escalates precision and retries).
std::pair<IntPoly, RoundingCertificate> poly_from_roots(
    const std::vector<ap::Complex>& roots, const ap::PrecisionContext& ctx);

// Hilbert class polynomial of discriminant -N over all reduced classes.
IntPoly hilbert_poly(const mpz_class& N, long digits_hint = 0);

struct InvariantPolys {
    IntPoly F, G;
    RoundingCertificate cert;
};

// Degree-h minimal-polynomial candidates for f and g, built from the 3h
// roots of the Weber polynomial for disc -4N grouped into equal-gamma2
// triples.  When verify is true the result is recomputed at 1.25x precision
// and must round to the same integers.
InvariantPolys invariant_polys(const mpz_class& N, long digits_hint = 0,
                               bool verify = true);

// The h complex roots of G at the given precision: -(1/r1 + 1/r2 + 1/r3)
// over each equal-gamma2 triple of Weber roots for disc -4N.
std::vector<ap::Complex> invariant_g_roots(const mpz_class& N,
                                           const ap::PrecisionContext& ctx);

// max |coefficient|
mpz_class poly_height(const IntPoly& p);

// Integer square root of disc(p) / (-N)^((d-1)/2) for a monic p of odd
// degree d; throws assumption_error when the quotient is not a perfect
// square (the field-discriminant assumption failed).
mpz_class poly_index(const IntPoly& p, const mpz_class& N);

}  // namespace cmrad::pb

#endif
