#ifndef CMRAD_LATREL_HPP
#define CMRAD_LATREL_HPP

#include <gmpxx.h>

#include <vector>

#include "cmrad/apnum.hpp"
#include "cmrad/common.hpp"
#include "cmrad/polybuild.hpp"

namespace cmrad::lr {

using Matrix = std::vector<std::vector<mpz_class>>;

// Exact-integer LLL reduction of the row basis, delta = 99/100.
// Throws domain_error on linearly dependent rows.
Matrix lll_reduce(Matrix basis);

struct RelationResult {
    std::vector<mpz_class> coefficients;
    double residual_log2;    // log2 |sum m_i v_i|
    double confidence_gap;   // ||b2|| / ||b1|| of the reduced lattice
};

// Small integer relation among the values: |sum m_i v_i| < 2^(-bits/2).
// Throws not_found_error when no confident relation exists at this precision.
RelationResult lindep(const std::vector<ap::Real>& values,
                      const ap::PrecisionContext& ctx);

// Minimal-polynomial candidate of degree <= d for x, primitive with positive
// leading coefficient; verified by residual, confidence gap, and a Newton
// refinement step converging back to x.
pb::IntPoly algdep(const ap::Real& x, long d, const ap::PrecisionContext& ctx);

// Minimal-polynomial candidate for x known to lie in Q(g), where g is a
// real root of a monic integer polynomial whose full complex root list is
// g_roots.  Finds c*x = sum d_i g^i by lindep, maps the relation across all
// roots to obtain the conjugates of x, and rounds prod (y - sigma(x)) to an
// integer polynomial.  Far cheaper than algdep when x spans many orders of
// magnitude relative to its conjugates.
pb::IntPoly minpoly_in_field(const ap::Real& x, const ap::Real& g,
                             const std::vector<ap::Complex>& g_roots,
                             const ap::PrecisionContext& ctx);

struct UnitTestReport {
    mpz_class N;
    unsigned long h = 0;
    long degree = 0;         // degree of the recognized polynomial
    pb::IntPoly L;           // minimal polynomial found (of lambda or lambda^2)
    bool recognized = false; // some polynomial was found
    bool is_unit = false;    // monic with |constant| = 1
    bool used_square = false;
    long precision_bits = 0;
};

// Conjecture-1 driver: recognize the minimal polynomial of lambda(N) at
// degree h, then 2h, then of lambda^2 at degree h (composite N), escalating
// precision up to 3 times; inconclusive results come back with
// recognized = false rather than an exception.
UnitTestReport unit_test_lambda(const mpz_class& N, long digits_hint = 0);

}  // namespace cmrad::lr

#endif
