#ifndef CMRAD_CHOWLA_HPP
#define CMRAD_CHOWLA_HPP

#include <gmpxx.h>

#include "cmrad/apnum.hpp"
#include "cmrad/common.hpp"

namespace cmrad::cs {

struct ChowlaResult {
    mpz_class N;
    unsigned long h;
    ap::Real G_N, lambda, k_N, K_N;
};

// G_N = prod_{k=1}^{N-1} Gamma(k/N)^((-N/k)), the direct Gamma product.
// Refused for N > 200 (N Gamma evaluations; oracle use only).
ap::Real gn_direct(const mpz_class& N, const ap::PrecisionContext& ctx);

// G_N via the eta product: (2 pi N)^h prod (1/a) |eta((b+sqrt(-N))/(2a))|^4.
ap::Real gn_eta(const mpz_class& N, const ap::PrecisionContext& ctx);

// lambda = prod a^(1/4) |eta((1+sqrt(-N))/2) / eta((b+sqrt(-N))/(2a))|
// over reduced classes; exactly 1 when h = 1.
ap::Real lambda(const mpz_class& N, const ap::PrecisionContext& ctx);

// Singular value: k^2 = (32/r^24) / (1 + sqrt(1 - 64/r^24)) (the
// cancellation-free form of 1/2 - sqrt(1/4 - 16/r^24)).  Verifies the
// defining AGM relation before returning.
ap::Real singular_k(const mpz_class& N, const ap::PrecisionContext& ctx);

// K_N = (pi/2) / AGM(1, sqrt(1 - k^2)).
ap::Real elliptic_K(const mpz_class& N, const ap::PrecisionContext& ctx);

// |K_N - (r/2)^2 sqrt((2 pi/N)(lambda^4 G_N)^(1/h))|: the identity linking
// the AGM route to the Gamma/eta route.
ap::Real eq_w_check(const mpz_class& N, const ap::PrecisionContext& ctx);

ChowlaResult chowla(const mpz_class& N, const ap::PrecisionContext& ctx);

}  // namespace cmrad::cs

#endif
