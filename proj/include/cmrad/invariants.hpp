#ifndef CMRAD_INVARIANTS_HPP
#define CMRAD_INVARIANTS_HPP

#include <gmpxx.h>

#include "cmrad/apnum.hpp"
#include "cmrad/common.hpp"
#include "cmrad/quadforms.hpp"

namespace cmrad::inv {

// Sign triple [S1,S2,S3] selecting the branch of the nested square roots;
// determined by N mod 64 and defined only for N = 3 mod 8.
struct Signature {
    int S1, S2, S3;

    bool operator==(const Signature& o) const {
        return S1 == o.S1 && S2 == o.S2 && S3 == o.S3;
    }
};

Signature signature(const mpz_class& N);

// Per-N record of the class-invariant data.
struct InvariantBundle {
    mpz_class N;
    ap::Real r, s, f, g, gamma2, j;
    Signature sig;
    // N = 3 and N = 27 give f = g = 0 and sit outside the conjectural family.
    bool within_conjecture = true;
};

// r = e^(-pi i/24) eta((1+sqrt(-N))/2) / eta(sqrt(-N)); real and > 2^(1/4).
ap::Real weber_r(const mpz_class& N, const ap::PrecisionContext& ctx);

// Full bundle: s from the signature branch, f = r/2 - s/sqrt(r),
// g = -1/r + s*sqrt(r), gamma2 = 256/r^16 - r^8, j = gamma2^3.
InvariantBundle fg_pair(const mpz_class& N, const ap::PrecisionContext& ctx);

// The octic constraint tying f and g; identically zero on every valid pair.
mpq_class constraint_zero(const mpq_class& f, const mpq_class& g);
ap::Real constraint_zero(const ap::Real& f, const ap::Real& g);

// gamma2 expressed through (f,g) alone: -32 times a polynomial in f,g.
mpq_class gamma2_from_fg(const mpq_class& f, const mpq_class& g);
ap::Real gamma2_from_fg(const ap::Real& f, const ap::Real& g);

// Klein j from the eta quotient j(z) = (q^16 + 16/q^8)^3, q = eta(z/2)/eta(z).
ap::Complex klein_j(const ap::Complex& z, const ap::PrecisionContext& ctx);

// Broker's root for a form [a,b,c] of discriminant -4N (b even), evaluated
// at z = (b/2 + sqrt(-N))/a.  R(1,0,N) recovers weber_r(N).
ap::Complex broker_root(const qf::Form& fm, const mpz_class& N,
                        const ap::PrecisionContext& ctx);

// Asymptotic prefactor of g: alpha(N) = S1 sqrt(1 + S2 beta_{S3}) with
// beta_{+-} = sqrt(1/2 +- sqrt(1/8)); equals sqrt(2) cos(k pi/16).
struct Alpha {
    Signature sig;
    int k;  // odd, 1..15
    ap::Real value;
};

Alpha alpha(const mpz_class& N, const ap::PrecisionContext& ctx);

}  // namespace cmrad::inv

#endif
