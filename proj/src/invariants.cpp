#include "cmrad/invariants.hpp"

#include <algorithm>

namespace cmrad::inv {

using ap::Complex;
using ap::PrecisionContext;
using ap::Real;

namespace {

void require_3_mod_8(const mpz_class& N) {
    if (N <= 0 || N % 8 != 3) throw domain_error("N must be positive and 3 mod 8");
}

// Extract the certified real part of a value expected to be real.
Real real_part(const Complex& v, const PrecisionContext& ctx) {
    double bound = -double(ctx.bits) / 2;
    if (!v.im.is_zero() && v.im.mag() >= std::max(bound, v.im.err_log2() + 4))
        throw precision_error("imaginary residue exceeds the reality tolerance");
    return v.re;
}

}  // namespace

Signature signature(const mpz_class& N) {
    require_3_mod_8(N);
    switch (mpz_class(N % 64).get_ui()) {
        case 35: return {-1, -1, -1};
        case 11: return {-1, -1, +1};
        case 51: return {-1, +1, -1};
        case 59: return {-1, +1, +1};
        case 3:  return {+1, -1, -1};
        case 43: return {+1, -1, +1};
        case 19: return {+1, +1, -1};
        case 27: return {+1, +1, +1};
    }
    throw internal_error("signature: unreachable residue");
}

Real weber_r(const mpz_class& N, const PrecisionContext& ctx) {
    require_3_mod_8(N);
    Real sN = sqrt(Real(N, ctx));
    Real half(mpq_class(1, 2), ctx);
    Complex z1(half, sN * half);
    Complex z2(Real(0, ctx), sN);
    Complex q = eta(z1, ctx) / eta(z2, ctx);
    Complex phase = unit_phase(-pi(ctx) / Real(24, ctx), ctx);
    Real r = real_part(phase * q, ctx);
    // r > 2^(1/4): r^4 > 2 with certified margin
    Real margin = pow_ui(r, 4) - Real(2, ctx);
    if (!(margin.sign() > 0 && margin.mag() > margin.err_log2()))
        throw precision_error("weber r did not certify r > 2^(1/4)");
    return r;
}

InvariantBundle fg_pair(const mpz_class& N, const PrecisionContext& ctx) {
    Signature sig = signature(N);
    Real r = weber_r(N, ctx);
    Real one(1, ctx);
    Real S1(sig.S1, ctx), S2(sig.S2, ctx), S3(sig.S3, ctx);
    Real inner = Real(mpq_class(1, 8), ctx) - one / pow_ui(r, 12);
    Real mid = Real(mpq_class(1, 2), ctx) + S3 * sqrt(inner);
    Real s = S1 * sqrt(one + S2 * sqrt(mid));
    Real sr = sqrt(r);
    Real f = r / Real(2, ctx) - s / sr;
    Real g = -(one / r) + s * sr;

    // cubic relation r^3 = 2 (f r^2 + g r + 1)
    Real cubic = pow_ui(r, 3) - Real(2, ctx) * (f * r * r + g * r + one);
    if (!cubic.is_zero() && cubic.mag() > cubic.err_log2() + 4)
        throw precision_error("fg_pair: cubic relation residual exceeds error bound");
    // octic constraint
    Real z = constraint_zero(f, g);
    if (!z.is_zero() && z.mag() > z.err_log2() + 4)
        throw precision_error("fg_pair: octic constraint residual exceeds error bound");

    Real gamma2 = Real(256, ctx) / pow_ui(r, 16) - pow_ui(r, 8);
    Real j = pow_ui(gamma2, 3);
    bool inside = !(N == 3 || N == 27);
    return InvariantBundle{N, std::move(r), std::move(s), std::move(f), std::move(g),
                           std::move(gamma2), std::move(j), sig, inside};
}

mpq_class constraint_zero(const mpq_class& f, const mpq_class& g) {
    mpq_class f2 = f * f, g2 = g * g, g3 = g2 * g;
    return 2 * f2 * f2 - 16 * f2 * f * g2 + 20 * f2 * g2 * g2 - 12 * f2 * g -
           8 * f * g3 * g3 + 16 * f * g3 - 2 * f + g2 * g3 * g3 - 4 * g2 * g3 + 3 * g2;
}

ap::Real constraint_zero(const Real& f, const Real& g) {
    PrecisionContext ctx(std::max(2L, f.prec() - 64));
    auto C = [&](long v) { return Real(v, ctx); };
    Real f2 = f * f, g2 = g * g, g3 = g2 * g;
    return C(2) * f2 * f2 - C(16) * f2 * f * g2 + C(20) * f2 * g2 * g2 -
           C(12) * f2 * g - C(8) * f * g3 * g3 + C(16) * f * g3 - C(2) * f +
           g2 * g3 * g3 - C(4) * g2 * g3 + C(3) * g2;
}

mpq_class gamma2_from_fg(const mpq_class& f, const mpq_class& g) {
    mpq_class f2 = f * f, f4 = f2 * f2, g2 = g * g;
    mpq_class T = 8 * f4 * f4 + 32 * f4 * f2 * g + 16 * f4 * f + 40 * f4 * g2 +
                  32 * f2 * f * g + 16 * f2 * g2 * g + 6 * f2 + 12 * f * g2 +
                  g2 * g2 + 2 * g;
    return -32 * T;
}

ap::Real gamma2_from_fg(const Real& f, const Real& g) {
    PrecisionContext ctx(std::max(2L, f.prec() - 64));
    auto C = [&](long v) { return Real(v, ctx); };
    Real f2 = f * f, f4 = f2 * f2, g2 = g * g;
    Real T = C(8) * f4 * f4 + C(32) * f4 * f2 * g + C(16) * f4 * f +
             C(40) * f4 * g2 + C(32) * f2 * f * g + C(16) * f2 * g2 * g +
             C(6) * f2 + C(12) * f * g2 + g2 * g2 + C(2) * g;
    return C(-32) * T;
}

Complex klein_j(const Complex& z, const PrecisionContext& ctx) {
    Real half(mpq_class(1, 2), ctx);
    Complex zh(z.re * half, z.im * half);
    Complex q = eta(zh, ctx) / eta(z, ctx);
    Complex q8 = pow_ui(q, 8);
    Complex q16 = q8 * q8;
    Complex one(Real(1, ctx), Real(0, ctx));
    Complex inner = q16 + (one / q8) * Real(16, ctx);
    return pow_ui(inner, 3);
}

Complex broker_root(const qf::Form& fm, const mpz_class& N, const PrecisionContext& ctx) {
    qf::validate(fm);
    if (fm.disc() != mpz_class(-4) * N) throw domain_error("broker_root: discriminant is not -4N");
    if (fm.b % 2 != 0) throw domain_error("broker_root: b must be even");
    const mpz_class &a = fm.a, &b = fm.b, &c = fm.c;
    bool a_even = mpz_even_p(a.get_mpz_t());
    bool c_even = mpz_even_p(c.get_mpz_t());
    if (a_even && c_even) throw domain_error("broker_root: a and c cannot both be even");

    Real ra(a, ctx);
    Complex z(Real(b, ctx) / (Real(2, ctx) * ra), sqrt(Real(N, ctx)) / ra);

    // The phase exp(-theta pi i/48) has period 96 in theta; combine the sign
    // factor as a shift by 48 and reduce exactly before touching floats.
    mpz_class theta;
    Complex quotient(ctx);
    Real scale(1, ctx);
    Real half(mpq_class(1, 2), ctx);
    if (c_even) {
        theta = b * (a * c * c - a - 2 * c);
        mpz_class e = (a * a - 1) / 8;  // sign -(-1)^e: add 48 for the minus, 48 more if e odd
        theta += mpz_odd_p(e.get_mpz_t()) ? 96 : 48;
        quotient = eta(Complex(z.re * half, z.im * half), ctx) / eta(z, ctx);
    } else if (a_even) {
        theta = b * (c - a - 5 * a * c * c);
        mpz_class e = (c * c - 1) / 8;
        theta += mpz_odd_p(e.get_mpz_t()) ? 96 : 48;
        scale = sqrt(Real(2, ctx));
        Complex z2(z.re + z.re, z.im + z.im);
        quotient = eta(z2, ctx) / eta(z, ctx);
    } else {
        theta = b * (c - a - a * a * c) + 2;
        Complex zp((Real(1, ctx) + z.re) * half, z.im * half);
        quotient = eta(zp, ctx) / eta(z, ctx);
    }
    theta %= 96;
    if (theta < 0) theta += 96;
    Real angle = -pi(ctx) * Real(theta, ctx) / Real(48, ctx);
    return unit_phase(angle, ctx) * quotient * scale;
}

Alpha alpha(const mpz_class& N, const PrecisionContext& ctx) {
    Signature sig = signature(N);
    // k index of sqrt(2) cos(k pi/16) per residue row
    int k = 0;
    switch (mpz_class(N % 64).get_ui()) {
        case 35: k = 11; break;
        case 11: k = 9; break;
        case 51: k = 13; break;
        case 59: k = 15; break;
        case 3:  k = 5; break;
        case 43: k = 7; break;
        case 19: k = 3; break;
        case 27: k = 1; break;
    }
    Real beta = sqrt(Real(mpq_class(1, 2), ctx) +
                     Real(sig.S3, ctx) * sqrt(Real(mpq_class(1, 8), ctx)));
    Real v = Real(sig.S1, ctx) * sqrt(Real(1, ctx) + Real(sig.S2, ctx) * beta);
    return Alpha{sig, k, std::move(v)};
}

}  // namespace cmrad::inv
