#include "cmrad/chowla.hpp"

#include "cmrad/invariants.hpp"
#include "cmrad/quadforms.hpp"

namespace cmrad::cs {

using ap::Complex;
using ap::PrecisionContext;
using ap::Real;

namespace {

void require_3_mod_4(const mpz_class& N) {
    if (N <= 0 || N % 4 != 3 || !qf::is_squarefree(N))
        throw domain_error("need squarefree positive N = 3 mod 4");
}

Complex form_point(const qf::Form& f, const Real& sN, const PrecisionContext& ctx) {
    Real a2(mpz_class(2 * f.a), ctx);
    return Complex(Real(f.b, ctx) / a2, sN / a2);
}

}  // namespace

Real gn_direct(const mpz_class& N, const PrecisionContext& ctx) {
    require_3_mod_4(N);
    if (N > 200) throw domain_error("gn_direct: N > 200 refused (use gn_eta)");
    long n = N.get_si();
    Real num(1, ctx), den(1, ctx);
    for (long k = 1; k < n; ++k) {
        int chi = qf::kronecker(-N, k);
        if (chi == 0) continue;
        Real g = gamma(Real(mpq_class(k, n), ctx));
        if (chi > 0)
            num = num * g;
        else
            den = den * g;
    }
    return num / den;
}

Real gn_eta(const mpz_class& N, const PrecisionContext& ctx) {
    require_3_mod_4(N);
    if (N <= 3) throw domain_error("gn_eta: N must exceed 3");
    qf::ClassGroup grp = qf::enumerate(-N);
    Real sN = sqrt(Real(N, ctx));
    Real prod = pow_ui(Real(2, ctx) * pi(ctx) * Real(N, ctx), grp.h);
    for (const qf::Form& f : grp.classes) {
        Real e4 = pow_ui(abs(eta(form_point(f, sN, ctx), ctx)), 4);
        prod = prod * e4 / Real(f.a, ctx);
    }
    return prod;
}

Real lambda(const mpz_class& N, const PrecisionContext& ctx) {
    require_3_mod_4(N);
    qf::ClassGroup grp = qf::enumerate(-N);
    Real sN = sqrt(Real(N, ctx));
    Real prod(1, ctx);
    qf::Form principal = qf::principal(-N);
    Real eta_p(ctx);
    bool have_p = false;
    for (const qf::Form& f : grp.classes) {
        if (f == principal) continue;  // its factor is exactly 1
        if (!have_p) {
            eta_p = abs(eta(form_point(principal, sN, ctx), ctx));
            have_p = true;
        }
        Real quarter = nthroot(Real(f.a, ctx), 4);
        prod = prod * quarter * eta_p / abs(eta(form_point(f, sN, ctx), ctx));
    }
    return prod;
}

Real singular_k(const mpz_class& N, const PrecisionContext& ctx) {
    Real r = inv::weber_r(N, ctx);
    Real one(1, ctx);
    Real r24 = pow_ui(r, 24);
    Real k2 = (Real(32, ctx) / r24) / (one + sqrt(one - Real(64, ctx) / r24));
    Real k = sqrt(k2);
    // defining relation: AGM(1, sqrt(1-k^2)) = sqrt(N) AGM(1, k)
    Real kp = sqrt(one - k2);
    Real resid = agm(one, kp, ctx) - sqrt(Real(N, ctx)) * agm(one, k, ctx);
    if (!resid.is_zero() && resid.mag() > resid.err_log2() + 6)
        throw precision_error("singular_k: AGM defining relation failed");
    return k;
}

Real elliptic_K(const mpz_class& N, const PrecisionContext& ctx) {
    Real k = singular_k(N, ctx);
    Real one(1, ctx);
    return pi(ctx) / (Real(2, ctx) * agm(one, sqrt(one - k * k), ctx));
}

Real eq_w_check(const mpz_class& N, const PrecisionContext& ctx) {
    qf::ClassGroup grp = qf::enumerate(-N);
    Real K = elliptic_K(N, ctx);
    Real r = inv::weber_r(N, ctx);
    Real lam = lambda(N, ctx);
    Real G = gn_eta(N, ctx);
    Real inner = nthroot(pow_ui(lam, 4) * G, grp.h);
    Real half_r = r / Real(2, ctx);
    Real rhs = half_r * half_r *
               sqrt(Real(2, ctx) * pi(ctx) / Real(N, ctx) * inner);
    return abs(K - rhs);
}

ChowlaResult chowla(const mpz_class& N, const PrecisionContext& ctx) {
    qf::ClassGroup grp = qf::enumerate(-N);
    return ChowlaResult{N, grp.h, gn_eta(N, ctx), lambda(N, ctx),
                        singular_k(N, ctx), elliptic_K(N, ctx)};
}

}  // namespace cmrad::cs
