#include <gmpxx.h>

#include <cmath>
#include <random>

#include "cmrad/apnum.hpp"
#include "doctest.h"

using namespace cmrad;
using namespace cmrad::ap;

namespace {

// Independent oracle: eta by its infinite product
//   eta(z) = exp(pi i z/12) prod_k (1 - exp(2 pi i k z)).
Complex eta_product(const Complex& z, const PrecisionContext& ctx) {
    Real p = pi(ctx);
    Complex iz(-z.im, z.re);
    Complex w = cexp(iz * (p / Real(12, ctx)));   // exp(pi i z / 12)
    Complex q = pow_ui(w, 24);                    // exp(2 pi i z)
    Complex one(Real(1, ctx), Real(0, ctx));
    Complex prod = one;
    Complex qk = q;
    for (int k = 1;; ++k) {
        prod = prod * (one - qk);
        if (std::max(qk.re.mag(), qk.im.mag()) < -double(ctx.work()) - 8) break;
        qk = qk * q;
        REQUIRE(k < 100000);
    }
    return w * prod;
}

double dbl(const Real& r) { return r.to_double(); }

}  // namespace

TEST_CASE("agm basics") {
    PrecisionContext ctx(256);
    Real one(1, ctx);
    CHECK(dbl(agm(one, one, ctx)) == doctest::Approx(1.0));

    // symmetry k <-> sqrt(1-k^2) at k = 1/sqrt(2)
    Real k = Real(1, ctx) / sqrt(Real(2, ctx));
    Real k2 = sqrt(Real(1, ctx) - k * k);
    Real d = agm(one, k, ctx) - agm(one, k2, ctx);
    CHECK(d.mag() < -200);

    // agm(a,b) == agm(b,a), homogeneity
    Real a(3, ctx), b(7, ctx);
    CHECK((agm(a, b, ctx) - agm(b, a, ctx)).mag() < -200);
    Real lam(5, ctx);
    CHECK((agm(lam * a, lam * b, ctx) - lam * agm(a, b, ctx)).mag() < -180);

    CHECK_THROWS_AS(agm(Real(-1, ctx), one, ctx), domain_error);
    CHECK_THROWS_AS(agm(Real(0, ctx), one, ctx), domain_error);
}

TEST_CASE("agm self-convergence under doubled precision") {
    PrecisionContext lo(256), hi(512);
    Real v1 = agm(Real(1, lo), Real(2, lo), lo);
    Real v2 = agm(Real(1, hi), Real(2, hi), hi);
    Real d = Real(v1) - v2;
    CHECK(d.mag() < -240);
    // and the value stays within its own stated error bound
    CHECK(d.mag() <= v1.err_log2() + 1);
}

TEST_CASE("elementary functions") {
    PrecisionContext ctx(256);
    CHECK(dbl(nthroot(Real(-8, ctx), 3)) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(nthroot(Real(-4, ctx), 2), domain_error);
    CHECK_THROWS_AS(log(Real(0, ctx)), domain_error);

    // 4 cos(pi/5) = 1 + sqrt(5)
    Real lhs = Real(4, ctx) * cos(pi(ctx) / Real(5, ctx));
    Real rhs = Real(1, ctx) + sqrt(Real(5, ctx));
    CHECK((lhs - rhs).mag() < -190);
}

TEST_CASE("eta leading term for large imaginary part") {
    PrecisionContext ctx(256);
    Real t(40, ctx);
    Complex z(Real(0, ctx), t);
    Complex e = eta(z, ctx);
    Real lead = exp(-pi(ctx) * t / Real(12, ctx));
    Real ratio = e.re / lead;
    // |ratio - 1| < 3 exp(-2 pi t)
    double bound = std::log2(3.0) - 2 * M_PI * 40 / std::log(2.0);
    CHECK((ratio - Real(1, ctx)).mag() < bound + 2);
    CHECK(e.im.mag() < -250);
}

TEST_CASE("eta theta series agrees with product form") {
    PrecisionContext ctx(384);
    // z = (1 + i sqrt(163)) / 2
    Real s163 = sqrt(Real(163, ctx));
    Complex z(Real(mpq_class(1, 2), ctx), s163 / Real(2, ctx));
    Complex a = eta(z, ctx);
    Complex b = eta_product(z, ctx);
    CHECK((a.re - b.re).mag() < -360);
    CHECK((a.im - b.im).mag() < -360);

    // 20 random points with Im >= sqrt(3)/2
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> num(-50, 50);
    std::uniform_int_distribution<int> den(87, 400);
    for (int i = 0; i < 20; ++i) {
        Real x(mpq_class(num(rng), 100), ctx);
        Real y(mpq_class(den(rng), 100), ctx);
        Complex w(x, y);
        Complex u = eta(w, ctx);
        Complex v = eta_product(w, ctx);
        double tol = std::max(u.re.err_log2(), u.im.err_log2()) + 8;
        CHECK((u.re - v.re).mag() < std::max(tol, -360.0));
        CHECK((u.im - v.im).mag() < std::max(tol, -360.0));
    }

    CHECK_THROWS_AS(eta(Complex(Real(0, ctx), Real(mpq_class(1, 10), ctx)), ctx), domain_error);
}

TEST_CASE("weber r at 163 reproduces the j-invariant integer") {
    PrecisionContext ctx(384);
    Real s163 = sqrt(Real(163, ctx));
    Complex z1(Real(mpq_class(1, 2), ctx), s163 / Real(2, ctx));
    Complex z2(Real(0, ctx), s163);
    Complex q = eta(z1, ctx) / eta(z2, ctx);
    Complex phase = unit_phase(-pi(ctx) / Real(24, ctx), ctx);
    Complex rc = phase * q;
    CHECK(rc.im.mag() < -300);
    Real r = rc.re;
    Real g2 = Real(256, ctx) / pow_ui(r, 16) - pow_ui(r, 8);
    Real j = pow_ui(g2, 3);
    Real target(mpz_class("-262537412640768000"), ctx);
    CHECK((j - target).mag() < -300 + 70);  // j ~ 2^58, relative 2^-312
}

TEST_CASE("doubling precision never moves a value beyond its error bound") {
    PrecisionContext lo(256), hi(512);
    for (int N : {11, 43, 163}) {
        Real slo = sqrt(Real(N, lo));
        Complex zlo(Real(mpq_class(1, 2), lo), slo / Real(2, lo));
        Complex elo = eta(zlo, lo);
        Real shi = sqrt(Real(N, hi));
        Complex zhi(Real(mpq_class(1, 2), hi), shi / Real(2, hi));
        Complex ehi = eta(zhi, hi);
        CHECK((elo.re - ehi.re).mag() <= elo.re.err_log2() + 1);
        CHECK((elo.im - ehi.im).mag() <= std::max(elo.im.err_log2(), elo.re.err_log2()) + 1);
    }
}

TEST_CASE("decimal serialization carries certified digits") {
    PrecisionContext ctx(256);
    Real v = sqrt(Real(2, ctx));
    CHECK(v.certified_digits() > 50);
    std::string s = v.to_decimal(20);
    CHECK(s.substr(0, 12) == "0.1414213562");
}
