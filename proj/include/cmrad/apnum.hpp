#ifndef CMRAD_APNUM_HPP
#define CMRAD_APNUM_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

#include "cmrad/common.hpp"

namespace cmrad::ap {

// Working precision for all transcendental evaluation.  Values are stored
// with bits + guard_bits mantissa bits; results are certified to roughly
// bits - guard_bits relative accuracy via the per-value error bounds below.
struct PrecisionContext {
    long bits;
    long guard_bits;

    explicit PrecisionContext(long bits_, long guard = 64);
    static PrecisionContext from_digits(long decimal_digits, long guard = 64);

    long work() const { return bits + guard_bits; }
};

// Arbitrary-precision real with a scalar error bound.  err_log2() bounds the
// absolute error as 2^err_log2 (negative infinity for exact values); the
// bound is propagated conservatively through every operation.
class Real {
  public:
    explicit Real(const PrecisionContext& ctx);
    Real(long v, const PrecisionContext& ctx);
    Real(const mpz_class& v, const PrecisionContext& ctx);
    Real(const mpq_class& v, const PrecisionContext& ctx);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    long prec() const { return mpfr_get_prec(v_); }

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }

    // log2 upper bound on |value| (-inf for zero).
    double mag() const;
    double err_log2() const { return err_; }
    double rel_err_log2() const;
    void set_err_log2(double e) { err_ = e; }
    void bump_err(double e);  // err <- log2(2^err + 2^e)

    long certified_digits() const;
    std::string to_decimal(long digits) const;
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Rounding helpers for certified integer recovery.
    mpz_class round_to_int() const;
    double distance_to_int() const;  // |x - nearest integer|, as double

  private:
    mpfr_t v_;
    double err_;
};

double log2_add(double a, double b);

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
int cmp(const Real& a, const Real& b);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);

Real abs(const Real& a);
Real sqrt(const Real& a);
Real nthroot(const Real& a, unsigned long n);  // real root; odd n allows a < 0
Real exp(const Real& a);
Real log(const Real& a);
Real cos(const Real& a);
Real sin(const Real& a);
Real pow_ui(const Real& a, unsigned long n);
Real gamma(const Real& a);  // Euler Gamma, a > 0
Real pi(const PrecisionContext& ctx);
Real agm(const Real& a, const Real& b, const PrecisionContext& ctx);

struct Complex {
    Real re, im;

    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(const PrecisionContext& ctx) : re(ctx), im(ctx) {}

    Complex conj() const;
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator-(const Complex& a);
Real abs(const Complex& a);
Complex cexp(const Complex& a);
Complex pow_ui(const Complex& a, unsigned long n);
// cos(t) + i sin(t)
Complex unit_phase(const Real& t, const PrecisionContext& ctx);

// Dedekind eta by the theta series sum_n (-1)^n exp((6n+1)^2 pi i z / 12).
// Requires Im z >= sqrt(3)/4; callers supply points from reduced forms (or
// their half-arguments), so no modular transformation is needed.
Complex eta(const Complex& z, const PrecisionContext& ctx);

}  // namespace cmrad::ap

#endif
