#include "cmrad/apnum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cmrad::ap {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

PrecisionContext::PrecisionContext(long bits_, long guard) : bits(bits_), guard_bits(guard) {
    if (bits < 128) throw domain_error("PrecisionContext: bits must be >= 128");
    if (guard_bits <= 0 || guard_bits >= bits)
        throw domain_error("PrecisionContext: need 0 < guard_bits < bits");
}

PrecisionContext PrecisionContext::from_digits(long decimal_digits, long guard) {
    long bits = static_cast<long>(std::ceil(decimal_digits * 3.3219280948873626)) + 16;
    return PrecisionContext(std::max(bits, 128L), guard);
}

double log2_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    if (hi - lo > 64) return hi;
    return hi + std::log2(1.0 + std::exp2(lo - hi));
}

Real::Real(const PrecisionContext& ctx) : err_(kNegInf) {
    mpfr_init2(v_, ctx.work());
    mpfr_set_zero(v_, 1);
}

Real::Real(long v, const PrecisionContext& ctx) : err_(kNegInf) {
    mpfr_init2(v_, ctx.work());
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(const mpz_class& v, const PrecisionContext& ctx) {
    mpfr_init2(v_, ctx.work());
    int t = mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
    err_ = (t == 0) ? kNegInf : mag() - prec() + 1;
}

Real::Real(const mpq_class& v, const PrecisionContext& ctx) {
    mpfr_init2(v_, ctx.work());
    int t = mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
    err_ = (t == 0) ? kNegInf : mag() - prec() + 1;
}

Real::Real(const Real& o) : err_(o.err_) {
    mpfr_init2(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept : err_(o.err_) {
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, MPFR_PREC_MIN);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.prec());
        mpfr_set(v_, o.v_, MPFR_RNDN);
        err_ = o.err_;
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    if (this != &o) {
        mpfr_swap(v_, o.v_);
        err_ = o.err_;
    }
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

double Real::mag() const {
    if (mpfr_zero_p(v_)) return kNegInf;
    return static_cast<double>(mpfr_get_exp(v_));
}

double Real::rel_err_log2() const {
    if (err_ == kNegInf) return kNegInf;
    if (is_zero()) return 0.0;  // error bound in units of an unknown tiny value
    return err_ - mag();
}

void Real::bump_err(double e) { err_ = log2_add(err_, e); }

long Real::certified_digits() const {
    double rel = rel_err_log2();
    if (rel == kNegInf) return prec() * 30103L / 100000L;
    if (rel >= 0) return 0;
    return static_cast<long>(-rel * 0.30102999566398120);
}

std::string Real::to_decimal(long digits) const {
    if (digits < 2) digits = 2;
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string out;
    std::string body(s);
    mpfr_free_str(s);
    bool neg = !body.empty() && body[0] == '-';
    if (neg) body.erase(0, 1);
    if (mpfr_zero_p(v_)) return "0";
    out = (neg ? "-0." : "0.") + body + "e" + std::to_string(static_cast<long>(e));
    return out;
}

mpz_class Real::round_to_int() const {
    mpfr_t t;
    mpfr_init2(t, std::max(prec(), static_cast<long>(mpfr_get_exp(v_)) + 8));
    mpfr_rint(t, v_, MPFR_RNDN);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return z;
}

double Real::distance_to_int() const {
    mpfr_t t;
    mpfr_init2(t, prec());
    mpfr_rint(t, v_, MPFR_RNDN);
    mpfr_sub(t, v_, t, MPFR_RNDN);
    double d = std::fabs(mpfr_get_d(t, MPFR_RNDN));
    mpfr_clear(t);
    return d;
}

namespace {

long join_prec(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

Real make(long prec) {
    PrecisionContext ctx(std::max(prec - 64, 128L), std::min(64L, std::max(prec - 64, 128L) - 1));
    // ctx.work() may differ from prec; fix the storage precision directly.
    Real r(ctx);
    mpfr_set_prec(r.raw(), prec);
    mpfr_set_zero(r.raw(), 1);
    return r;
}

double ulp(const Real& r) {
    if (r.is_zero()) return kNegInf;
    return r.mag() - r.prec() + 1;
}

}  // namespace

Real operator+(const Real& a, const Real& b) {
    Real r = make(join_prec(a, b));
    mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    r.set_err_log2(log2_add(log2_add(a.err_log2(), b.err_log2()), ulp(r)));
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r = make(join_prec(a, b));
    mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    r.set_err_log2(log2_add(log2_add(a.err_log2(), b.err_log2()), ulp(r)));
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r = make(join_prec(a, b));
    mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    double e = log2_add(a.mag() + b.err_log2(), b.mag() + a.err_log2()) + 1;
    if (a.err_log2() == kNegInf && b.err_log2() == kNegInf) e = kNegInf;
    r.set_err_log2(log2_add(e, ulp(r)));
    return r;
}

Real operator/(const Real& a, const Real& b) {
    if (b.is_zero()) throw domain_error("division by zero");
    Real r = make(join_prec(a, b));
    mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    double e = kNegInf;
    if (a.err_log2() != kNegInf) e = log2_add(e, a.err_log2() - b.mag());
    if (b.err_log2() != kNegInf && !r.is_zero())
        e = log2_add(e, r.mag() + b.err_log2() - b.mag());
    if (e != kNegInf) e += 1;
    r.set_err_log2(log2_add(e, ulp(r)));
    return r;
}

Real operator-(const Real& a) {
    Real r(a);
    mpfr_neg(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()); }
bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }

Real abs(const Real& a) {
    Real r(a);
    mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

Real sqrt(const Real& a) {
    if (a.sign() < 0) throw domain_error("sqrt of negative value");
    Real r = make(a.prec());
    mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
    double e;
    if (a.err_log2() == kNegInf)
        e = kNegInf;
    else if (a.is_zero())
        e = a.err_log2() / 2;
    else
        e = a.err_log2() - a.mag() - 1 + r.mag();
    r.set_err_log2(log2_add(e, ulp(r)));
    return r;
}

Real nthroot(const Real& a, unsigned long n) {
    if (n == 0) throw domain_error("0th root");
    if (a.sign() < 0 && n % 2 == 0) throw domain_error("even root of negative value");
    Real r = make(a.prec());
    mpfr_rootn_ui(r.raw(), a.raw(), n, MPFR_RNDN);
    double e;
    if (a.err_log2() == kNegInf)
        e = kNegInf;
    else if (a.is_zero())
        e = a.err_log2() / double(n);
    else
        e = a.err_log2() - a.mag() - std::log2(double(n)) + r.mag();
    r.set_err_log2(log2_add(e, ulp(r)));
    return r;
}

Real exp(const Real& a) {
    Real r = make(a.prec());
    mpfr_exp(r.raw(), a.raw(), MPFR_RNDN);
    double e = a.err_log2() == kNegInf ? kNegInf : a.err_log2() + r.mag() + 1;
    r.set_err_log2(log2_add(e, ulp(r)));
    return r;
}

Real log(const Real& a) {
    if (a.sign() <= 0) throw domain_error("log of nonpositive value");
    Real r = make(a.prec());
    mpfr_log(r.raw(), a.raw(), MPFR_RNDN);
    double e = a.err_log2() == kNegInf ? kNegInf : a.err_log2() - a.mag() + 1;
    r.set_err_log2(log2_add(e, ulp(r)));
    return r;
}

Real cos(const Real& a) {
    Real r = make(a.prec());
    mpfr_cos(r.raw(), a.raw(), MPFR_RNDN);
    r.set_err_log2(log2_add(a.err_log2(), ulp(r)));
    return r;
}

Real sin(const Real& a) {
    Real r = make(a.prec());
    mpfr_sin(r.raw(), a.raw(), MPFR_RNDN);
    r.set_err_log2(log2_add(a.err_log2(), ulp(r)));
    return r;
}

Real pow_ui(const Real& a, unsigned long n) {
    Real r = make(a.prec());
    mpfr_pow_ui(r.raw(), a.raw(), n, MPFR_RNDN);
    double e;
    if (a.err_log2() == kNegInf)
        e = kNegInf;
    else if (a.is_zero() || r.is_zero())
        e = a.err_log2();
    else
        e = a.err_log2() - a.mag() + std::log2(double(n) + 1) + r.mag();
    r.set_err_log2(log2_add(e, ulp(r)));
    return r;
}

Real gamma(const Real& a) {
    if (a.sign() <= 0) throw domain_error("gamma: argument must be positive");
    Real r = make(a.prec());
    mpfr_gamma(r.raw(), a.raw(), MPFR_RNDN);
    double e;
    if (a.err_log2() == kNegInf) {
        e = kNegInf;
    } else {
        // |dGamma| = |Gamma psi| |da|
        mpfr_t psi;
        mpfr_init2(psi, 64);
        mpfr_digamma(psi, a.raw(), MPFR_RNDN);
        double lp = std::log2(std::abs(mpfr_get_d(psi, MPFR_RNDN)) + 2);
        mpfr_clear(psi);
        e = a.err_log2() + r.mag() + lp + 1;
    }
    r.set_err_log2(log2_add(e, ulp(r)));
    return r;
}

Real pi(const PrecisionContext& ctx) {
    Real r(ctx);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    r.set_err_log2(ulp(r));
    return r;
}

Real agm(const Real& a0, const Real& b0, const PrecisionContext& ctx) {
    if (a0.sign() <= 0 || b0.sign() <= 0) throw domain_error("agm requires positive inputs");
    Real a(a0), b(b0);
    double target;
    long iters = 0;
    do {
        Real am = (a + b) * Real(mpq_class(1, 2), ctx);
        Real gm = sqrt(a * b);
        a = am;
        b = gm;
        target = a.mag() - ctx.bits - ctx.guard_bits / 2.0;
        if (++iters > 4096) throw precision_error("agm failed to converge");
    } while ((a - b).mag() > target);
    Real r = (a + b) * Real(mpq_class(1, 2), ctx);
    r.bump_err(target + 2);
    return r;
}

Complex Complex::conj() const { return Complex(re, -im); }

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }

Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }

Complex operator/(const Complex& a, const Complex& b) {
    Real n = b.re * b.re + b.im * b.im;
    if (n.is_zero()) throw domain_error("complex division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
Complex operator-(const Complex& a) { return {-a.re, -a.im}; }

Real abs(const Complex& a) { return sqrt(a.re * a.re + a.im * a.im); }

Complex cexp(const Complex& a) {
    Real m = exp(a.re);
    return {m * cos(a.im), m * sin(a.im)};
}

Complex pow_ui(const Complex& a, unsigned long n) {
    Complex acc = a;
    if (n == 0) throw domain_error("complex pow_ui expects n >= 1");
    // binary powering, high bit first
    int top = 63;
    while (top > 0 && ((n >> top) & 1UL) == 0) --top;
    for (int i = top - 1; i >= 0; --i) {
        acc = acc * acc;
        if ((n >> i) & 1UL) acc = acc * a;
    }
    return acc;
}

Complex unit_phase(const Real& t, const PrecisionContext& ctx) {
    Real c(ctx), s(ctx);
    mpfr_sin_cos(s.raw(), c.raw(), t.raw(), MPFR_RNDN);
    double e = log2_add(t.err_log2(), -double(ctx.work()) + 1);
    c.set_err_log2(e);
    s.set_err_log2(e);
    return {c, s};
}

Complex eta(const Complex& z, const PrecisionContext& ctx) {
    // threshold sqrt(3)/4, slightly relaxed for rounding
    if (z.im.to_double() < 0.4330127018922192 * (1 - 1e-12))
        throw domain_error("eta: Im z below sqrt(3)/4");
    // base = exp(pi i z / 12); term_n = (-1)^n base^{(6n+1)^2}
    Real p = pi(ctx);
    Complex iz(-z.im, z.re);
    Complex u = iz * (p / Real(12, ctx));
    Complex base = cexp(u);
    double base_mag = std::max(base.re.mag(), base.im.mag()) + 1;
    double cutoff = base_mag - ctx.bits - ctx.guard_bits;
    Complex sum = base;  // n = 0 term, exponent 1
    // Incremental powers: exponents (6n+1)^2 and (6n-1)^2 advance by
    // 72n+48 and 72n+24, each step multiplier advancing by base^72.
    Complex b24 = pow_ui(base, 24);
    Complex b48 = b24 * b24;
    Complex b96 = b48 * b48;
    Complex tp = b48 * base;        // base^49, n = 1
    Complex tm = b24 * base;        // base^25, n = 1
    Complex sp = b96 * b24;         // base^120 = step for tp at n = 1
    Complex sm = b96;               // base^96  = step for tm at n = 1
    Complex q72 = b48 * b24;
    long n = 1;
    while (true) {
        Complex term = tp + tm;
        if (n % 2 == 1)
            sum = sum - term;
        else
            sum = sum + term;
        double msize = std::max(std::max(tp.re.mag(), tp.im.mag()),
                                std::max(tm.re.mag(), tm.im.mag()));
        if (msize < cutoff) break;
        tp = tp * sp;
        tm = tm * sm;
        sp = sp * q72;
        sm = sm * q72;
        if (++n > 4 * static_cast<long>(std::sqrt(double(ctx.work()))) + 64)
            throw precision_error("eta: theta series did not truncate");
    }
    sum.re.bump_err(cutoff + 2);
    sum.im.bump_err(cutoff + 2);
    return sum;
}

}  // namespace cmrad::ap
