#include "cmrad/quadforms.hpp"

#include <algorithm>
#include <set>

namespace cmrad::qf {

bool Form::operator<(const Form& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

bool is_reduced(const Form& f) {
    mpz_class ab = abs(f.b);
    if (!(ab <= f.a && f.a <= f.c)) return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

void validate(const Form& f) {
    if (f.disc() >= 0) throw domain_error("form discriminant must be negative");
    if (f.a <= 0) throw domain_error("form must have a > 0");
    mpz_class g = gcd(gcd(f.a, f.b), f.c);
    if (g != 1) throw domain_error("form must be primitive");
}

Form reduce(Form f) {
    validate(f);
    while (!is_reduced(f)) {
        if (f.c < f.a || (f.c == f.a && f.b < 0)) {
            f = Form{f.c, -f.b, f.a};
            continue;
        }
        // normalize b into (-a, a]
        mpz_class k = (f.a - f.b) / (2 * f.a);
        mpz_class b2 = f.b + 2 * k * f.a;
        if (b2 > f.a) {  // floor division fix for negative operands
            k -= 1;
            b2 -= 2 * f.a;
        } else if (b2 <= -f.a) {
            k += 1;
            b2 += 2 * f.a;
        }
        mpz_class c2 = f.c + k * (f.b + k * f.a);
        f = Form{f.a, b2, c2};
    }
    return f;
}

namespace {

// g = u*x + v*y
void ext_gcd(const mpz_class& x, const mpz_class& y, mpz_class& g, mpz_class& u, mpz_class& v) {
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
}

}  // namespace

Form compose(const Form& f1, const Form& f2) {
    mpz_class D = f1.disc();
    if (D != f2.disc()) throw domain_error("compose: discriminants differ");
    // Dirichlet composition
    mpz_class s = (f1.b + f2.b) / 2;
    mpz_class d1, u, v;
    ext_gcd(f1.a, f2.a, d1, u, v);
    mpz_class d, x, w;
    ext_gcd(d1, s, d, x, w);
    u *= x;
    v *= x;
    mpz_class A = (f1.a / d) * (f2.a / d);
    mpz_class B = u * f1.a * f2.b + v * f2.a * f1.b + w * (f1.b * f2.b + D) / 2;
    B /= d;
    mpz_class twoA = 2 * A;
    B %= twoA;
    if (B < 0) B += twoA;
    mpz_class C = (B * B - D) / (4 * A);
    return reduce(Form{A, B, C});
}

Form inverse(const Form& f) { return reduce(Form{f.a, -f.b, f.c}); }

Form principal(const mpz_class& disc) {
    if (disc >= 0) throw domain_error("principal: discriminant must be negative");
    mpz_class r = ((disc % 4) + 4) % 4;
    if (r == 1) return Form{1, 1, (1 - disc) / 4};
    if (r == 0) return Form{1, 0, -disc / 4};
    throw domain_error("principal: discriminant must be 0 or 1 mod 4");
}

Form power(const Form& f, unsigned long e) {
    Form acc = principal(f.disc());
    Form base = reduce(f);
    while (e > 0) {
        if (e & 1UL) acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

unsigned long order_of(const Form& f) {
    Form id = principal(f.disc());
    Form x = reduce(f);
    unsigned long o = 1;
    while (!(x == id)) {
        x = compose(x, f);
        ++o;
        if (o > 10000000UL) throw internal_error("order_of: runaway order");
    }
    return o;
}

ClassGroup enumerate(const mpz_class& disc) {
    if (disc >= 0) throw domain_error("enumerate: discriminant must be negative");
    mpz_class r = ((disc % 4) + 4) % 4;
    if (r != 0 && r != 1) throw domain_error("enumerate: discriminant must be 0 or 1 mod 4");

    ClassGroup g;
    g.disc = disc;
    mpz_class bound;  // a <= sqrt(|D|/3)
    mpz_class ad3 = (-disc) / 3;
    mpz_sqrt(bound.get_mpz_t(), ad3.get_mpz_t());
    for (mpz_class a = 1; a <= bound; ++a) {
        mpz_class fourA = 4 * a;
        for (mpz_class b = -a + 1; b <= a; ++b) {
            mpz_class num = b * b - disc;
            if (num % fourA != 0) continue;
            mpz_class c = num / fourA;
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (gcd(gcd(a, b), c) != 1) continue;
            g.classes.push_back(Form{a, b, c});
        }
    }
    std::sort(g.classes.begin(), g.classes.end());
    g.h = g.classes.size();

    // polycyclic generators; the target cases are cyclic, so look for a
    // single generator first
    std::vector<unsigned long> orders(g.h);
    unsigned long best = 0;
    size_t best_i = 0;
    for (size_t i = 0; i < g.h; ++i) {
        orders[i] = order_of(g.classes[i]);
        if (orders[i] > best) {
            best = orders[i];
            best_i = i;
        }
        if (orders[i] == g.h) break;
    }
    if (best == g.h) {
        g.generators.push_back({g.classes[best_i], g.h});
        return g;
    }
    // generic accumulation: greedy relative orders
    std::set<Form> span;
    span.insert(principal(disc));
    while (span.size() < g.h) {
        // element of largest order outside the span
        size_t pick = g.h;
        unsigned long pick_ord = 0;
        for (size_t i = 0; i < g.h; ++i) {
            if (span.count(g.classes[i])) continue;
            if (orders[i] == 0) orders[i] = order_of(g.classes[i]);
            if (orders[i] > pick_ord) {
                pick_ord = orders[i];
                pick = i;
            }
        }
        if (pick == g.h) throw internal_error("enumerate: span stalled");
        const Form& x = g.classes[pick];
        // relative order of x modulo current span
        unsigned long rel = 1;
        Form p = reduce(x);
        while (!span.count(p)) {
            p = compose(p, x);
            ++rel;
        }
        g.generators.push_back({x, rel});
        // close the span
        std::set<Form> bigger;
        Form xe = principal(disc);
        for (unsigned long e = 0; e < rel; ++e) {
            for (const Form& s : span) bigger.insert(compose(s, xe));
            xe = compose(xe, x);
        }
        span.swap(bigger);
    }
    return g;
}

int kronecker(const mpz_class& d, const mpz_class& k) {
    return mpz_kronecker(d.get_mpz_t(), k.get_mpz_t());
}

bool is_squarefree(const mpz_class& n) {
    if (n <= 0) return false;
    mpz_class m = n;
    for (mpz_class p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return false;
        }
    }
    return true;
}

unsigned long class_number_by_kronecker(const mpz_class& n) {
    if (((n % 4) + 4) % 4 != 3) throw domain_error("class_number_by_kronecker: N must be 3 mod 4");
    if (!is_squarefree(n)) throw domain_error("class_number_by_kronecker: N must be squarefree");
    if (n == 3) return 1;  // disc -3 has six units; the sum formula assumes w = 2
    mpz_class sum = 0;
    mpz_class half = (n - 1) / 2;
    mpz_class mN = -n;
    for (mpz_class k = 1; k <= half; ++k) sum += mpz_kronecker(mN.get_mpz_t(), k.get_mpz_t());
    mpz_class div = (n % 8 == 3) ? 3 : 1;
    if (sum % div != 0 || sum <= 0)
        throw internal_error("class_number_by_kronecker: sum not divisible as expected");
    mpz_class h = sum / div;
    return h.get_ui();
}

}  // namespace cmrad::qf
