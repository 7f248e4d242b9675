#include <numeric>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cmrad/quadforms.hpp"
#include "doctest.h"

using namespace cmrad;
using namespace cmrad::qf;

namespace {

// Brute-force equivalence test: f ~ g iff g is reached from f by the
// reduction orbit; for reduced forms equality is equivalence, so build the
// full multiplication table of disc -23 via definitions only.
std::vector<Form> brute_reduced_forms(long D) {
    std::vector<Form> out;
    for (long a = 1; a * a <= (-D) / 3; ++a)
        for (long b = -a; b <= a; ++b) {
            long num = b * b - D;
            if (num % (4 * a)) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if ((std::abs(b) == a || a == c) && b < 0) continue;
            long g = std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
            if (g != 1) continue;
            out.push_back(Form{a, b, c});
        }
    return out;
}

}  // namespace

TEST_CASE("reduce") {
    // principal form of disc -N stays put
    for (long N : {11, 163, 2317723}) {
        Form p{1, 1, (1 + N) / 4};
        CHECK(reduce(p) == p);
    }
    Form f{604, 422, 3911};
    CHECK(f.disc() == mpz_class(-4) * 2317723);
    CHECK(reduce(f) == f);
    Form f2{151, -91, 3851};
    CHECK(f2.disc() == -2317723);
    CHECK(reduce(f2) == f2);

    // an unreduced representative comes back reduced with the same disc
    Form u{3851, 91, 151};
    Form r = reduce(u);
    CHECK(is_reduced(r));
    CHECK(r.disc() == u.disc());

    CHECK_THROWS_AS(reduce(Form{1, 5, 1}), domain_error);   // positive disc
    CHECK_THROWS_AS(reduce(Form{2, 2, 4}), domain_error);   // imprimitive
}

TEST_CASE("compose against the brute-force disc -23 table") {
    auto forms = brute_reduced_forms(-23);
    REQUIRE(forms.size() == 3);
    Form p = principal(mpz_class(-23));
    Form f{2, 1, 3};
    CHECK(compose(p, f) == f);
    CHECK(compose(f, f) == Form{2, -1, 3});
    CHECK(compose(compose(f, f), f) == p);
    CHECK(compose(f, inverse(f)) == p);

    // full closure for every pair
    for (const Form& x : forms)
        for (const Form& y : forms) {
            Form z = compose(x, y);
            CHECK(is_reduced(z));
            CHECK(std::count(forms.begin(), forms.end(), z) == 1);
        }
    CHECK_THROWS_AS(compose(p, principal(mpz_class(-31))), domain_error);
}

TEST_CASE("order of [151,-91,3851] in disc -2317723 is 105") {
    CHECK(order_of(Form{151, -91, 3851}) == 105);
}

TEST_CASE("enumerate small class groups") {
    CHECK(enumerate(mpz_class(-163)).h == 1);
    CHECK(enumerate(mpz_class(-1571)).h == 17);
    ClassGroup g23 = enumerate(mpz_class(-23));
    CHECK(g23.h == 3);
    CHECK(g23.is_cyclic());
    CHECK_THROWS_AS(enumerate(mpz_class(-6)), domain_error);  // -6 = 2 mod 4
}

TEST_CASE("disc -4*2317723 group is cyclic of order 315") {
    ClassGroup g = enumerate(mpz_class(-4) * 2317723);
    CHECK(g.h == 315);
    REQUIRE(g.generators.size() == 1);
    CHECK(g.generators[0].second == 315);
    // [604,422,3911] generates: its order is 315
    CHECK(order_of(Form{604, 422, 3911}) == 315);
}

TEST_CASE("group axioms on sampled discriminants") {
    for (long N : {23, 47, 71, 479, 1571}) {
        ClassGroup g = enumerate(mpz_class(-N));
        Form id = principal(mpz_class(-N));
        std::set<Form> all(g.classes.begin(), g.classes.end());
        REQUIRE(all.size() == g.h);
        unsigned long prod = 1;
        for (auto& [gen, ord] : g.generators) prod *= ord;
        CHECK(prod == g.h);
        for (size_t i = 0; i < g.classes.size(); ++i) {
            CHECK(compose(g.classes[i], id) == g.classes[i]);
            CHECK(compose(g.classes[i], inverse(g.classes[i])) == id);
            for (size_t j = i; j < g.classes.size(); ++j)
                CHECK(all.count(compose(g.classes[i], g.classes[j])) == 1);
        }
        // associativity on a few triples
        for (size_t i = 0; i + 2 < g.classes.size(); i += 3) {
            Form lhs = compose(compose(g.classes[i], g.classes[i + 1]), g.classes[i + 2]);
            Form rhs = compose(g.classes[i], compose(g.classes[i + 1], g.classes[i + 2]));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("kronecker symbol") {
    CHECK(kronecker(-163, 1) == 1);
    int expect[5] = {1, -1, 1, 1, 1};
    // brute-force quadratic residues mod 11
    std::set<long> qr;
    for (long x = 1; x < 11; ++x) qr.insert(x * x % 11);
    for (long k = 1; k <= 5; ++k) {
        CHECK(kronecker(-11, k) == expect[k - 1]);
        CHECK(kronecker(-11, k) == (qr.count(k) ? 1 : -1));
    }
    // complete multiplicativity in k on a sample
    for (long k1 = 1; k1 < 30; ++k1)
        for (long k2 = 1; k2 < 30; ++k2)
            CHECK(kronecker(-163, k1 * k2) == kronecker(-163, k1) * kronecker(-163, k2));
}

TEST_CASE("class number via kronecker sum") {
    CHECK(class_number_by_kronecker(163) == 1);
    // kronecker sum itself is 3 for N = 163
    mpz_class sum = 0;
    for (long k = 1; k <= (163 - 1) / 2; ++k) sum += kronecker(-163, k);
    CHECK(sum == 3);
    CHECK(class_number_by_kronecker(7) == 1);
    CHECK(class_number_by_kronecker(23) == 3);
    CHECK_THROWS_AS(class_number_by_kronecker(13), domain_error);
}

TEST_CASE("kronecker class number matches enumeration up to 3000") {
    for (long N = 3; N < 3000; N += 4) {
        if (!is_squarefree(N)) continue;
        CHECK(class_number_by_kronecker(N) == enumerate(mpz_class(-N)).h);
    }
}

TEST_CASE("h(-4N) = 3 h(-N) for N = 3 mod 8 coprime to 3") {
    for (long N = 11; N < 1000; N += 8) {
        if (N % 3 == 0 || !is_squarefree(N)) continue;
        CHECK(enumerate(mpz_class(-4) * N).h == 3 * enumerate(mpz_class(-N)).h);
    }
}
