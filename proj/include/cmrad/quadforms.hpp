#ifndef CMRAD_QUADFORMS_HPP
#define CMRAD_QUADFORMS_HPP

#include <gmpxx.h>

#include <vector>

#include "cmrad/common.hpp"

namespace cmrad::qf {

// Primitive positive-definite binary quadratic form a x^2 + b x y + c y^2.
struct Form {
    mpz_class a, b, c;

    mpz_class disc() const { return b * b - 4 * a * c; }
    bool operator==(const Form& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const Form& o) const;
};

bool is_reduced(const Form& f);
void validate(const Form& f);  // negative disc, a > 0, primitive

Form reduce(Form f);
Form compose(const Form& f1, const Form& f2);
Form inverse(const Form& f);
Form principal(const mpz_class& disc);
Form power(const Form& f, unsigned long e);

struct ClassGroup {
    mpz_class disc;
    std::vector<Form> classes;  // sorted by (a, b, c)
    unsigned long h = 0;
    // polycyclic generating sequence: relative orders multiply to h
    std::vector<std::pair<Form, unsigned long>> generators;

    bool is_cyclic() const { return generators.size() <= 1; }
};

ClassGroup enumerate(const mpz_class& disc);

unsigned long order_of(const Form& f);

int kronecker(const mpz_class& d, const mpz_class& k);

// h(-N) from the Kronecker-symbol sum over k < N/2, for squarefree
// N = 3 mod 4 (divide by 3 for N = 3 mod 8, by 1 for N = 7 mod 8).
unsigned long class_number_by_kronecker(const mpz_class& n);

bool is_squarefree(const mpz_class& n);

}  // namespace cmrad::qf

#endif
