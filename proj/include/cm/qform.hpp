#ifndef CM_QFORM_HPP
#define CM_QFORM_HPP

#include <optional>
#include <vector>

#include "cm/arith.hpp"
#include "cm/errors.hpp"

namespace cm {

// Negative discriminant, D ≡ 0 or 1 (mod 4). Non-fundamental values
// (conductor > 1) are allowed.
class Discriminant {
public:
    explicit Discriminant(Int d) : d_(std::move(d)) {
        if (d_ >= 0)
            throw Error("Discriminant: must be negative");
        Int m = mod_canonical(d_, Int(4));
        if (m != 0 && m != 1)
            throw Error("Discriminant: must be 0 or 1 mod 4");
    }

    const Int& value() const { return d_; }
    bool operator==(const Discriminant& o) const { return d_ == o.d_; }

private:
    Int d_;
};

// Primitive positive definite binary quadratic form Ax^2 + Bxy + Cy^2.
struct Form {
    Int a, b, c;

    bool operator==(const Form& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator!=(const Form& o) const { return !(*this == o); }
    bool operator<(const Form& o) const {
        if (a != o.a)
            return a < o.a;
        if (b != o.b)
            return b < o.b;
        return c < o.c;
    }

    Int discriminant() const { return b * b - 4 * a * c; }
    bool is_principal() const { return a == 1; }
};

// (1, B, C) with B = D mod 2
Form principal_form(const Discriminant& D);

bool is_reduced(const Form& f);

// unique reduced representative of the class of f
Form reduce(Form f);

// Dirichlet composition followed by reduction
Form compose(const Form& f, const Form& g);

inline Form inverse(const Form& f) { return reduce(Form{f.a, -f.b, f.c}); }

Form form_pow(const Form& f, unsigned long e);

// All reduced primitive forms of discriminant D; |result| = h(D).
// Throws LimitExceeded when |D| exceeds the desk-scale limit.
std::vector<Form> enumerate_reduced(const Discriminant& D, const Int& limit = Int("10000000000"));

// A reduced form of a class containing an ideal of norm l (l prime), or
// nullopt when l is inert or divides the conductor.
std::optional<Form> prime_form(const Discriminant& D, const Int& l);

// conductor f with D = f^2 * d_K, d_K fundamental
Int conductor(const Discriminant& D);

} // namespace cm

#endif
