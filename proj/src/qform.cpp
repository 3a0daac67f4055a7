#include "cm/qform.hpp"

#include <cstdint>
#include <numeric>

namespace cm {

Form principal_form(const Discriminant& D) {
    Int b = mod_canonical(D.value(), Int(2));
    Int c = (b * b - D.value()) / 4;
    return Form{Int(1), b, c};
}

bool is_reduced(const Form& f) {
    Int ab = abs(f.b);
    if (!(ab <= f.a && f.a <= f.c))
        return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0)
        return false;
    return true;
}

namespace {

// b into (-a, a], c recomputed from the discriminant
void normalize(Form& f) {
    Int disc = f.discriminant();
    Int r = mod_canonical(f.b + f.a, 2 * f.a); // in [0, 2a)
    Int bn = r - f.a;                          // in [-a, a)
    if (bn == -f.a)
        bn = f.a;
    f.b = bn;
    f.c = (bn * bn - disc) / (4 * f.a);
}

} // namespace

Form reduce(Form f) {
    if (f.a <= 0)
        throw Error("reduce: form must be positive definite");
    normalize(f);
    while (f.a > f.c) {
        Int a = f.c, b = -f.b, c = f.a;
        f = Form{a, b, c};
        normalize(f);
    }
    if (f.a == f.c && f.b < 0)
        f.b = -f.b;
    return f;
}

Form compose(const Form& f1, const Form& f2) {
    Int d1 = f1.discriminant();
    if (d1 != f2.discriminant())
        throw Error("compose: discriminants differ");

    Int s = (f1.b + f2.b) / 2;

    // g = u*a1 + v*a2 + w*s via two extended gcds
    Int g0, x0, y0;
    mpz_gcdext(g0.get_mpz_t(), x0.get_mpz_t(), y0.get_mpz_t(), f1.a.get_mpz_t(),
               f2.a.get_mpz_t());
    Int g, x1, y1;
    mpz_gcdext(g.get_mpz_t(), x1.get_mpz_t(), y1.get_mpz_t(), g0.get_mpz_t(), s.get_mpz_t());
    Int u = x0 * x1, v = y0 * x1, w = y1;

    Int a3 = (f1.a / g) * (f2.a / g);
    // B = (u*a1*b2 + v*a2*b1 + w*(b1*b2 + D)/2) / g  (mod 2*a3)
    Int num = u * f1.a * f2.b + v * f2.a * f1.b + w * ((f1.b * f2.b + d1) / 2);
    Int B, rr;
    mpz_tdiv_qr(B.get_mpz_t(), rr.get_mpz_t(), num.get_mpz_t(), g.get_mpz_t());
    if (rr != 0)
        throw Error("compose: internal divisibility failure");
    B = mod_canonical(B, 2 * a3);
    Int c3num = B * B - d1;
    mpz_tdiv_qr(c3num.get_mpz_t(), rr.get_mpz_t(), c3num.get_mpz_t(), Int(4 * a3).get_mpz_t());
    if (rr != 0)
        throw Error("compose: B^2 != D mod 4a");
    return reduce(Form{a3, B, c3num});
}

Form form_pow(const Form& f, unsigned long e) {
    Form base = reduce(f);
    Discriminant D(f.discriminant());
    Form r = principal_form(D);
    while (e) {
        if (e & 1)
            r = compose(r, base);
        base = compose(base, base);
        e >>= 1;
    }
    return r;
}

std::vector<Form> enumerate_reduced(const Discriminant& D, const Int& limit) {
    if (-D.value() > limit)
        throw LimitExceeded("enumerate_reduced: |D| exceeds configured limit " +
                            limit.get_str());
    // |D| < 2^60 here, so the scan fits in int64
    int64_t absd = mpz_get_si(Int(-D.value()).get_mpz_t());
    std::vector<Form> out;
    int64_t par = absd & 1; // b parity: b ≡ D (mod 2)
    for (int64_t a = 1; 3 * a * a <= absd; ++a) {
        for (int64_t b = par; b <= a; b += 2) {
            int64_t t = b * b + absd; // = b^2 - D
            if (t % (4 * a) != 0)
                continue;
            int64_t c = t / (4 * a);
            if (c < a)
                continue;
            if (std::gcd(std::gcd(a, b), c) != 1)
                continue;
            out.push_back(Form{Int(a), Int(b), Int(c)});
            if (b != 0 && b != a && a != c)
                out.push_back(Form{Int(a), Int(-b), Int(c)});
        }
    }
    return out;
}

Int conductor(const Discriminant& D) {
    // largest f with f^2 | D and D/f^2 ≡ 0,1 mod 4
    Int absd = -D.value();
    Int best(1);
    for (Int f(1); f * f <= absd; ++f) {
        if (absd % (f * f) != 0)
            continue;
        Int d0 = D.value() / (f * f);
        Int m = mod_canonical(d0, Int(4));
        if (m == 0 || m == 1)
            best = f;
    }
    return best;
}

std::optional<Form> prime_form(const Discriminant& D, const Int& l) {
    if (l < 2 || !is_prime(l))
        throw Error("prime_form: l must be prime");
    if (conductor(D) % l == 0)
        return std::nullopt;
    Int fourl = 4 * l;
    for (Int b = mod_canonical(D.value(), Int(2)); b < 2 * l; b += 2) {
        Int t = b * b - D.value();
        if (t % fourl != 0)
            continue;
        Int c = t / fourl;
        Form f{l, b, c};
        Int g = gcd(gcd(f.a, f.b), f.c);
        if (g != 1)
            continue;
        return reduce(f);
    }
    return std::nullopt;
}

} // namespace cm
