#ifndef CM_FPZ_HPP
#define CM_FPZ_HPP

#include "cm/arith.hpp"
#include "cm/errors.hpp"
#include "cm/rng.hpp"

namespace cm {

// F_q with arbitrary-precision modulus; elements are canonical mpz values.
// Used for everything on the target-prime side, where q may run to
// thousands of bits.
class FpZ {
public:
    using elem = Int;

    FpZ() : p_(2) {}
    explicit FpZ(Int p) : p_(std::move(p)) {
        if (p_ < 2)
            throw Error("FpZ: modulus must exceed 1");
    }

    const Int& modulus() const { return p_; }
    elem zero() const { return Int(0); }
    elem one() const { return Int(1); }

    elem add(const elem& a, const elem& b) const {
        Int s = a + b;
        if (s >= p_)
            s -= p_;
        return s;
    }
    elem sub(const elem& a, const elem& b) const {
        Int s = a - b;
        if (s < 0)
            s += p_;
        return s;
    }
    elem neg(const elem& a) const { return a == 0 ? a : Int(p_ - a); }
    elem mul(const elem& a, const elem& b) const {
        Int r = a * b;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
        return r;
    }
    elem sqr(const elem& a) const { return mul(a, a); }

    elem pow(const elem& a, const Int& e) const {
        Int r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p_.get_mpz_t());
        return r;
    }

    elem inv(const elem& a) const { return mod_inv(a, p_); }

    bool is_zero(const elem& a) const { return a == 0; }
    bool eq(const elem& a, const elem& b) const { return a == b; }

    elem from_int(const Int& v) const { return mod_canonical(v, p_); }
    const Int& to_int(const elem& a) const { return a; }

    elem random(Rng& rng) const {
        size_t bits = mpz_sizeinbase(p_.get_mpz_t(), 2);
        size_t words = (bits + 63) / 64;
        for (;;) {
            Int r = 0;
            for (size_t i = 0; i < words; ++i) {
                mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), 64);
                r += Int(rng.next());
            }
            mpz_tdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), bits);
            if (r < p_)
                return r;
        }
    }

private:
    Int p_;
};

} // namespace cm

#endif
