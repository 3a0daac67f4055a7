#ifndef CM_ARITH_HPP
#define CM_ARITH_HPP

#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "cm/errors.hpp"

namespace cm {

// Arbitrary-precision integers are provided by GMP throughout.
using Int = mpz_class;

inline Int int_from_string(const std::string& s) { return Int(s); }

// Canonical representative of x mod m in [0, m).
inline Int mod_canonical(const Int& x, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// An element of Z/mZ, kept canonical (0 <= value < modulus).
class Residue {
public:
    Residue() : v_(0), m_(2) {}
    Residue(Int value, Int modulus) : v_(std::move(value)), m_(std::move(modulus)) {
        if (m_ <= 1)
            throw Error("Residue: modulus must exceed 1");
        v_ = mod_canonical(v_, m_);
    }

    const Int& value() const { return v_; }
    const Int& modulus() const { return m_; }

    bool operator==(const Residue& o) const { return v_ == o.v_ && m_ == o.m_; }
    bool operator!=(const Residue& o) const { return !(*this == o); }

    Residue operator+(const Residue& o) const { return Residue(v_ + o.v_, m_); }
    Residue operator-(const Residue& o) const { return Residue(v_ - o.v_, m_); }
    Residue operator*(const Residue& o) const { return Residue(v_ * o.v_, m_); }
    Residue operator-() const { return Residue(-v_, m_); }

    Residue pow(const Int& e) const {
        Residue r(0, m_);
        mpz_powm(r.v_.get_mpz_t(), v_.get_mpz_t(), e.get_mpz_t(), m_.get_mpz_t());
        return r;
    }

private:
    Int v_;
    Int m_;
};

// Multiplicative inverse mod a.modulus(); throws NotInvertible if gcd != 1.
Residue mod_inv(const Residue& a);

// Inverse of a mod m as bare integers.
Int mod_inv(const Int& a, const Int& m);

// Miller-Rabin: deterministic witness set below 3.317e24, plus 40 rounds of
// witnesses derived deterministically from n above that (error < 2^-80).
bool is_prime(const Int& n);

// Fixed-point reals: value = scaled * 2^-fracbits. Addition is exact; the
// only rounding happens when a ratio num/den is converted in add_ratio, with
// per-term error below 2^-fracbits half an ulp.
class FixedPoint {
public:
    static constexpr unsigned fracbits = 128;

    FixedPoint() : scaled_(0) {}

    const Int& scaled() const { return scaled_; }

    // acc += num/den, rounded to the nearest multiple of 2^-fracbits
    void add_ratio(const Int& num, const Int& den);

    void add(const FixedPoint& o) { scaled_ += o.scaled_; }

    // nearest integer to the represented value (ties away from zero; the
    // explicit-CRT contract guarantees ties never occur when 4|c| < M)
    Int round_nearest() const;

private:
    Int scaled_;
};

} // namespace cm

#endif
