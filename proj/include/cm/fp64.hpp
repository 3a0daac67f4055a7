#ifndef CM_FP64_HPP
#define CM_FP64_HPP

#include <cstdint>
#include <vector>

#include "cm/arith.hpp"
#include "cm/errors.hpp"
#include "cm/rng.hpp"

namespace cm {

// F_p for odd p < 2^62, values kept in Montgomery form (R = 2^64).
// This is the workhorse for all per-prime computation; the representation
// is an internal detail, conversions happen at module boundaries.
class Fp64 {
public:
    using elem = uint64_t;

    Fp64() = default;

    explicit Fp64(uint64_t p) : p_(p) {
        if (p < 3 || (p & 1) == 0 || p >= (1ULL << 62))
            throw Error("Fp64: odd modulus in [3, 2^62) required");
        // -p^-1 mod 2^64 by Newton iteration
        uint64_t inv = p;
        for (int i = 0; i < 5; ++i)
            inv *= 2 - p * inv;
        ninv_ = ~inv + 1; // == -inv
        // r2 = 2^128 mod p
        unsigned __int128 r = (unsigned __int128)1 << 64;
        r %= p;
        r2_ = (uint64_t)((r * r) % p);
        one_ = to_mont(1);
        two_ = add(one_, one_);
        three_ = add(two_, one_);
        four_ = add(two_, two_);
        eight_ = add(four_, four_);
    }

    // cached small constants in Montgomery form
    elem two() const { return two_; }
    elem three() const { return three_; }
    elem four() const { return four_; }
    elem eight() const { return eight_; }

    uint64_t modulus() const { return p_; }
    elem zero() const { return 0; }
    elem one() const { return one_; }

    elem to_mont(uint64_t a) const { return mul(a % p_, r2_); }
    uint64_t from_mont(elem a) const { return redc((unsigned __int128)a); }

    elem add(elem a, elem b) const {
        uint64_t s = a + b;
        if (s >= p_ || s < a)
            s -= p_;
        return s;
    }
    elem sub(elem a, elem b) const { return a >= b ? a - b : a + p_ - b; }
    elem neg(elem a) const { return a ? p_ - a : 0; }
    elem mul(elem a, elem b) const { return redc((unsigned __int128)a * b); }
    elem sqr(elem a) const { return mul(a, a); }

    elem pow(elem a, uint64_t e) const {
        elem r = one_;
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = sqr(a);
            e >>= 1;
        }
        return r;
    }

    elem inv(elem a) const {
        if (a == 0)
            throw NotInvertible("Fp64::inv of zero");
        return pow(a, p_ - 2);
    }

    bool is_zero(elem a) const { return a == 0; }
    bool eq(elem a, elem b) const { return a == b; }

    elem from_int(const Int& v) const {
        Int r = mod_canonical(v, Int(static_cast<unsigned long>(p_)));
        return to_mont(mpz_get_ui(r.get_mpz_t()));
    }
    Int to_int(elem a) const { return Int(static_cast<unsigned long>(from_mont(a))); }

    elem random(Rng& rng) const { return to_mont(rng.below(p_)); }

    // Legendre symbol of the plain value a (not Montgomery form)
    int jacobi_plain(uint64_t a) const {
        a %= p_;
        uint64_t m = p_;
        int t = 1;
        while (a != 0) {
            while ((a & 1) == 0) {
                a >>= 1;
                uint64_t r = m & 7;
                if (r == 3 || r == 5)
                    t = -t;
            }
            uint64_t tmp = a;
            a = m;
            m = tmp;
            if ((a & 3) == 3 && (m & 3) == 3)
                t = -t;
            a %= m;
        }
        return m == 1 ? t : 0;
    }

    // square root in Montgomery form (Tonelli-Shanks); false if non-residue
    bool sqrt(elem a, elem& out) const {
        if (a == 0) {
            out = 0;
            return true;
        }
        if (jacobi_plain(from_mont(a)) != 1)
            return false;
        if ((p_ & 3) == 3) {
            out = pow(a, (p_ + 1) >> 2);
            return true;
        }
        uint64_t q = p_ - 1;
        unsigned s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        uint64_t z = 2;
        while (jacobi_plain(z) != -1)
            ++z;
        elem c = pow(to_mont(z), q);
        elem x = pow(a, (q + 1) >> 1);
        elem t = pow(a, q);
        unsigned m = s;
        while (t != one_) {
            elem tt = t;
            unsigned i = 0;
            while (tt != one_) {
                tt = sqr(tt);
                ++i;
            }
            elem b = c;
            for (unsigned j = 0; j + i + 1 < m; ++j)
                b = sqr(b);
            x = mul(x, b);
            c = sqr(b);
            t = mul(t, c);
            m = i;
        }
        out = x;
        return true;
    }

private:
    uint64_t redc(unsigned __int128 t) const {
        uint64_t m = (uint64_t)t * ninv_;
        unsigned __int128 u = t + (unsigned __int128)m * p_;
        uint64_t r = (uint64_t)(u >> 64);
        return r >= p_ ? r - p_ : r;
    }

    uint64_t p_ = 0;
    uint64_t ninv_ = 0;
    uint64_t r2_ = 0;
    elem one_ = 0;
    elem two_ = 0;
    elem three_ = 0;
    elem four_ = 0;
    elem eight_ = 0;
};

} // namespace cm

#endif
