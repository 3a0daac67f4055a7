#include "cm/arith.hpp"

#include <array>

#include "cm/rng.hpp"

namespace cm {

Int mod_inv(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw NotInvertible("mod_inv: gcd(" + a.get_str() + ", " + m.get_str() + ") != 1");
    return r;
}

Residue mod_inv(const Residue& a) {
    return Residue(mod_inv(a.value(), a.modulus()), a.modulus());
}

namespace {

bool miller_rabin_witness(const Int& n, const Int& nm1, const Int& d, unsigned long s,
                          const Int& a) {
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1)
        return true;
    for (unsigned long i = 1; i < s; ++i) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == nm1)
            return true;
    }
    return false;
}

} // namespace

bool is_prime(const Int& n) {
    if (n < 2)
        return false;
    static const std::array<unsigned long, 13> small = {2,  3,  5,  7,  11, 13, 17,
                                                        19, 23, 29, 31, 37, 41};
    for (unsigned long p : small) {
        if (n == p)
            return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p))
            return false;
    }
    // trial division knocks out most composites cheaply
    for (unsigned long p = 43; p < 1000; p += 2) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p))
            return n == p;
    }
    if (n < 1000 * 1000)
        return true;

    Int nm1 = n - 1;
    Int d = nm1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

    // Sorenson-Webster: the first 13 prime bases are a deterministic test
    // for all n < 3.317e24.
    for (unsigned long a : small) {
        if (!miller_rabin_witness(n, nm1, d, s, Int(a)))
            return false;
    }
    static const Int det_bound("3317044064679887385961981");
    if (n < det_bound)
        return true;

    // witnesses derived from n itself, so the result is deterministic
    Rng rng(Rng::derive(mpz_get_ui(n.get_mpz_t()), 0x9d15ULL) ^
            static_cast<uint64_t>(mpz_sizeinbase(n.get_mpz_t(), 2)));
    for (int round = 0; round < 40; ++round) {
        Int a = 2 + Int(rng.next()) % (n - 3);
        if (!miller_rabin_witness(n, nm1, d, s, a))
            return false;
    }
    return true;
}

void FixedPoint::add_ratio(const Int& num, const Int& den) {
    if (den <= 0)
        throw Error("FixedPoint::add_ratio: positive denominator required");
    Int t = num;
    mpz_mul_2exp(t.get_mpz_t(), t.get_mpz_t(), fracbits);
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), den.get_mpz_t());
    // round to nearest: bump the floor quotient when 2r >= den
    if (2 * r >= den)
        q += 1;
    scaled_ += q;
}

Int FixedPoint::round_nearest() const {
    Int half(1);
    mpz_mul_2exp(half.get_mpz_t(), half.get_mpz_t(), fracbits - 1);
    Int t = scaled_ + half;
    Int q;
    mpz_fdiv_q_2exp(q.get_mpz_t(), t.get_mpz_t(), fracbits);
    return q;
}

} // namespace cm
