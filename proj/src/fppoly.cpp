#include "cm/fppoly.hpp"

#include <cstring>

namespace cm {
namespace detail {

static_assert(GMP_NUMB_BITS == 64, "64-bit GMP limbs expected");

namespace {

size_t ceil_log2(size_t n) {
    size_t b = 0;
    while ((size_t(1) << b) < n)
        ++b;
    return b;
}

size_t bitlen_u64(uint64_t v) {
    size_t b = 0;
    while (v) {
        ++b;
        v >>= 1;
    }
    return b;
}

} // namespace

size_t kronecker_stride_words(size_t modulus_bits, size_t min_len) {
    size_t bits = 2 * modulus_bits + ceil_log2(std::max<size_t>(min_len, 1)) + 1;
    return (bits + 63) / 64;
}

Poly<Fp64> mul_kronecker(const Poly<Fp64>& a, const Poly<Fp64>& b) {
    const Fp64& k = *a.k;
    uint64_t p = k.modulus();
    size_t na = a.c.size(), nb = b.c.size();
    size_t ws = kronecker_stride_words(bitlen_u64(p - 1), std::min(na, nb));

    auto pack = [&](const std::vector<uint64_t>& coeffs, mpz_class& out) {
        size_t total = coeffs.size() * ws + 1;
        mp_limb_t* w = mpz_limbs_write(out.get_mpz_t(), total);
        std::memset(w, 0, total * sizeof(mp_limb_t));
        for (size_t i = 0; i < coeffs.size(); ++i)
            w[i * ws] = k.from_mont(coeffs[i]);
        mpz_limbs_finish(out.get_mpz_t(), total);
    };

    mpz_class A, B, C;
    pack(a.c, A);
    pack(b.c, B);
    mpz_mul(C.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());

    size_t rn = na + nb - 1;
    const mp_limb_t* s = mpz_limbs_read(C.get_mpz_t());
    size_t sn = mpz_size(C.get_mpz_t());

    Poly<Fp64> r(k);
    r.c.assign(rn, 0);
    for (size_t i = 0; i < rn; ++i) {
        uint64_t acc = 0;
        for (size_t j = ws; j-- > 0;) {
            size_t idx = i * ws + j;
            uint64_t w = idx < sn ? s[idx] : 0;
            acc = (uint64_t)(((unsigned __int128)acc << 64 | w) % p);
        }
        r.c[i] = k.to_mont(acc);
    }
    r.trim();
    return r;
}

Poly<FpZ> mul_kronecker(const Poly<FpZ>& a, const Poly<FpZ>& b) {
    const FpZ& k = *a.k;
    const Int& q = k.modulus();
    size_t qbits = mpz_sizeinbase(q.get_mpz_t(), 2);
    size_t na = a.c.size(), nb = b.c.size();
    size_t ws = kronecker_stride_words(qbits, std::min(na, nb));

    auto pack = [&](const std::vector<Int>& coeffs, mpz_class& out) {
        size_t total = coeffs.size() * ws + 1;
        mp_limb_t* w = mpz_limbs_write(out.get_mpz_t(), total);
        std::memset(w, 0, total * sizeof(mp_limb_t));
        for (size_t i = 0; i < coeffs.size(); ++i) {
            const mpz_srcptr cz = coeffs[i].get_mpz_t();
            size_t cn = mpz_size(cz);
            const mp_limb_t* cl = mpz_limbs_read(cz);
            for (size_t j = 0; j < cn; ++j)
                w[i * ws + j] = cl[j];
        }
        mpz_limbs_finish(out.get_mpz_t(), total);
    };

    mpz_class A, B, C;
    pack(a.c, A);
    pack(b.c, B);
    mpz_mul(C.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());

    size_t rn = na + nb - 1;
    const mp_limb_t* s = mpz_limbs_read(C.get_mpz_t());
    size_t sn = mpz_size(C.get_mpz_t());

    Poly<FpZ> r(k);
    r.c.assign(rn, Int(0));
    mpz_class window;
    for (size_t i = 0; i < rn; ++i) {
        size_t lo = i * ws;
        if (lo >= sn)
            break;
        size_t len = std::min(ws, sn - lo);
        mpz_import(window.get_mpz_t(), len, -1, sizeof(mp_limb_t), 0, 0, s + lo);
        mpz_mod(r.c[i].get_mpz_t(), window.get_mpz_t(), q.get_mpz_t());
    }
    r.trim();
    return r;
}

} // namespace detail
} // namespace cm
