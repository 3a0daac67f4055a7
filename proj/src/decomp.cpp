#include "cm/decomp.hpp"

namespace cm {

SymFunc choose_symfunc(unsigned long n, unsigned long m, unsigned attempt,
                       uint64_t rng_seed, SPolicy policy) {
    SymFunc s;
    if (n == 1) {
        s.kind = SKind::e1;
        return s;
    }
    bool random = attempt >= 1 || policy == SPolicy::random_first;
    if (!random) {
        s.kind = policy == SPolicy::minus_e1 ? SKind::minus_e1 : SKind::e1;
        return s;
    }
    s.kind = SKind::random_s;
    Rng rng(Rng::derive(rng_seed, 0x57a7ULL + attempt));
    Int bound = 2 * Int(m) * Int(m); // coefficients uniform over [0, 2m^2 - 1]
    for (unsigned long kk = 2; kk <= n; ++kk) {
        Int c;
        if (bound <= Int((unsigned long)1) << 62) {
            c = Int(rng.below(mpz_get_ui(bound.get_mpz_t())));
        } else {
            size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
            do {
                c = 0;
                for (size_t got = 0; got < bits; got += 64) {
                    mpz_mul_2exp(c.get_mpz_t(), c.get_mpz_t(), 64);
                    c += Int(rng.next());
                }
                mpz_tdiv_r_2exp(c.get_mpz_t(), c.get_mpz_t(), bits);
            } while (c >= bound);
        }
        s.coeffs.push_back(c);
    }
    return s;
}

} // namespace cm
