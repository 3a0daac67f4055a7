#ifndef CM_NORMPRIMES_HPP
#define CM_NORMPRIMES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cm/arith.hpp"
#include "cm/qform.hpp"

namespace cm {

// A CRT prime: 4p = t^2 + v^2 |D|, with t, v > 0.
struct SplitPrime {
    uint64_t p = 0;
    uint64_t t = 0;
    uint64_t v = 0;
};

struct PrimeSet {
    std::vector<SplitPrime> primes;
    long product_bits = 0; // floor(lg prod)
    Int product = 1;
};

// Solution (t, v) of 4p = t^2 - v^2 D with t, v > 0, or nullopt.
// Modified Cornacchia; brute force below a small threshold.
std::optional<std::pair<Int, Int>> solve_norm(const Discriminant& D, const Int& p);

// square root of a mod odd prime p, or nullopt for a non-residue
std::optional<Int> sqrt_mod(const Int& a, const Int& p);

// deterministic Miller-Rabin for 64-bit inputs
bool is_prime_u64(uint64_t n);

struct SelectOptions {
    unsigned long max_v = 1;                  // v = 1 unless --allow-v raises it
    std::vector<unsigned long> exclude_norms; // presentation norms: p must differ,
                                              // and v must be coprime to them
    Int exclude_q = 0;                        // target prime must not enter S
    uint64_t t_cap_limit = (1ULL << 40);
};

// Candidates (t^2 + v^2 |D|)/4 streamed in rating order r(p) = p ascending,
// ties by smaller t; only primes passing the constraints come out.
class CandidateStream {
public:
    CandidateStream(const Discriminant& D, SelectOptions opts);

    SplitPrime next(); // throws InsufficientPrimes when the cap is exhausted

private:
    struct Cursor {
        uint64_t v;
        uint64_t t;    // next t to try
        Int p_next;    // (t^2 + v^2 |D|)/4 for the current t
    };

    bool admissible_v(unsigned long v) const;
    void advance(Cursor& c) const;

    Discriminant D_;
    SelectOptions opts_;
    Int absd_;
    std::vector<Cursor> cursors_;
    uint64_t cap_;
};

// Smallest-rating prefix of the candidate stream whose product exceeds
// 2^(bound_bits + 2), i.e. product > 4B for B <= 2^bound_bits.
PrimeSet select_primes(const Discriminant& D, long bound_bits, const SelectOptions& opts);

} // namespace cm

#endif
