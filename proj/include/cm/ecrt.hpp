#ifndef CM_ECRT_HPP
#define CM_ECRT_HPP

#include <atomic>
#include <cstdint>
#include <vector>

#include "cm/arith.hpp"

namespace cm {

// Mode A precomputes the full M_i = M/p_i mod q table (O(|S| log q) space);
// mode B keeps only M mod q and recovers M_i per prime by inverting p_i.
// Mode B is the default.
enum class CrtMode { A, B };

class CrtContext {
public:
    static CrtContext precompute(const std::vector<uint64_t>& primes, const Int& q,
                                 CrtMode mode = CrtMode::B);

    size_t size() const { return primes_.size(); }
    uint64_t prime(size_t i) const { return primes_[i]; }
    uint64_t a(size_t i) const { return a_[i]; }
    const Int& modulus() const { return q_; }
    const Int& M_mod_q() const { return M_mod_q_; }
    CrtMode mode() const { return mode_; }

    // M/p_i mod q: table lookup in mode A, one inversion in mode B
    Int Mi_mod_q(size_t i) const;

    // space accounting: number of stored M_i entries (0 in mode B)
    size_t mi_table_entries() const { return Mi_.size(); }

private:
    std::vector<uint64_t> primes_;
    std::vector<uint64_t> a_;
    Int q_;
    Int M_mod_q_;
    std::vector<Int> Mi_; // mode A only
    CrtMode mode_ = CrtMode::B;
};

// One explicit-CRT target: the pair (sum c_i a_i M_i mod q, fixed-point
// sum c_i a_i / p_i). Live-instance counters back the space-accounting
// assertions.
class CrtAccumulator {
public:
    CrtAccumulator();
    CrtAccumulator(const CrtAccumulator&);
    CrtAccumulator(CrtAccumulator&&) noexcept;
    CrtAccumulator& operator=(const CrtAccumulator&) = default;
    CrtAccumulator& operator=(CrtAccumulator&&) = default;
    ~CrtAccumulator();

    // fold in c_i (canonical residue mod p_i); Mi = M/p_i mod q
    void update(const CrtContext& ctx, size_t i, uint64_t c_i, const Int& Mi);
    void update(const CrtContext& ctx, size_t i, uint64_t c_i);

    // c mod q = (sum - round(rsum) M) mod q; valid once every prime has
    // been folded in and 4|c| < M
    Int finalize(const CrtContext& ctx) const;

    static size_t live();
    static size_t peak();
    static void reset_peak();

private:
    Int sum_mod_q_;
    FixedPoint real_sum_;
};

// plain CRT lift to the symmetric representative in (-M/2, M/2]
Int crt_to_integer(const std::vector<uint64_t>& residues,
                   const std::vector<uint64_t>& primes);

} // namespace cm

#endif
