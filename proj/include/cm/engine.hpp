#ifndef CM_ENGINE_HPP
#define CM_ENGINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cm/arith.hpp"
#include "cm/clgroup.hpp"
#include "cm/decomp.hpp"
#include "cm/ecrt.hpp"
#include "cm/heights.hpp"
#include "cm/isogwalk.hpp"
#include "cm/normprimes.hpp"

namespace cm {

enum class Algorithm { A1, A2, A2L };

struct RunConfig {
    Int D;
    Int q;
    Algorithm alg = Algorithm::A1;
    unsigned long subgroup_order = 0; // 0 = auto (height-bound minimizer)
    SPolicy s_policy = SPolicy::e1;
    uint64_t seed = 1;
    CrtMode crt_mode = CrtMode::B;
    unsigned threads = 1;
    std::string modpoly_dir; // empty: compiled-in bundled directory
    unsigned long max_v = 0; // 0 = auto: 1, or 2 when D ≡ 1 (mod 8)
    bool verify_curve = true;
    Int desired_order = 0; // 0: q + 1 - t
};

struct RunStats {
    double t_find_ms = 0;
    double t_enum_ms = 0;
    double t_build_ms = 0;
    double t_crt_ms = 0;
    double t_root_ms = 0;
    unsigned long n_primes = 0;
    unsigned retries = 0;
    size_t acc_peak_stage1 = 0;
    size_t acc_peak_stage2 = 0;
    size_t crt_mi_entries = 0;
};

struct CMResult {
    Int D, q;
    unsigned long h = 1, m = 1, n = 1;
    SubgroupSpec G;
    SKind s_kind = SKind::e1;
    std::vector<Int> s_coeffs;
    long height_bits = 0;
    std::vector<Int> V;                   // mod q, low-to-high, monic
    std::vector<std::vector<Int>> W;      // Algorithm 1: W_k mod q per transported k
    std::vector<Int> wvals;               // Algorithms 2/2L: w_k mod q
    std::vector<unsigned long> k_list;    // transported k indices
    Int y;
    std::vector<Int> U; // U(X, y) mod q, low-to-high, monic
    Int x;
    Int t, v; // norm-equation solution for q
    Int N;    // verified curve order
    Int a, b; // curve coefficients
    RunStats stats;
};

// Algorithm 1, Algorithm 2, or the large-q variant, per cfg.alg.
CMResult run_cm(const RunConfig& cfg);

// Exact integer coefficients of H_D (low-to-high, monic), via the
// G = cl(O) degenerate run and plain CRT lifting.
std::vector<Int> hilbert_over_Z(const Int& D, uint64_t seed = 1,
                                const std::string& modpoly_dir = "");

// H_D mod q (low-to-high, monic) via the explicit CRT, never lifting to Z.
std::vector<Int> hilbert_mod_q(const Int& D, const Int& q, uint64_t seed = 1,
                               const std::string& modpoly_dir = "",
                               CrtMode mode = CrtMode::B);

// Curve with j-invariant x over F_q having exactly N points (the curve
// (3k, 2k) with k = x/(1728-x), or its twist). twinN is the other
// admissible order. Throws OrderMismatch when neither twist verifies.
std::pair<Int, Int> build_curve(const Int& q, const Int& x, const Int& N, const Int& twinN,
                                uint64_t seed = 1);

// decide which of the two admissible orders the given curve has;
// throws OrderMismatch if neither fits
Int determine_order(const Int& q, const Int& a, const Int& b, const Int& N1,
                    const Int& N2, uint64_t seed = 1);

// [N]P = O for a few random points and [twinN]P != O for at least one:
// the verification used on curves too large for exact order proofs.
bool verify_curve_order(const Int& q, const Int& a, const Int& b, const Int& N,
                        const Int& twinN, uint64_t seed = 1);

// bundled modular polynomial directory (compile-time default, overridable
// by the CM_MODPOLY_DIR environment variable)
std::string default_modpoly_dir();

// required norm-equation v for the default prime stream: 2 when
// D ≡ 1 (mod 8), else 1
unsigned long required_v(const Int& D);

} // namespace cm

#endif
