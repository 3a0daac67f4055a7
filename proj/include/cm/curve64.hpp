#ifndef CM_CURVE64_HPP
#define CM_CURVE64_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cm/fp64.hpp"
#include "cm/rng.hpp"

namespace cm {

// y^2 = x^3 + ax + b over F_p (values in Montgomery form)
struct Curve64 {
    const Fp64* k = nullptr;
    uint64_t a = 0, b = 0;

    bool singular() const {
        // 4a^3 + 27b^2 = 0
        uint64_t a3 = k->mul(k->mul(a, a), a);
        uint64_t b2 = k->mul(b, b);
        uint64_t four = k->to_mont(4), t27 = k->to_mont(27);
        return k->is_zero(k->add(k->mul(four, a3), k->mul(t27, b2)));
    }
};

// curve with the given j-invariant: j/(1728-j) scaled to avoid inversion
// (a = 3j(1728-j), b = 2j(1728-j)^2); j=0 -> (0,1), j=1728 -> (1,0)
Curve64 curve_from_j64(const Fp64& k, uint64_t j_mont);

// quadratic twist by a fixed non-residue
Curve64 twist64(const Curve64& E);

uint64_t j_invariant64(const Curve64& E);

// Jacobian point; infinity encoded by z = 0
struct Point64 {
    uint64_t x = 0, y = 0, z = 0;
    bool is_zero() const { return z == 0; }
};

Point64 point_dbl(const Curve64& E, const Point64& P);
Point64 point_add(const Curve64& E, const Point64& P, const Point64& Q);
Point64 point_mul(const Curve64& E, const Point64& P, uint64_t n);
bool point_eq(const Curve64& E, const Point64& P, const Point64& Q);

// random affine point (z = 1) via x sampling and a square root
Point64 random_point(const Curve64& E, Rng& rng);

// x-only trace probe: true iff x([p+1]P) = x([t]P) for the point with
// abscissa x on E or its twist — the pass condition for #E = p+1 -+ t.
bool xonly_trace_probe(const Curve64& E, uint64_t x_mont, uint64_t t);

// prime factorization (trial division + Pollard rho/Brent)
std::map<uint64_t, unsigned> factor_u64(uint64_t n);

// exact order of P given a multiple M of it, M factored
uint64_t point_order(const Curve64& E, const Point64& P, uint64_t M,
                     const std::map<uint64_t, unsigned>& M_fact);

// #E(F_p) by brute force (for small p)
uint64_t count_points_naive(const Curve64& E);

// true iff #E(F_p) = N exactly: rejects via [N]P != O, proves via point
// orders whose unique Hasse-interval multiple is N, falls back to
// exhaustive counting for small p
bool curve_order_matches(const Curve64& E, uint64_t N, uint64_t seed = 1);

// weaker disambiguation for large fields: assuming #E is N1 or N2,
// returns the one it is (nullopt if undecided after sampling)
std::optional<uint64_t> curve_order_of_pair(const Curve64& E, uint64_t N1, uint64_t N2,
                                            uint64_t seed = 1);

} // namespace cm

#endif
