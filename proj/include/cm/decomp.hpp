#ifndef CM_DECOMP_HPP
#define CM_DECOMP_HPP

#include <cstdint>
#include <vector>

#include "cm/arith.hpp"
#include "cm/errors.hpp"
#include "cm/fppoly.hpp"
#include "cm/rng.hpp"

namespace cm {

// The symmetric function s applied to each G-orbit: either +-e_1 or
// e_1 + c_2 e_2 + ... + c_n e_n with random c_k in [0, 2m^2 - 1].
enum class SKind { e1, minus_e1, random_s };

struct SymFunc {
    SKind kind = SKind::e1;
    std::vector<Int> coeffs; // c_2..c_n, only for random_s

    bool is_e1_kind() const { return kind != SKind::random_s; }
};

enum class SPolicy { e1, minus_e1, random_first };

// attempt 0 follows the policy; attempt >= 1 draws random coefficients.
// n = 1 always returns e1.
SymFunc choose_symfunc(unsigned long n, unsigned long m, unsigned attempt,
                       uint64_t rng_seed, SPolicy policy = SPolicy::e1);

// Coefficients theta_{i,0..n-1} of P_i(X) = prod (X - j) (theta_{i,n} = 1
// stays implicit).
template <class K>
std::vector<typename K::elem> orbit_to_theta(const K& k,
                                             const std::vector<typename K::elem>& orbit) {
    Poly<K> p = poly_from_roots(k, orbit);
    std::vector<typename K::elem> th(p.c.begin(), p.c.end() - 1);
    return th;
}

// y_i = s(orbit) read off the theta block: e_k = (-1)^k theta_{n-k}.
template <class K>
typename K::elem y_from_theta(const K& k, const std::vector<typename K::elem>& tb,
                              const SymFunc& s) {
    size_t n = tb.size();
    typename K::elem e1 = k.neg(tb[n - 1]);
    if (s.is_e1_kind())
        return s.kind == SKind::minus_e1 ? k.neg(e1) : e1;
    typename K::elem y = e1;
    for (size_t kk = 2; kk <= n; ++kk) {
        typename K::elem ek = tb[n - kk];
        if (kk % 2 == 1)
            ek = k.neg(ek);
        y = k.add(y, k.mul(k.from_int(s.coeffs[kk - 2]), ek));
    }
    return y;
}

// U(X, y) = X^n + sum_k (w_k / V'(y)) X^k. With s = +-e1 the X^{n-1} slot
// is reconstructed from y itself and wvals carries only k = 0..n-2.
template <class K>
Poly<K> assemble_U(const K& k, const typename K::elem& vprime_at_y,
                   const typename K::elem& y,
                   const std::vector<typename K::elem>& wvals, SKind s_kind) {
    if (k.is_zero(vprime_at_y))
        throw DivideByZero("assemble_U: V'(y) = 0");
    size_t n = s_kind == SKind::random_s ? wvals.size() : wvals.size() + 1;
    typename K::elem inv = k.inv(vprime_at_y);
    Poly<K> u(k);
    u.c.assign(n + 1, k.zero());
    u.c[n] = k.one();
    for (size_t i = 0; i < wvals.size(); ++i)
        u.c[i] = k.mul(wvals[i], inv);
    if (s_kind == SKind::e1)
        u.c[n - 1] = k.neg(y);
    else if (s_kind == SKind::minus_e1)
        u.c[n - 1] = y;
    return u;
}

// w_k = sum_i theta_{ik} z_i with z_i = prod_{j != i} (z - y_j); the
// evaluation route of Eq for W_k that never builds the polynomials.
template <class K>
std::vector<typename K::elem> eval_w(const K& k,
                                     const std::vector<std::vector<typename K::elem>>& thetas,
                                     const std::vector<typename K::elem>& ys,
                                     const typename K::elem& z) {
    if (thetas.size() != ys.size())
        throw Error("eval_w: |thetas| != |ys|");
    auto zi = complements(k, z, ys);
    size_t n = thetas.empty() ? 0 : thetas[0].size();
    std::vector<typename K::elem> w(n, k.zero());
    for (size_t i = 0; i < thetas.size(); ++i)
        for (size_t kk = 0; kk < n; ++kk)
            w[kk] = k.add(w[kk], k.mul(thetas[i][kk], zi[i]));
    return w;
}

} // namespace cm

#endif
