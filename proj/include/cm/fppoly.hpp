#ifndef CM_FPPOLY_HPP
#define CM_FPPOLY_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <gmp.h>

#include "cm/arith.hpp"
#include "cm/errors.hpp"
#include "cm/fp64.hpp"
#include "cm/fpz.hpp"
#include "cm/rng.hpp"

namespace cm {

// Dense univariate polynomials over a prime field K, coefficients stored
// low-to-high. The same template serves the 64-bit per-prime fields and the
// big target field; all engine polynomial work funnels through here.
template <class K>
struct Poly {
    const K* k = nullptr;
    std::vector<typename K::elem> c;

    Poly() = default;
    explicit Poly(const K& field) : k(&field) {}
    Poly(const K& field, std::vector<typename K::elem> coeffs)
        : k(&field), c(std::move(coeffs)) {
        for (auto& x : c)
            x = k->from_int(k->to_int(x)); // canonicalize caller input
        trim();
    }

    void trim() {
        while (!c.empty() && k->is_zero(c.back()))
            c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    // degree of the zero polynomial is -1 by convention
    long degree() const { return static_cast<long>(c.size()) - 1; }

    typename K::elem coeff(size_t i) const { return i < c.size() ? c[i] : k->zero(); }

    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    bool is_monic() const { return !c.empty() && k->eq(c.back(), k->one()); }
};

template <class K>
Poly<K> poly_zero(const K& k) {
    return Poly<K>(k);
}

template <class K>
Poly<K> poly_const(const K& k, typename K::elem v) {
    Poly<K> p(k);
    p.c.push_back(v);
    p.trim();
    return p;
}

template <class K>
Poly<K> poly_x(const K& k) {
    Poly<K> p(k);
    p.c = {k.zero(), k.one()};
    return p;
}

template <class K>
Poly<K> poly_add(const Poly<K>& a, const Poly<K>& b) {
    const K& k = *a.k;
    Poly<K> r(k);
    r.c.resize(std::max(a.c.size(), b.c.size()), k.zero());
    for (size_t i = 0; i < r.c.size(); ++i)
        r.c[i] = k.add(a.coeff(i), b.coeff(i));
    r.trim();
    return r;
}

template <class K>
Poly<K> poly_sub(const Poly<K>& a, const Poly<K>& b) {
    const K& k = *a.k;
    Poly<K> r(k);
    r.c.resize(std::max(a.c.size(), b.c.size()), k.zero());
    for (size_t i = 0; i < r.c.size(); ++i)
        r.c[i] = k.sub(a.coeff(i), b.coeff(i));
    r.trim();
    return r;
}

template <class K>
Poly<K> poly_scale(const Poly<K>& a, typename K::elem s) {
    const K& k = *a.k;
    Poly<K> r(k);
    r.c.reserve(a.c.size());
    for (const auto& x : a.c)
        r.c.push_back(k.mul(x, s));
    r.trim();
    return r;
}

namespace detail {

// Schoolbook multiplication; used below the Kronecker threshold.
template <class K>
Poly<K> mul_schoolbook(const Poly<K>& a, const Poly<K>& b) {
    const K& k = *a.k;
    Poly<K> r(k);
    if (a.is_zero() || b.is_zero())
        return r;
    r.c.assign(a.c.size() + b.c.size() - 1, k.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (k.is_zero(a.c[i]))
            continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = k.add(r.c[i + j], k.mul(a.c[i], b.c[j]));
    }
    r.trim();
    return r;
}

size_t kronecker_stride_words(size_t modulus_bits, size_t min_len);

// Kronecker substitution: pack the coefficient vectors into big integers,
// multiply once with GMP, then carve the product back into coefficients.
Poly<Fp64> mul_kronecker(const Poly<Fp64>& a, const Poly<Fp64>& b);
Poly<FpZ> mul_kronecker(const Poly<FpZ>& a, const Poly<FpZ>& b);

inline constexpr size_t kKroneckerThreshold = 32;

} // namespace detail

template <class K>
Poly<K> poly_mul(const Poly<K>& a, const Poly<K>& b) {
    if (a.is_zero() || b.is_zero())
        return Poly<K>(*a.k);
    if (std::min(a.c.size(), b.c.size()) < detail::kKroneckerThreshold)
        return detail::mul_schoolbook(a, b);
    return detail::mul_kronecker(a, b);
}

template <class K>
Poly<K> poly_sqr(const Poly<K>& a) {
    return poly_mul(a, a);
}

template <class K>
Poly<K> poly_make_monic(const Poly<K>& a) {
    if (a.is_zero() || a.is_monic())
        return a;
    return poly_scale(a, a.k->inv(a.c.back()));
}

template <class K>
Poly<K> poly_derivative(const Poly<K>& a) {
    const K& k = *a.k;
    Poly<K> r(k);
    if (a.c.size() <= 1)
        return r;
    r.c.resize(a.c.size() - 1);
    typename K::elem n = k.zero();
    for (size_t i = 1; i < a.c.size(); ++i) {
        n = k.add(n, k.one());
        r.c[i - 1] = k.mul(a.c[i], n);
    }
    r.trim();
    return r;
}

template <class K>
typename K::elem poly_eval(const Poly<K>& a, const typename K::elem& x) {
    const K& k = *a.k;
    typename K::elem r = k.zero();
    for (size_t i = a.c.size(); i-- > 0;)
        r = k.add(k.mul(r, x), a.c[i]);
    return r;
}

// truncated product: (a*b) mod x^len
template <class K>
Poly<K> poly_mul_trunc(const Poly<K>& a, const Poly<K>& b, size_t len) {
    Poly<K> r = poly_mul(a, b);
    if (r.c.size() > len) {
        r.c.resize(len);
        r.trim();
    }
    return r;
}

// inverse of f as a power series mod x^len (f(0) must be a unit)
template <class K>
Poly<K> poly_inv_series(const Poly<K>& f, size_t len) {
    const K& k = *f.k;
    if (f.is_zero() || k.is_zero(f.c[0]))
        throw DivideByZero("poly_inv_series: constant term is zero");
    Poly<K> g = poly_const(k, k.inv(f.c[0]));
    size_t prec = 1;
    while (prec < len) {
        prec = std::min(2 * prec, len);
        Poly<K> ft(k);
        ft.c.assign(f.c.begin(), f.c.begin() + std::min(f.c.size(), prec));
        ft.trim();
        // g <- g*(2 - f*g) mod x^prec
        Poly<K> t = poly_mul_trunc(ft, g, prec);
        Poly<K> two_minus(k);
        two_minus.c.assign(prec, k.zero());
        for (size_t i = 0; i < t.c.size(); ++i)
            two_minus.c[i] = k.neg(t.c[i]);
        two_minus.c[0] = k.add(two_minus.c[0], k.add(k.one(), k.one()));
        two_minus.trim();
        g = poly_mul_trunc(g, two_minus, prec);
    }
    return g;
}

template <class K>
Poly<K> poly_reverse(const Poly<K>& a, size_t len) {
    Poly<K> r(*a.k);
    r.c.assign(len, a.k->zero());
    for (size_t i = 0; i < a.c.size() && i < len; ++i)
        r.c[len - 1 - i] = a.c[i];
    r.trim();
    return r;
}

namespace detail {

template <class K>
void divrem_schoolbook(const Poly<K>& a, const Poly<K>& b, Poly<K>& q, Poly<K>& r) {
    const K& k = *a.k;
    q = Poly<K>(k);
    r = a;
    long db = b.degree();
    if (r.degree() < db)
        return;
    typename K::elem li = k.inv(b.c.back());
    q.c.assign(r.degree() - db + 1, k.zero());
    for (long i = r.degree(); i >= db; --i) {
        typename K::elem c = k.mul(r.c[i], li);
        q.c[i - db] = c;
        if (k.is_zero(c))
            continue;
        for (long j = 0; j <= db; ++j)
            r.c[i - db + j] = k.sub(r.c[i - db + j], k.mul(c, b.c[j]));
    }
    r.trim();
    q.trim();
}

} // namespace detail

template <class K>
void poly_divrem(const Poly<K>& a, const Poly<K>& b, Poly<K>& q, Poly<K>& r) {
    const K& k = *a.k;
    if (b.is_zero())
        throw DivideByZero("poly_divrem: division by zero polynomial");
    long da = a.degree(), db = b.degree();
    if (da < db) {
        q = Poly<K>(k);
        r = a;
        return;
    }
    size_t qlen = static_cast<size_t>(da - db + 1);
    if (static_cast<size_t>(db) <= detail::kKroneckerThreshold ||
        qlen <= detail::kKroneckerThreshold) {
        detail::divrem_schoolbook(a, b, q, r);
        return;
    }
    // Newton division via reversal
    Poly<K> ra = poly_reverse(a, da + 1);
    Poly<K> rb = poly_reverse(b, db + 1);
    Poly<K> qi = poly_mul_trunc(ra, poly_inv_series(rb, qlen), qlen);
    qi.c.resize(qlen, k.zero());
    q = Poly<K>(k);
    q.c.assign(qlen, k.zero());
    for (size_t i = 0; i < qlen; ++i)
        q.c[i] = qi.c[qlen - 1 - i];
    q.trim();
    Poly<K> qb = poly_mul(q, b);
    r = poly_sub(a, qb);
    r.trim();
}

template <class K>
Poly<K> poly_rem(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> q, r;
    poly_divrem(a, b, q, r);
    return r;
}

template <class K>
Poly<K> poly_div_exact(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> q, r;
    poly_divrem(a, b, q, r);
    if (!r.is_zero())
        throw Error("poly_div_exact: division is not exact");
    return q;
}

// monic gcd
template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        Poly<K> r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_make_monic(a);
}

// Fixed monic modulus with a cached inverse series for repeated reduction.
template <class K>
class PolyModulus {
public:
    explicit PolyModulus(Poly<K> f) : f_(std::move(f)) {
        if (f_.is_zero())
            throw DivideByZero("PolyModulus: zero modulus");
        f_ = poly_make_monic(f_);
        m_ = static_cast<size_t>(f_.degree());
        if (m_ > detail::kKroneckerThreshold) {
            Poly<K> rf = poly_reverse(f_, m_ + 1);
            inv_rev_ = poly_inv_series(rf, m_ == 0 ? 1 : m_);
        }
    }

    const Poly<K>& modulus() const { return f_; }
    size_t degree() const { return m_; }

    Poly<K> reduce(const Poly<K>& a) const {
        const K& k = *f_.k;
        if (m_ == 0)
            return Poly<K>(k);
        if (a.degree() < static_cast<long>(m_))
            return a;
        if (m_ <= detail::kKroneckerThreshold ||
            static_cast<size_t>(a.degree()) - m_ + 1 <= detail::kKroneckerThreshold) {
            Poly<K> q, r;
            detail::divrem_schoolbook(a, f_, q, r);
            return r;
        }
        size_t qlen = static_cast<size_t>(a.degree()) - m_ + 1;
        Poly<K> ra = poly_reverse(a, a.degree() + 1);
        Poly<K> qi = poly_mul_trunc(ra, inv_rev_, qlen);
        qi.c.resize(qlen, k.zero());
        Poly<K> q(k);
        q.c.assign(qlen, k.zero());
        for (size_t i = 0; i < qlen; ++i)
            q.c[i] = qi.c[qlen - 1 - i];
        q.trim();
        Poly<K> r = poly_sub(a, poly_mul(q, f_));
        // drop everything at or above deg f
        if (r.c.size() > m_) {
            r.c.resize(m_);
            r.trim();
        }
        return r;
    }

    Poly<K> mulmod(const Poly<K>& a, const Poly<K>& b) const { return reduce(poly_mul(a, b)); }
    Poly<K> sqrmod(const Poly<K>& a) const { return reduce(poly_sqr(a)); }

    // a^e mod f, e an arbitrary-precision exponent
    Poly<K> powmod(const Poly<K>& a, const Int& e) const {
        const K& k = *f_.k;
        Poly<K> base = reduce(a);
        Poly<K> r = poly_const(k, k.one());
        long bits = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2));
        if (e == 0)
            return reduce(r);
        for (long i = bits - 1; i >= 0; --i) {
            r = sqrmod(r);
            if (mpz_tstbit(e.get_mpz_t(), i))
                r = mulmod(r, base);
        }
        return r;
    }

private:
    Poly<K> f_;
    size_t m_ = 0;
    Poly<K> inv_rev_;
};

// Subproduct tree over linear factors (Y - y_i); shared by the monic
// product builder and the Hecke combination.
template <class K>
class SubproductTree {
public:
    SubproductTree(const K& k, const std::vector<typename K::elem>& points) : k_(&k) {
        size_t n = points.size();
        levels_.emplace_back();
        levels_[0].reserve(std::max<size_t>(n, 1));
        if (n == 0) {
            levels_[0].push_back(poly_const(k, k.one()));
        } else {
            for (const auto& y : points) {
                Poly<K> lin(k);
                lin.c = {k.neg(y), k.one()};
                levels_[0].push_back(std::move(lin));
            }
        }
        while (levels_.back().size() > 1) {
            const auto& prev = levels_.back();
            std::vector<Poly<K>> next;
            next.reserve((prev.size() + 1) / 2);
            for (size_t i = 0; i + 1 < prev.size(); i += 2)
                next.push_back(poly_mul(prev[i], prev[i + 1]));
            if (prev.size() & 1)
                next.push_back(prev.back());
            levels_.push_back(std::move(next));
        }
    }

    const Poly<K>& root() const { return levels_.back()[0]; }

    // sum_i coeffs[i] * prod_{j != i} (Y - y_j)
    Poly<K> combine(const std::vector<typename K::elem>& coeffs) const {
        const K& k = *k_;
        size_t n = coeffs.size();
        std::vector<Poly<K>> w;
        w.reserve(std::max<size_t>(n, 1));
        if (n == 0)
            return Poly<K>(k);
        for (const auto& t : coeffs)
            w.push_back(poly_const(k, t));
        for (size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
            const auto& prods = levels_[lvl];
            std::vector<Poly<K>> next;
            next.reserve((w.size() + 1) / 2);
            for (size_t i = 0; i + 1 < w.size(); i += 2)
                next.push_back(
                    poly_add(poly_mul(w[i], prods[i + 1]), poly_mul(w[i + 1], prods[i])));
            if (w.size() & 1)
                next.push_back(w.back());
            w = std::move(next);
        }
        return w[0];
    }

private:
    const K* k_;
    std::vector<std::vector<Poly<K>>> levels_;
};

// Monic polynomial with the given multiset of roots (empty -> 1).
template <class K>
Poly<K> poly_from_roots(const K& k, const std::vector<typename K::elem>& roots) {
    SubproductTree<K> tree(k, roots);
    return tree.root();
}

// W(Y) = sum_i thetas[i] * V(Y)/(Y - y_i); requires distinct ys.
// Satisfies W(y_i) = thetas[i] * V'(y_i).
template <class K>
Poly<K> hecke_combine(const K& k, const std::vector<typename K::elem>& thetas,
                      const std::vector<typename K::elem>& ys, const Poly<K>& V) {
    if (thetas.size() != ys.size())
        throw Error("hecke_combine: |thetas| != |ys|");
    for (size_t i = 0; i < ys.size(); ++i)
        for (size_t j = i + 1; j < ys.size(); ++j)
            if (k.eq(ys[i], ys[j]))
                throw DuplicateRoots("hecke_combine: duplicate y values");
    SubproductTree<K> tree(k, ys);
    if (tree.root() != V)
        throw Error("hecke_combine: V does not match product of (Y - y_i)");
    return tree.combine(thetas);
}

// result[i] = prod_{j != i} (z - y_j); works when z equals some y_j.
template <class K>
std::vector<typename K::elem> complements(const K& k, const typename K::elem& z,
                                          const std::vector<typename K::elem>& ys) {
    size_t n = ys.size();
    std::vector<typename K::elem> pre(n + 1, k.one()), suf(n + 1, k.one());
    for (size_t i = 0; i < n; ++i)
        pre[i + 1] = k.mul(pre[i], k.sub(z, ys[i]));
    for (size_t i = n; i-- > 0;)
        suf[i] = k.mul(suf[i + 1], k.sub(z, ys[i]));
    std::vector<typename K::elem> out(n, k.one());
    for (size_t i = 0; i < n; ++i)
        out[i] = k.mul(pre[i], suf[i + 1]);
    return out;
}

namespace detail {

// product of the distinct irreducible factors
template <class K>
Poly<K> poly_radical(const Poly<K>& f0) {
    const K& k = *f0.k;
    Poly<K> f = poly_make_monic(f0);
    if (f.degree() <= 1)
        return f;
    Poly<K> d = poly_derivative(f);
    if (d.is_zero()) {
        // f = u(x)^p with u built from every p-th coefficient
        Int p = Int(k.modulus());
        unsigned long pl = mpz_get_ui(p.get_mpz_t());
        Poly<K> u(k);
        for (size_t i = 0; i < f.c.size(); i += pl)
            u.c.push_back(f.c[i]);
        u.trim();
        return poly_radical(u);
    }
    Poly<K> g = poly_gcd(f, d);
    if (g.degree() == 0)
        return f;
    Poly<K> w = poly_div_exact(f, g);
    Poly<K> r = poly_radical(g);
    Poly<K> common = poly_gcd(w, r);
    return poly_mul(poly_div_exact(w, common), r);
}

template <class K>
Int field_char(const K& k);

template <>
inline Int field_char<Fp64>(const Fp64& k) {
    return Int(static_cast<unsigned long>(k.modulus()));
}
template <>
inline Int field_char<FpZ>(const FpZ& k) {
    return k.modulus();
}

// splits g (a product of distinct monic linear factors) and collects roots;
// if single_random, only one randomly chosen branch is followed
template <class K>
void eds_linear(const Poly<K>& g, Rng& rng, bool single_random,
                std::vector<typename K::elem>& out) {
    const K& k = *g.k;
    if (g.degree() <= 0)
        return;
    if (g.degree() == 1) {
        out.push_back(k.neg(g.c[0]));
        return;
    }
    Int p = field_char(k);
    Int e = (p - 1) / 2;
    PolyModulus<K> gm(g);
    for (;;) {
        Poly<K> shift(k);
        shift.c = {k.random(rng), k.one()};
        Poly<K> t = gm.powmod(shift, e);
        if (t.is_zero()) // x+a was a root factor; t = 0 means (x+a)^e = 0 impossible unless deg issues
            continue;
        t.c.resize(std::max<size_t>(t.c.size(), 1), k.zero());
        t.c[0] = k.sub(t.c[0], k.one());
        t.trim();
        Poly<K> d = poly_gcd(t, g);
        if (d.degree() <= 0 || d.degree() == g.degree())
            continue;
        Poly<K> other = poly_div_exact(g, d);
        if (single_random) {
            eds_linear(rng.next() & 1 ? d : other, rng, true, out);
        } else {
            eds_linear(d, rng, false, out);
            eds_linear(other, rng, false, out);
        }
        return;
    }
}

} // namespace detail

// g = gcd(x^p - x, f): the product of the distinct linear factors of f.
template <class K>
Poly<K> linear_factor_part(const Poly<K>& f) {
    const K& k = *f.k;
    Poly<K> fm = poly_make_monic(f);
    if (fm.degree() <= 1)
        return fm;
    PolyModulus<K> fmod(fm);
    Poly<K> xp = fmod.powmod(poly_x(k), detail::field_char(k));
    Poly<K> t = poly_sub(xp, poly_x(k));
    return poly_gcd(t, fm);
}

// One root of f in the field, or nullopt. Uniform-ish among the roots under
// the seed via random equal-degree splitting descent.
template <class K>
std::optional<typename K::elem> find_root(const Poly<K>& f, uint64_t rng_seed) {
    const K& k = *f.k;
    if (f.is_zero())
        throw Error("find_root: zero polynomial");
    if (f.degree() == 0)
        return std::nullopt;
    Rng rng(Rng::derive(rng_seed, 0xf00d));
    Int p = detail::field_char(k);
    if (p == 2) {
        for (unsigned long v = 0; v < 2; ++v) {
            auto x = k.from_int(Int(v));
            if (k.is_zero(poly_eval(f, x)))
                return x;
        }
        return std::nullopt;
    }
    Poly<K> g = linear_factor_part(f);
    if (g.degree() <= 0)
        return std::nullopt;
    std::vector<typename K::elem> out;
    detail::eds_linear(g, rng, true, out);
    return out[0];
}

// All distinct roots, sorted by canonical integer value.
template <class K>
std::vector<typename K::elem> all_roots(const Poly<K>& f, uint64_t rng_seed) {
    const K& k = *f.k;
    std::vector<typename K::elem> out;
    if (f.is_zero() || f.degree() == 0)
        return out;
    Rng rng(Rng::derive(rng_seed, 0xbeef));
    Poly<K> g = linear_factor_part(f);
    if (g.degree() <= 0)
        return out;
    detail::eds_linear(g, rng, false, out);
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return k.to_int(a) < k.to_int(b);
    });
    return out;
}

// true iff f splits into linear factors over the field (multiplicities
// allowed; duplicate roots are handled via the radical).
template <class K>
bool split_check(const Poly<K>& f) {
    const K& k = *f.k;
    if (f.is_zero())
        throw Error("split_check: zero polynomial");
    if (f.degree() == 0)
        return true;
    Poly<K> sf = detail::poly_radical(f);
    Poly<K> g = linear_factor_part(sf);
    return g.degree() == sf.degree();
}

} // namespace cm

#endif
