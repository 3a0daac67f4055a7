#include "cm/curve64.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cm/errors.hpp"
#include "cm/normprimes.hpp"

namespace cm {

Curve64 curve_from_j64(const Fp64& k, uint64_t j_mont) {
    uint64_t j1728 = k.to_mont(1728 % k.modulus());
    if (k.is_zero(j_mont))
        return Curve64{&k, 0, k.one()};
    if (k.eq(j_mont, j1728))
        return Curve64{&k, k.one(), 0};
    uint64_t d = k.sub(j1728, j_mont);
    uint64_t jd = k.mul(j_mont, d);
    uint64_t a = k.mul(k.three(), jd);
    uint64_t b = k.mul(k.two(), k.mul(jd, d));
    return Curve64{&k, a, b};
}

Curve64 twist64(const Curve64& E) {
    const Fp64& k = *E.k;
    uint64_t g = 2;
    while (k.jacobi_plain(g) != -1)
        ++g;
    uint64_t gm = k.to_mont(g);
    uint64_t g2 = k.sqr(gm);
    return Curve64{&k, k.mul(E.a, g2), k.mul(E.b, k.mul(g2, gm))};
}

uint64_t j_invariant64(const Curve64& E) {
    const Fp64& k = *E.k;
    uint64_t a3 = k.mul(k.mul(E.a, E.a), E.a);
    uint64_t b2 = k.mul(E.b, E.b);
    uint64_t num = k.mul(k.to_mont(6912 % k.modulus()), a3); // 1728 * 4a^3
    uint64_t den = k.add(k.mul(k.to_mont(4), a3), k.mul(k.to_mont(27), b2));
    return k.mul(num, k.inv(den));
}

Point64 point_dbl(const Curve64& E, const Point64& P) {
    const Fp64& k = *E.k;
    if (P.is_zero() || k.is_zero(P.y))
        return Point64{k.one(), k.one(), 0};
    uint64_t ysq = k.sqr(P.y);
    uint64_t s = k.mul(k.four(), k.mul(P.x, ysq));
    uint64_t z2 = k.sqr(P.z);
    uint64_t m = k.add(k.mul(k.three(), k.sqr(P.x)), k.mul(E.a, k.sqr(z2)));
    uint64_t x3 = k.sub(k.sqr(m), k.add(s, s));
    uint64_t y3 = k.sub(k.mul(m, k.sub(s, x3)), k.mul(k.eight(), k.sqr(ysq)));
    uint64_t z3 = k.mul(k.add(P.y, P.y), P.z);
    return Point64{x3, y3, z3};
}

Point64 point_add(const Curve64& E, const Point64& P, const Point64& Q) {
    const Fp64& k = *E.k;
    if (P.is_zero())
        return Q;
    if (Q.is_zero())
        return P;
    uint64_t z1sq = k.sqr(P.z), z2sq = k.sqr(Q.z);
    uint64_t u1 = k.mul(P.x, z2sq), u2 = k.mul(Q.x, z1sq);
    uint64_t s1 = k.mul(P.y, k.mul(z2sq, Q.z));
    uint64_t s2 = k.mul(Q.y, k.mul(z1sq, P.z));
    if (k.eq(u1, u2)) {
        if (!k.eq(s1, s2))
            return Point64{k.one(), k.one(), 0};
        return point_dbl(E, P);
    }
    uint64_t h = k.sub(u2, u1);
    uint64_t r = k.sub(s2, s1);
    uint64_t h2 = k.sqr(h), h3 = k.mul(h2, h);
    uint64_t u1h2 = k.mul(u1, h2);
    uint64_t x3 = k.sub(k.sub(k.sqr(r), h3), k.add(u1h2, u1h2));
    uint64_t y3 = k.sub(k.mul(r, k.sub(u1h2, x3)), k.mul(s1, h3));
    uint64_t z3 = k.mul(h, k.mul(P.z, Q.z));
    return Point64{x3, y3, z3};
}

Point64 point_mul(const Curve64& E, const Point64& P, uint64_t n) {
    Point64 r{E.k->one(), E.k->one(), 0};
    Point64 base = P;
    while (n) {
        if (n & 1)
            r = point_add(E, r, base);
        base = point_dbl(E, base);
        n >>= 1;
    }
    return r;
}

bool point_eq(const Curve64& E, const Point64& P, const Point64& Q) {
    const Fp64& k = *E.k;
    if (P.is_zero() || Q.is_zero())
        return P.is_zero() == Q.is_zero();
    uint64_t z1sq = k.sqr(P.z), z2sq = k.sqr(Q.z);
    if (!k.eq(k.mul(P.x, z2sq), k.mul(Q.x, z1sq)))
        return false;
    return k.eq(k.mul(P.y, k.mul(z2sq, Q.z)), k.mul(Q.y, k.mul(z1sq, P.z)));
}

Point64 random_point(const Curve64& E, Rng& rng) {
    const Fp64& k = *E.k;
    for (;;) {
        uint64_t x = k.random(rng);
        uint64_t rhs = k.add(k.mul(k.add(k.sqr(x), E.a), x), E.b);
        uint64_t y;
        if (!k.sqrt(rhs, y))
            continue;
        return Point64{x, y, k.one()};
    }
}

namespace {

// x-only arithmetic on XZ coordinates (Brier-Joye)
struct XZ {
    uint64_t x, z;
};

XZ xz_dbl(const Curve64& E, const XZ& P) {
    const Fp64& k = *E.k;
    uint64_t xx = k.sqr(P.x), zz = k.sqr(P.z);
    uint64_t azz = k.mul(E.a, zz);
    uint64_t t = k.sub(xx, azz);
    uint64_t bzz = k.mul(E.b, zz);
    uint64_t xz = k.mul(P.x, P.z);
    // X2 = (x^2 - a z^2)^2 - 8 b x z^3
    uint64_t x2 = k.sub(k.sqr(t), k.mul(k.eight(), k.mul(bzz, xz)));
    // Z2 = 4 z (x (x^2 + a z^2) + b z^3)
    uint64_t inner = k.add(k.mul(P.x, k.add(xx, azz)), k.mul(bzz, P.z));
    uint64_t z2 = k.mul(k.four(), k.mul(P.z, inner));
    return XZ{x2, z2};
}

// x(P+Q) given x(P), x(Q), and the affine difference x(P-Q) = xd
XZ xz_dadd(const Curve64& E, const XZ& P, const XZ& Q, uint64_t xd) {
    const Fp64& k = *E.k;
    uint64_t xpzq = k.mul(P.x, Q.z), xqzp = k.mul(Q.x, P.z);
    uint64_t zpzq = k.mul(P.z, Q.z);
    uint64_t xpxq = k.mul(P.x, Q.x);
    uint64_t cross = k.add(xpzq, xqzp);
    uint64_t t1 = k.mul(cross, k.add(xpxq, k.mul(E.a, zpzq)));
    uint64_t t2 = k.mul(k.mul(k.two(), E.b), k.sqr(zpzq));
    uint64_t diff = k.sub(xpzq, xqzp);
    uint64_t z3 = k.sqr(diff);
    uint64_t x3 = k.sub(k.mul(k.two(), k.add(t1, t2)), k.mul(xd, z3));
    return XZ{x3, z3};
}

XZ xz_ladder(const Curve64& E, uint64_t xa, uint64_t n) {
    const Fp64& k = *E.k;
    if (n == 0)
        return XZ{k.one(), 0};
    XZ r0{xa, k.one()};
    XZ r1 = xz_dbl(E, r0);
    int bits = 63;
    while (bits > 0 && !((n >> bits) & 1))
        --bits;
    for (int i = bits - 1; i >= 0; --i) {
        if ((n >> i) & 1) {
            r0 = xz_dadd(E, r1, r0, xa);
            r1 = xz_dbl(E, r1);
        } else {
            r1 = xz_dadd(E, r0, r1, xa);
            r0 = xz_dbl(E, r0);
        }
    }
    return r0;
}

} // namespace

bool xonly_trace_probe(const Curve64& E, uint64_t x_mont, uint64_t t) {
    const Fp64& k = *E.k;
    uint64_t p = k.modulus();
    XZ u = xz_ladder(E, x_mont, p + 1);
    XZ w = xz_ladder(E, x_mont, t);
    if (k.is_zero(u.z) || k.is_zero(w.z))
        return k.is_zero(u.z) && k.is_zero(w.z);
    return k.eq(k.mul(u.x, w.z), k.mul(w.x, u.z));
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)(((unsigned __int128)a * b) % m);
}

uint64_t pollard_brent(uint64_t n, Rng& rng) {
    if ((n & 1) == 0)
        return 2;
    for (;;) {
        uint64_t y = rng.below(n - 2) + 1, c = rng.below(n - 2) + 1, m = 128;
        uint64_t g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i)
                y = (mulmod_u64(y, y, n) + c) % n;
            for (uint64_t j = 0; j < r && g == 1; j += m) {
                ys = y;
                uint64_t lim = std::min(m, r - j);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            do {
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

// multiples of L inside the Hasse interval [p+1-2sqrt(p), p+1+2sqrt(p)]
std::vector<uint64_t> hasse_multiples(uint64_t p, uint64_t L) {
    long double sp = sqrtl((long double)p);
    uint64_t lo = (uint64_t)ceill((long double)p + 1 - 2 * sp);
    uint64_t hi = (uint64_t)floorl((long double)p + 1 + 2 * sp);
    std::vector<uint64_t> out;
    uint64_t first = ((lo + L - 1) / L) * L;
    for (uint64_t m = first; m <= hi; m += L)
        out.push_back(m);
    return out;
}

} // namespace

std::map<uint64_t, unsigned> factor_u64(uint64_t n) {
    std::map<uint64_t, unsigned> out;
    if (n == 0)
        throw Error("factor_u64: zero");
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                       31ULL, 37ULL, 41ULL, 43ULL, 47ULL}) {
        while (n % p == 0) {
            out[p]++;
            n /= p;
        }
    }
    if (n == 1)
        return out;
    Rng rng(0x5eed1234);
    std::vector<uint64_t> stack{n};
    while (!stack.empty()) {
        uint64_t m = stack.back();
        stack.pop_back();
        if (m == 1)
            continue;
        if (is_prime_u64(m)) {
            out[m]++;
            continue;
        }
        uint64_t d = pollard_brent(m, rng);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return out;
}

uint64_t point_order(const Curve64& E, const Point64& P, uint64_t M,
                     const std::map<uint64_t, unsigned>& M_fact) {
    if (!point_mul(E, P, M).is_zero())
        throw Error("point_order: M is not a multiple of ord(P)");
    uint64_t ord = M;
    for (const auto& [p, e] : M_fact) {
        for (unsigned i = 0; i < e; ++i) {
            uint64_t t = ord / p;
            if (point_mul(E, P, t).is_zero())
                ord = t;
            else
                break;
        }
    }
    return ord;
}

uint64_t count_points_naive(const Curve64& E) {
    const Fp64& k = *E.k;
    uint64_t p = k.modulus();
    uint64_t count = 1; // infinity
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t xm = k.to_mont(x);
        uint64_t rhs = k.add(k.mul(k.add(k.sqr(xm), E.a), xm), E.b);
        if (k.is_zero(rhs))
            count += 1;
        else if (k.jacobi_plain(k.from_mont(rhs)) == 1)
            count += 2;
    }
    return count;
}

bool curve_order_matches(const Curve64& E, uint64_t N, uint64_t seed) {
    const Fp64& k = *E.k;
    uint64_t p = k.modulus();
    {
        auto any = hasse_multiples(p, 1);
        if (N < any.front() || N > any.back())
            return false;
    }
    if (E.singular())
        throw Error("curve_order_matches: singular curve");
    Rng rng(Rng::derive(seed, 0x0bdeULL));
    auto nf = factor_u64(N);
    uint64_t L = 1;
    for (int iter = 0; iter < 96; ++iter) {
        Point64 P = random_point(E, rng);
        if (!point_mul(E, P, N).is_zero())
            return false;
        uint64_t o = point_order(E, P, N, nf);
        L = std::lcm(L, o);
        auto mult = hasse_multiples(p, L);
        if (mult.size() == 1)
            return mult[0] == N;
    }
    if (p < (1ULL << 22))
        return count_points_naive(E) == N;
    throw Error("curve_order_matches: could not certify the order");
}

std::optional<uint64_t> curve_order_of_pair(const Curve64& E, uint64_t N1, uint64_t N2,
                                            uint64_t seed) {
    Rng rng(Rng::derive(seed, 0x9a12ULL));
    for (int iter = 0; iter < 64; ++iter) {
        Point64 P = random_point(E, rng);
        bool z1 = point_mul(E, P, N1).is_zero();
        bool z2 = point_mul(E, P, N2).is_zero();
        if (z1 && !z2)
            return N1;
        if (z2 && !z1)
            return N2;
        if (!z1 && !z2)
            return std::nullopt; // neither order fits
    }
    return std::nullopt;
}

} // namespace cm
