#ifndef CM_CURVEZ_HPP
#define CM_CURVEZ_HPP

#include "cm/arith.hpp"
#include "cm/errors.hpp"
#include "cm/fpz.hpp"
#include "cm/normprimes.hpp"
#include "cm/rng.hpp"

namespace cm {

// y^2 = x^3 + ax + b over the big prime field
struct CurveZ {
    const FpZ* k = nullptr;
    Int a, b;

    bool singular() const {
        Int d = 4 * a * a * a + 27 * b * b;
        return mod_canonical(d, k->modulus()) == 0;
    }
};

struct PointZ {
    Int x, y, z; // Jacobian; z = 0 is infinity
    bool is_zero() const { return z == 0; }
};

inline PointZ pointz_dbl(const CurveZ& E, const PointZ& P) {
    const FpZ& k = *E.k;
    if (P.is_zero() || P.y == 0)
        return PointZ{Int(1), Int(1), Int(0)};
    Int ysq = k.sqr(P.y);
    Int s = k.mul(Int(4), k.mul(P.x, ysq));
    Int z2 = k.sqr(P.z);
    Int m = k.add(k.mul(Int(3), k.sqr(P.x)), k.mul(mod_canonical(E.a, k.modulus()), k.sqr(z2)));
    Int x3 = k.sub(k.sqr(m), k.add(s, s));
    Int y3 = k.sub(k.mul(m, k.sub(s, x3)), k.mul(Int(8), k.sqr(ysq)));
    Int z3 = k.mul(k.add(P.y, P.y), P.z);
    return PointZ{x3, y3, z3};
}

inline PointZ pointz_add(const CurveZ& E, const PointZ& P, const PointZ& Q) {
    const FpZ& k = *E.k;
    if (P.is_zero())
        return Q;
    if (Q.is_zero())
        return P;
    Int z1sq = k.sqr(P.z), z2sq = k.sqr(Q.z);
    Int u1 = k.mul(P.x, z2sq), u2 = k.mul(Q.x, z1sq);
    Int s1 = k.mul(P.y, k.mul(z2sq, Q.z));
    Int s2 = k.mul(Q.y, k.mul(z1sq, P.z));
    if (u1 == u2) {
        if (s1 != s2)
            return PointZ{Int(1), Int(1), Int(0)};
        return pointz_dbl(E, P);
    }
    Int h = k.sub(u2, u1);
    Int r = k.sub(s2, s1);
    Int h2 = k.sqr(h), h3 = k.mul(h2, h);
    Int u1h2 = k.mul(u1, h2);
    Int x3 = k.sub(k.sub(k.sqr(r), h3), k.add(u1h2, u1h2));
    Int y3 = k.sub(k.mul(r, k.sub(u1h2, x3)), k.mul(s1, h3));
    Int z3 = k.mul(h, k.mul(P.z, Q.z));
    return PointZ{x3, y3, z3};
}

inline PointZ pointz_mul(const CurveZ& E, const PointZ& P, const Int& n) {
    PointZ r{Int(1), Int(1), Int(0)};
    if (n == 0)
        return r;
    long bits = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2));
    for (long i = bits - 1; i >= 0; --i) {
        r = pointz_dbl(E, r);
        if (mpz_tstbit(n.get_mpz_t(), i))
            r = pointz_add(E, r, P);
    }
    return r;
}

inline PointZ random_pointz(const CurveZ& E, Rng& rng) {
    const FpZ& k = *E.k;
    for (;;) {
        Int x = k.random(rng);
        Int rhs = k.add(k.mul(k.add(k.sqr(x), mod_canonical(E.a, k.modulus())), x),
                        mod_canonical(E.b, k.modulus()));
        auto y = sqrt_mod(rhs, k.modulus());
        if (!y)
            continue;
        return PointZ{x, *y, Int(1)};
    }
}

} // namespace cm

#endif
