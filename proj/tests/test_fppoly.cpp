#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "cm/fppoly.hpp"

using namespace cm;

namespace {

Poly<Fp64> mk64(const Fp64& k, std::initializer_list<uint64_t> low_to_high) {
    Poly<Fp64> p(k);
    for (uint64_t c : low_to_high)
        p.c.push_back(k.to_mont(c));
    p.trim();
    return p;
}

std::vector<uint64_t> plain(const Fp64& k, const Poly<Fp64>& p) {
    std::vector<uint64_t> out;
    for (auto c : p.c)
        out.push_back(k.from_mont(c));
    return out;
}

} // namespace

TEST_CASE("poly_from_roots matches the worked example mod 263") {
    Fp64 k(263);
    std::vector<uint64_t> ys = {k.to_mont(232), k.to_mont(87), k.to_mont(205)};
    auto V = poly_from_roots(k, ys);
    CHECK(plain(k, V) == std::vector<uint64_t>{59, 104, 2, 1});

    std::vector<uint64_t> orbit;
    for (uint64_t j : {252, 38, 151, 121, 258})
        orbit.push_back(k.to_mont(j));
    auto P1 = poly_from_roots(k, orbit);
    CHECK(plain(k, P1) == std::vector<uint64_t>{158, 208, 159, 32, 232, 1});

    auto empty = poly_from_roots(k, {});
    CHECK(empty.degree() == 0);
    CHECK(k.from_mont(empty.c[0]) == 1);
}

TEST_CASE("poly_from_roots vanishes on its roots") {
    Fp64 k(10007);
    Rng rng(5);
    std::vector<uint64_t> roots;
    for (int i = 0; i < 40; ++i)
        roots.push_back(k.random(rng));
    auto f = poly_from_roots(k, roots);
    CHECK(f.degree() == 40);
    CHECK(f.is_monic());
    for (auto r : roots)
        CHECK(k.is_zero(poly_eval(f, r)));
}

TEST_CASE("hecke_combine reproduces the W_k displays") {
    Fp64 k(263);
    std::vector<uint64_t> ys = {k.to_mont(232), k.to_mont(87), k.to_mont(205)};
    auto V = poly_from_roots(k, ys);
    auto W0 = hecke_combine(k, {k.to_mont(158), k.to_mont(21), k.to_mont(116)}, ys, V);
    CHECK(plain(k, W0) == std::vector<uint64_t>{152, 259, 32});
    auto W3 = hecke_combine(k, {k.to_mont(32), k.to_mont(252), k.to_mont(86)}, ys, V);
    CHECK(plain(k, W3) == std::vector<uint64_t>{244, 115, 107});
}

TEST_CASE("hecke_combine single point") {
    Fp64 k(101);
    std::vector<uint64_t> ys = {k.to_mont(7)};
    auto V = poly_from_roots(k, ys);
    auto W = hecke_combine(k, {k.to_mont(42)}, ys, V);
    CHECK(W.degree() == 0);
    CHECK(k.from_mont(W.c[0]) == 42);
}

TEST_CASE("hecke_combine rejects duplicate ys") {
    Fp64 k(101);
    std::vector<uint64_t> ys = {k.to_mont(7), k.to_mont(7)};
    auto V = poly_from_roots(k, ys);
    CHECK_THROWS_AS(hecke_combine(k, {k.one(), k.one()}, ys, V), DuplicateRoots);
}

TEST_CASE("hecke identity W(y_i) = theta_i V'(y_i)") {
    Fp64 k(997);
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        size_t m = 1 + rng.below(8);
        std::set<uint64_t> used;
        std::vector<uint64_t> ys, th;
        while (ys.size() < m) {
            uint64_t y = k.random(rng);
            if (used.insert(y).second)
                ys.push_back(y);
        }
        for (size_t i = 0; i < m; ++i)
            th.push_back(k.random(rng));
        auto V = poly_from_roots(k, ys);
        auto W = hecke_combine(k, th, ys, V);
        CHECK(W.degree() < (long)m);
        auto Vd = poly_derivative(V);
        for (size_t i = 0; i < m; ++i)
            CHECK(k.eq(poly_eval(W, ys[i]), k.mul(th[i], poly_eval(Vd, ys[i]))));
    }
}

TEST_CASE("find_root on the worked V mod q") {
    FpZ k(Int(1029167));
    Poly<FpZ> V(k, {Int(760884), Int(829791), Int(947907), Int(1)});
    std::set<Int> expected{Int(336976), Int(898530), Int(904088)};
    std::set<Int> seen;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        auto r = find_root(V, seed);
        REQUIRE(r.has_value());
        CHECK(k.is_zero(poly_eval(V, *r)));
        CHECK(expected.count(*r) == 1);
        seen.insert(*r);
    }
    CHECK(seen == expected);
}

TEST_CASE("find_root simple cases") {
    FpZ k7(Int(7));
    Poly<FpZ> f(k7, {Int(-5), Int(1)});
    auto r = find_root(f, 3);
    REQUIRE(r.has_value());
    CHECK(*r == 5);

    FpZ k3(Int(3));
    Poly<FpZ> g(k3, {Int(1), Int(0), Int(1)}); // X^2 + 1, irreducible mod 3
    CHECK_FALSE(find_root(g, 3).has_value());
}

TEST_CASE("split_check") {
    FpZ kq(Int(1029167));
    Poly<FpZ> V(kq, {Int(760884), Int(829791), Int(947907), Int(1)});
    CHECK(split_check(V));

    FpZ k3(Int(3));
    CHECK_FALSE(split_check(Poly<FpZ>(k3, {Int(1), Int(0), Int(1)})));

    FpZ k5(Int(5));
    CHECK(split_check(Poly<FpZ>(k5, {Int(0), Int(0), Int(1)}))); // X^2 = (X-0)^2
}

TEST_CASE("split_check agrees with exhaustive root counting") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        uint64_t ps[] = {3, 5, 7, 11, 13, 97};
        uint64_t p = ps[rng.below(6)];
        Fp64 k(p);
        size_t deg = 1 + rng.below(8);
        Poly<Fp64> f(k);
        f.c.assign(deg + 1, 0);
        f.c[deg] = k.one();
        for (size_t i = 0; i < deg; ++i)
            f.c[i] = k.random(rng);
        // exhaustive: f splits iff it equals prod (X - r)^{m_r}
        // count roots with multiplicity by repeated synthetic division
        Poly<Fp64> g = f;
        size_t linear = 0;
        for (uint64_t r = 0; r < p; ++r) {
            uint64_t rm = k.to_mont(r);
            while (g.degree() > 0 && k.is_zero(poly_eval(g, rm))) {
                Poly<Fp64> lin(k);
                lin.c = {k.neg(rm), k.one()};
                g = poly_div_exact(g, lin);
                ++linear;
            }
        }
        bool expect = linear == deg;
        CHECK(split_check(f) == expect);
    }
}

TEST_CASE("complements: worked example and properties") {
    Fp64 k(263);
    std::vector<uint64_t> ys = {k.to_mont(232), k.to_mont(87), k.to_mont(205)};
    auto zs = complements(k, k.to_mont(73), ys);
    CHECK(plain(k, Poly<Fp64>(k, zs)) == std::vector<uint64_t>{7, 211, 122});

    // z equal to one of the ys: that complement is nonzero, the other zero
    std::vector<uint64_t> two = {k.to_mont(10), k.to_mont(20)};
    auto z2 = complements(k, k.to_mont(10), two);
    CHECK_FALSE(k.is_zero(z2[0]));
    CHECK(k.is_zero(z2[1]));

    auto z1 = complements(k, k.to_mont(5), {k.to_mont(99)});
    CHECK(k.eq(z1[0], k.one()));

    // complement identity: z_i * (z - y_i) = prod (z - y_j)
    Rng rng(31);
    Fp64 kp(997);
    std::vector<uint64_t> many;
    for (int i = 0; i < 9; ++i)
        many.push_back(kp.random(rng));
    uint64_t z = kp.random(rng);
    auto comp = complements(kp, z, many);
    uint64_t full = kp.one();
    for (auto y : many)
        full = kp.mul(full, kp.sub(z, y));
    for (size_t i = 0; i < many.size(); ++i)
        CHECK(kp.eq(kp.mul(comp[i], kp.sub(z, many[i])), full));
}

TEST_CASE("multiplication: kronecker vs schoolbook") {
    Rng rng(41);
    Fp64 k((1ULL << 61) - 1); // large modulus exercises wide strides
    for (int trial = 0; trial < 10; ++trial) {
        size_t na = 30 + rng.below(90), nb = 30 + rng.below(90);
        Poly<Fp64> a(k), b(k);
        for (size_t i = 0; i < na; ++i)
            a.c.push_back(k.random(rng));
        for (size_t i = 0; i < nb; ++i)
            b.c.push_back(k.random(rng));
        a.trim();
        b.trim();
        CHECK(detail::mul_schoolbook(a, b) == detail::mul_kronecker(a, b));
    }
    FpZ kq(Int("268435459")); // 2^28 + 3
    for (int trial = 0; trial < 6; ++trial) {
        Poly<FpZ> a(kq), b(kq);
        for (size_t i = 0; i < 40 + rng.below(30); ++i)
            a.c.push_back(kq.random(rng));
        for (size_t i = 0; i < 40 + rng.below(30); ++i)
            b.c.push_back(kq.random(rng));
        a.trim();
        b.trim();
        CHECK(detail::mul_schoolbook(a, b) == detail::mul_kronecker(a, b));
    }
}

TEST_CASE("divrem and gcd") {
    Fp64 k(10007);
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        size_t na = 1 + rng.below(120), nb = 1 + rng.below(60);
        Poly<Fp64> a(k), b(k);
        for (size_t i = 0; i < na; ++i)
            a.c.push_back(k.random(rng));
        for (size_t i = 0; i < nb; ++i)
            b.c.push_back(k.random(rng));
        a.trim();
        b.trim();
        if (b.is_zero())
            continue;
        Poly<Fp64> q, r;
        poly_divrem(a, b, q, r);
        CHECK(r.degree() < b.degree());
        CHECK(poly_add(poly_mul(q, b), r) == a);
    }
    // gcd of products shares the common factor
    Poly<Fp64> f = poly_from_roots(k, {k.to_mont(3), k.to_mont(5), k.to_mont(11)});
    Poly<Fp64> g = poly_from_roots(k, {k.to_mont(5), k.to_mont(11), k.to_mont(17)});
    Poly<Fp64> d = poly_gcd(f, g);
    CHECK(d == poly_from_roots(k, {k.to_mont(5), k.to_mont(11)}));
}

TEST_CASE("derivative and evaluate") {
    Fp64 k(101);
    auto f = mk64(k, {7, 0, 5, 2}); // 2x^3 + 5x^2 + 7
    auto d = poly_derivative(f);
    CHECK(plain(k, d) == std::vector<uint64_t>{0, 10, 6});
    CHECK(k.from_mont(poly_eval(f, k.to_mont(3))) == (2 * 27 + 5 * 9 + 7) % 101);
}

TEST_CASE("powmod via PolyModulus") {
    Fp64 k(263);
    // x^263 mod (x^2 - 1) = x (Fermat on each factor)
    Poly<Fp64> f = mk64(k, {262, 0, 1});
    PolyModulus<Fp64> fm(f);
    auto xp = fm.powmod(poly_x(k), Int(263));
    CHECK(plain(k, xp) == std::vector<uint64_t>{0, 1});
}
