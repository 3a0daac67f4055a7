#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cm/arith.hpp"
#include "cm/rng.hpp"

using namespace cm;

TEST_CASE("mod_inv basics") {
    CHECK(mod_inv(Residue(2, 5)).value() == 3);
    CHECK(mod_inv(Residue(1, 7919)).value() == 1);
    // extended-Euclid oracle for (263 mod 1029167)
    Residue a(263, 1029167);
    Residue x = mod_inv(a);
    CHECK((x * a).value() == 1);
    {
        // independent oracle: brute extended Euclid on int64
        long t = 0, newt = 1, r = 1029167, newr = 263;
        while (newr) {
            long q = r / newr;
            std::swap(t -= q * newt, newt);
            std::swap(r -= q * newr, newr);
        }
        if (t < 0)
            t += 1029167;
        CHECK(x.value() == Int(t));
    }
    CHECK_THROWS_AS(mod_inv(Residue(6, 9)), NotInvertible);
}

TEST_CASE("mod_inv random property") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        Int m = Int(rng.below(1 << 30) + 2);
        Int a = Int(rng.below(1 << 30) + 1);
        if (gcd(a, m) != 1)
            continue;
        Residue r(a, m);
        CHECK((mod_inv(r) * r).value() == 1);
    }
}

TEST_CASE("is_prime examples") {
    CHECK(is_prime(263));
    CHECK(is_prime(1029167));
    CHECK_FALSE(is_prime(561)); // 3 * 11 * 17
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(0));
    CHECK(is_prime(2));
    // a couple of larger Carmichael-style composites
    CHECK_FALSE(is_prime(Int("341550071728321"))); // strong pseudoprime to 2..17
    CHECK(is_prime(Int("170141183460469231731687303715884105727"))); // 2^127 - 1
    CHECK_FALSE(is_prime(Int("170141183460469231731687303715884105725")));
}

TEST_CASE("is_prime agrees with a sieve below 10^6") {
    const int N = 1000000;
    std::vector<bool> comp(N, false);
    for (int i = 2; (long long)i * i < N; ++i)
        if (!comp[i])
            for (int j = i * i; j < N; j += i)
                comp[j] = true;
    for (int n = 0; n < N; ++n) {
        bool expect = n >= 2 && !comp[n];
        if (is_prime(n) != expect) {
            CAPTURE(n);
            CHECK(is_prime(n) == expect);
        }
    }
}

TEST_CASE("fixed point rounding") {
    FixedPoint fp;
    fp.add_ratio(1, 4);
    fp.add_ratio(1, 4);
    fp.add_ratio(1, 2);
    CHECK(fp.round_nearest() == 1);

    FixedPoint z;
    z.add_ratio(0, 97);
    CHECK(z.round_nearest() == 0);
    CHECK(z.scaled() == 0);
}

TEST_CASE("fixed point error bound against exact rationals") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        FixedPoint fp;
        mpq_class exact(0);
        int n = 1 + (int)rng.below(40);
        for (int i = 0; i < n; ++i) {
            Int num(rng.below(1 << 20));
            Int den(rng.below(1 << 20) + 1);
            fp.add_ratio(num, den);
            exact += mpq_class(num) / mpq_class(den);
        }
        // |value - exact| < n * 2^-fracbits
        mpq_class val(fp.scaled());
        mpq_class scale(Int(1) << FixedPoint::fracbits);
        val /= scale;
        mpq_class err = abs(val - exact);
        mpq_class bound = mpq_class(n) / scale;
        CHECK(err < bound);
    }
}

TEST_CASE("fixed point addition is exact (order independent)") {
    std::vector<std::pair<Int, Int>> terms;
    Rng rng(1234);
    for (int i = 0; i < 25; ++i)
        terms.emplace_back(Int(rng.below(1000)), Int(rng.below(1000) + 1));
    FixedPoint a, b;
    for (const auto& [n, d] : terms)
        a.add_ratio(n, d);
    for (auto it = terms.rbegin(); it != terms.rend(); ++it)
        b.add_ratio(it->first, it->second);
    CHECK(a.scaled() == b.scaled());
}
