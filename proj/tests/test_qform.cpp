#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "cm/qform.hpp"
#include "cm/rng.hpp"

using namespace cm;

namespace {

// independent order-counting oracle: counts reduced primitive forms by a
// direct (A, B) double loop written without the library types
long class_number_oracle(long d) {
    long absd = -d;
    long count = 0;
    for (long a = 1; 3 * a * a <= absd; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            if (((b * b - d) % (4 * a)) != 0)
                continue;
            long c = (b * b - d) / (4 * a);
            if (c < a)
                continue;
            if (a == c && b < 0)
                continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1)
                continue;
            ++count;
        }
    }
    return count;
}

} // namespace

TEST_CASE("principal forms") {
    CHECK(principal_form(Discriminant(Int(-971))) == Form{1, 1, 243});
    CHECK(principal_form(Discriminant(Int(-4))) == Form{1, 0, 1});
    CHECK(principal_form(Discriminant(Int(-23))) == Form{1, 1, 6});
}

TEST_CASE("reduce") {
    CHECK(reduce(Form{15, 13, 19}) == Form{15, 13, 19}); // already reduced
    CHECK(reduce(Form{243, -1, 1}) == Form{1, 1, 243});
    // idempotence on every reduced form of a few discriminants
    for (long d : {-971L, -23L, -4L, -499L}) {
        long m = ((d % 4) + 4) % 4;
        if (m != 0 && m != 1)
            continue;
        for (const Form& f : enumerate_reduced(Discriminant(Int(d)))) {
            CHECK(is_reduced(f));
            CHECK(reduce(f) == f);
            CHECK(f.discriminant() == d);
        }
    }
}

TEST_CASE("compose laws") {
    Discriminant D(Int(-971));
    Form one = principal_form(D);
    auto forms = enumerate_reduced(D);
    for (const Form& f : forms) {
        CHECK(compose(one, f) == f);
        CHECK(compose(f, inverse(f)) == one);
    }
    // commutativity and associativity, exhaustively at this size
    for (const Form& f : forms)
        for (const Form& g : forms)
            CHECK(compose(f, g) == compose(g, f));
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const Form& f = forms[rng.below(forms.size())];
        const Form& g = forms[rng.below(forms.size())];
        const Form& h = forms[rng.below(forms.size())];
        CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
    }
}

TEST_CASE("prime form powers land per the presentation") {
    Discriminant D(Int(-971));
    auto p3 = prime_form(D, 3);
    REQUIRE(p3.has_value());
    CHECK(*p3 == reduce(Form{3, 1, 81}));
    // [l_3] has order 5 = r_1
    CHECK(form_pow(*p3, 5).is_principal());
    CHECK_FALSE(form_pow(*p3, 1).is_principal());
    CHECK_FALSE(form_pow(*p3, 2).is_principal());
    CHECK_FALSE(form_pow(*p3, 3).is_principal());
    CHECK_FALSE(form_pow(*p3, 4).is_principal());

    auto p5 = prime_form(D, 5);
    REQUIRE(p5.has_value());
    CHECK(p5->a == 5);
    CHECK(p5->discriminant() == -971);
}

TEST_CASE("prime_form inert gives nothing") {
    // kronecker(-971, 17): 17 inert?
    Discriminant D(Int(-971));
    int found = 0, none = 0;
    for (long l : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L}) {
        auto f = prime_form(D, Int(l));
        if (f) {
            ++found;
            CHECK(f->discriminant() == -971);
        } else {
            ++none;
            // inert: B^2 ≡ D mod 4l has no solution
            bool any = false;
            for (long b = 0; b < 2 * l; ++b)
                if (((b * b + 971) % (4 * l)) == 0)
                    any = true;
            CHECK_FALSE(any);
        }
    }
    CHECK(found > 0);
    CHECK(none > 0);
}

TEST_CASE("enumerate_reduced counts") {
    CHECK(enumerate_reduced(Discriminant(Int(-971))).size() == 15);
    CHECK(enumerate_reduced(Discriminant(Int(-23))).size() == 3);
    CHECK(enumerate_reduced(Discriminant(Int(-3))).size() == 1);
    CHECK_THROWS_AS(enumerate_reduced(Discriminant(Int("-100000000000004")), Int("10000000000")),
                    LimitExceeded);
}

TEST_CASE("class numbers agree with the oracle for fundamental |D| <= 2000") {
    for (long d = -3; d >= -2000; --d) {
        long m = ((d % 4) + 4) % 4;
        if (m != 0 && m != 1)
            continue;
        Discriminant D((Int(d)));
        if (conductor(D) != 1)
            continue;
        auto forms = enumerate_reduced(D);
        CHECK((long)forms.size() == class_number_oracle(d));
        std::set<Form> uniq(forms.begin(), forms.end());
        CHECK(uniq.size() == forms.size());
        for (const Form& f : forms) {
            CHECK(is_reduced(f));
            CHECK(f.discriminant() == d);
            CHECK(gcd(gcd(f.a, f.b), f.c) == 1);
        }
    }
}

TEST_CASE("non-fundamental discriminants are supported") {
    Discriminant D(Int(-12)); // conductor 2 over -3
    CHECK(conductor(D) == 2);
    CHECK(enumerate_reduced(D).size() == 1);
    Discriminant D2(Int(-99)); // conductor 3 over -11
    CHECK(conductor(D2) == 3);
    auto forms = enumerate_reduced(D2);
    CHECK(forms.size() == 2);
    // prime form at the conductor prime is refused
    CHECK_FALSE(prime_form(D2, 3).has_value());
}

TEST_CASE("discriminant validation") {
    CHECK_THROWS_AS(Discriminant(Int(5)), Error);
    CHECK_THROWS_AS(Discriminant(Int(-5)), Error); // -5 ≡ 3 mod 4
    CHECK_NOTHROW(Discriminant(Int(-4)));
    CHECK_NOTHROW(Discriminant(Int(-971)));
}
