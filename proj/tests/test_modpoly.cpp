#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cm/modpoly.hpp"

using namespace cm;

TEST_CASE("Phi_2 matches the classical coefficients") {
    // X^3 + Y^3 - X^2 Y^2 + 1488(X^2 Y + X Y^2) - 162000(X^2 + Y^2)
    //   + 40773375 XY + 8748000000(X + Y) - 157464000000000
    auto M = ModPoly::compute(2);
    CHECK(M.coeff(3, 0) == 1);
    CHECK(M.coeff(2, 2) == -1);
    CHECK(M.coeff(2, 1) == 1488);
    CHECK(M.coeff(2, 0) == -162000);
    CHECK(M.coeff(1, 1) == 40773375);
    CHECK(M.coeff(1, 0) == Int("8748000000"));
    CHECK(M.coeff(0, 0) == Int("-157464000000000"));
    CHECK(M.coeff(3, 1) == 0);
    CHECK(M.coeff(3, 3) == 0);
}

TEST_CASE("Phi_3 spot values from the classical table") {
    auto M = ModPoly::compute(3);
    CHECK(M.coeff(4, 0) == 1);
    CHECK(M.coeff(3, 3) == -1);
    CHECK(M.coeff(3, 2) == 2232);
    CHECK(M.coeff(3, 1) == Int("-1069956"));
    CHECK(M.coeff(3, 0) == Int("36864000"));
    CHECK(M.coeff(2, 2) == Int("2587918086"));
    CHECK(M.coeff(2, 1) == Int("8900222976000"));
    CHECK(M.coeff(2, 0) == Int("452984832000000"));
    CHECK(M.coeff(1, 1) == Int("-770845966336000000"));
    CHECK(M.coeff(1, 0) == Int("1855425871872000000000"));
    CHECK(M.coeff(0, 0) == 0);
}

TEST_CASE("compute validates: symmetry, monicity, Kronecker for all bundled levels") {
    for (long ell : {2L, 3L, 5L, 7L, 11L, 13L}) {
        auto M = ModPoly::compute(ell);
        CHECK(M.level() == ell);
        CHECK_NOTHROW(M.validate());
        // degree law
        CHECK(M.coeff(ell + 1, 0) == 1);
        for (long j = 1; j <= ell + 1; ++j)
            CHECK(M.coeff(ell + 1, j) == 0);
    }
}

TEST_CASE("text round trip") {
    auto M = ModPoly::compute(3);
    std::istringstream is(M.to_text());
    auto M2 = ModPoly::parse(is);
    CHECK(M2.level() == 3);
    for (long i = 0; i <= 4; ++i)
        for (long j = 0; j <= 4; ++j)
            CHECK(M.coeff(i, j) == M2.coeff(i, j));
}

TEST_CASE("loader rejects malformed and invalid tables") {
    {
        std::istringstream is("level x");
        CHECK_THROWS_AS(ModPoly::parse(is), FormatError);
    }
    {
        std::istringstream is("hello 3");
        CHECK_THROWS_AS(ModPoly::parse(is), FormatError);
    }
    {
        // well-formed but asymmetric is unrepresentable (storage mirrors);
        // a wrong coefficient breaks the Kronecker congruence instead
        auto M = ModPoly::compute(2);
        std::string txt = M.to_text();
        // corrupt: change the [2,1] coefficient 1488 -> 1489
        auto pos = txt.find("[2,1] 1488");
        REQUIRE(pos != std::string::npos);
        txt.replace(pos, 10, "[2,1] 1489");
        std::istringstream is(txt);
        CHECK_THROWS_AS(ModPoly::parse(is), ValidationError);
    }
    {
        // non-monic leading monomial
        std::istringstream is("level 2\n[3,0] 2\n");
        CHECK_THROWS_AS(ModPoly::parse(is), ValidationError);
    }
    {
        // out-of-range monomial index
        std::istringstream is("level 2\n[5,0] 1\n");
        CHECK_THROWS_AS(ModPoly::parse(is), FormatError);
    }
}

TEST_CASE("bundled data files load and validate") {
    ModPoly M = ModPoly::load_file(std::string(CM_MODPOLY_DIR_FOR_TESTS) + "/phi_3.txt");
    CHECK(M.level() == 3);
    ModPoly M2 = ModPoly::load_file(std::string(CM_MODPOLY_DIR_FOR_TESTS) + "/phi_13.txt");
    CHECK(M2.level() == 13);
    // identical to a fresh computation
    auto F = ModPoly::compute(3);
    for (long i = 0; i <= 4; ++i)
        for (long j = 0; j <= 4; ++j)
            CHECK(M.coeff(i, j) == F.coeff(i, j));
}

TEST_CASE("evaluation mod p: Phi_3(252, X) over F_263") {
    auto M = ModPoly::compute(3);
    Fp64 k(263);
    auto tab = M.reduce64(k);
    auto f = modpoly_eval64(k, 3, tab, k.to_mont(252));
    CHECK(f.degree() == 4);
    auto roots = all_roots(f, 7);
    std::vector<uint64_t> plain;
    for (auto r : roots)
        plain.push_back(k.from_mont(r));
    CHECK(plain == std::vector<uint64_t>{38, 258});
}

TEST_CASE("j q-expansion leading terms") {
    auto jc = j_qexpansion(6);
    CHECK(jc[0] == 1);        // q^-1
    CHECK(jc[1] == 744);      // q^0
    CHECK(jc[2] == 196884);   // q^1
    CHECK(jc[3] == 21493760); // q^2
    CHECK(jc[4] == Int("864299970"));
    CHECK(jc[5] == Int("20245856256"));
    CHECK(jc[6] == Int("333202640600"));
}
