#include "doctest.h"
#include "idsum/rational.hpp"

#include <cstdint>

using namespace idsum;

TEST_SUITE("rational") {

TEST_CASE("construction reduces and normalizes the sign") {
    CHECK(Rat(6, 4) == Rat(3, 2));
    CHECK(Rat(3, -6) == Rat(-1, 2));
    CHECK(Rat(-3, -6) == Rat(1, 2));
    CHECK(Rat(0, 7) == Rat(0));
    CHECK(Rat(5).is_integer());
    CHECK_FALSE(Rat(5, 3).is_integer());
    CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}

TEST_CASE("field axioms on sampled values") {
    const Rat a(3, 7), b(-5, 11), c(13, 4);
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rat(0));
    CHECK(a * (Rat(1) / a) == Rat(1));
    CHECK(-(-a) == a);
    CHECK_THROWS_AS(a / Rat(0), std::domain_error);
}

TEST_CASE("comparison is exact") {
    CHECK(Rat(1, 3) < Rat(34, 100));
    CHECK_FALSE(Rat(34, 100) < Rat(1, 3));
    CHECK(Rat(-1, 2) < Rat(1, 1000000));
}

TEST_CASE("parse and str round-trip") {
    CHECK(Rat::parse("42") == Rat(42));
    CHECK(Rat::parse("-3/9") == Rat(-1, 3));
    CHECK(Rat(-1, 3).str() == "-1/3");
    CHECK(Rat(7).str() == "7");
    CHECK(Rat::parse(Rat(22, 7).str()) == Rat(22, 7));
}

TEST_CASE("overflow throws instead of wrapping") {
    const Rat big(INT64_MAX, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
    CHECK_THROWS_AS(big + big, std::overflow_error);
    CHECK_THROWS_AS(mul_check(INT64_MAX, 2), std::overflow_error);
    CHECK(mul_check(INT64_MAX, 1) == INT64_MAX);
}

TEST_CASE("bareiss determinant on integer matrices") {
    CHECK(bareiss_det({}) == 1);
    CHECK(bareiss_det({{5}}) == 5);
    CHECK(bareiss_det({{1, 2}, {3, 4}}) == -2);
    // rows swapped: sign flips
    CHECK(bareiss_det({{3, 4}, {1, 2}}) == 2);
    CHECK(bareiss_det({{2, 0, 1}, {1, 1, 0}, {0, 3, 4}}) == 11);
    // singular, including a zero pivot that needs the row search
    CHECK(bareiss_det({{0, 0}, {0, 0}}) == 0);
    CHECK(bareiss_det({{0, 1, 2}, {0, 2, 4}, {1, 0, 0}}) == 0);
}

TEST_CASE("rational determinant clears denominators first") {
    // 3x3 Hilbert matrix
    std::vector<std::vector<Rat>> h(3, std::vector<Rat>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h[i][j] = Rat(1, i + j + 1);
    CHECK(rat_det(h) == Rat(1, 2160));
    CHECK(rat_det({{Rat(1, 2), Rat(1, 3)}, {Rat(1, 4), Rat(1, 6)}}) == Rat(0));
}

TEST_CASE("rational solve and inverse") {
    std::vector<std::vector<Rat>> a = {{Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
    auto x = rat_solve(a, {Rat(5), Rat(10)});
    CHECK(x[0] == Rat(1));
    CHECK(x[1] == Rat(3));

    auto inv = rat_inverse(a);
    // a * inv == identity
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Rat s(0);
            for (int l = 0; l < 2; ++l) s += a[i][l] * inv[l][j];
            CHECK(s == Rat(i == j ? 1 : 0));
        }

    std::vector<std::vector<Rat>> sing = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
    CHECK_THROWS_AS(rat_solve(sing, {Rat(1), Rat(1)}), std::domain_error);
    CHECK_THROWS_AS(rat_inverse(sing), std::domain_error);
}

}  // TEST_SUITE
