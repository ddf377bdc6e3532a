#include "doctest.h"
#include "idsum/units.hpp"

#include <cmath>
#include <set>
#include <vector>

using namespace idsum;

namespace {

std::set<std::vector<Rat>> coord_set(const std::vector<FieldElement>& us) {
    std::set<std::vector<Rat>> s;
    for (const auto& u : us) s.insert(u.coords);
    return s;
}

double fro2(const FieldElement& x) {
    double s = 0.0;
    const auto K = x.field;
    for (int e = 0; e < K->chosen_count(); ++e) s += std::norm(x.embed(e));
    return s;
}

}  // namespace

TEST_SUITE("units") {

TEST_CASE("frozen counts across the catalog") {
    auto K5 = catalog_lookup("REAL_QUADRATIC_5");
    const int64_t expect5[] = {18, 38, 58, 78};
    double M = 10.0;
    for (int i = 0; i < 4; ++i, M *= 10.0) CHECK(unit_ball_count(K5, M).count == expect5[i]);

    auto Z5 = catalog_lookup("CYCLOTOMIC_5");
    CHECK(unit_ball_count(Z5, 10.0).count == 90);
    CHECK(unit_ball_count(Z5, 100.0).count == 190);

    CHECK(unit_ball_count(catalog_lookup("BIQUADRATIC"), 10.0).count == 36);

    auto Z20 = catalog_lookup("CYCLOTOMIC_20");
    CHECK(unit_ball_count(Z20, 3.0).count == 140);
    CHECK(unit_ball_count(Z20, 5.0).count == 500);
    CHECK(unit_ball_count(Z20, 10.0).count == 2500);
}

TEST_CASE("rank zero fields hold only torsion") {
    auto Qi = catalog_lookup("GAUSSIAN");
    CHECK(unit_ball_count(Qi, 1.0).count == 4);    // all four units sit on the unit sphere
    CHECK(unit_ball_count(Qi, 1000.0).count == 4);
    CHECK(unit_ball_count(catalog_lookup("RATIONALS"), 10.0).count == 2);
}

TEST_CASE("every enumerated unit is a unit, exactly") {
    for (const char* name : {"REAL_QUADRATIC_5", "CYCLOTOMIC_5", "BIQUADRATIC"}) {
        auto K = catalog_lookup(name);
        auto us = enumerate_units_in_ball(K, 20.0);
        CHECK(!us.empty());
        for (const auto& u : us) {
            const Rat n = u.norm();
            CHECK((n == Rat(1) || n == Rat(-1)));
            CHECK(u.is_integral());
            // the embedded diagonal matrix has |det| = 1
            double det = 1.0;
            for (int e = 0; e < K->chosen_count(); ++e) det *= std::abs(u.embed(e));
            if (K->totally_complex) det *= det;
            CHECK(std::abs(det - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("unit lists grow monotonically with the radius") {
    auto K = catalog_lookup("CYCLOTOMIC_5");
    auto small = coord_set(enumerate_units_in_ball(K, 5.0));
    auto big = coord_set(enumerate_units_in_ball(K, 50.0));
    CHECK(small.size() < big.size());
    for (const auto& c : small) CHECK(big.count(c) == 1);
}

TEST_CASE("rank-one closed form: omega times the exponent window") {
    auto K = catalog_lookup("REAL_QUADRATIC_5");
    // |psi(phi^j)|_F^2 = phi^(2j) + phi^(-2j), so the ball M holds the
    // exponents with phi^(2|j|) roughly below M^2; count = 2 (2 jmax + 1)
    for (double M : {10.0, 100.0, 55.0}) {
        int64_t jmax = 0;
        const double logphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
        while (std::exp(2.0 * (jmax + 1) * logphi) + std::exp(-2.0 * (jmax + 1) * logphi) <=
               M * M + 1e-9 * (1.0 + M * M))
            ++jmax;
        CHECK(unit_ball_count(K, M).count == 2 * (2 * jmax + 1));
    }
}

TEST_CASE("prediction uses the density constant") {
    auto K = catalog_lookup("REAL_QUADRATIC_5");
    auto r = unit_ball_count(K, 10.0);
    CHECK(r.predicted == doctest::Approx(unit_density_constant(K, 2) * std::log(10.0)).epsilon(1e-12));
    CHECK(r.predicted == doctest::Approx(19.1399).epsilon(1e-4));
    // count stays within the additive window used by the acceptance gate
    CHECK(std::abs(double(r.count) - r.predicted) <= 6.0);
}

TEST_CASE("units vector only materializes on request") {
    auto K = catalog_lookup("REAL_QUADRATIC_5");
    CHECK(unit_ball_count(K, 10.0).units.empty());
    auto kept = unit_ball_count(K, 10.0, true);
    CHECK(int64_t(kept.units.size()) == kept.count);
}

TEST_CASE("count curve carries counts on the requested grid") {
    auto K = catalog_lookup("REAL_QUADRATIC_5");
    auto c = unit_count_curve(K, {10.0, 100.0, 1000.0, 10000.0});
    CHECK(c.label == "units(REAL_QUADRATIC_5)");
    REQUIRE(c.samples.size() == 4);
    const int64_t expect[] = {18, 38, 58, 78};
    for (int i = 0; i < 4; ++i) {
        CHECK(c.samples[size_t(i)].radius == doctest::Approx(std::pow(10.0, i + 1)).epsilon(1e-12));
        CHECK(c.samples[size_t(i)].value == doctest::Approx(double(expect[i])).epsilon(1e-12));
    }
}

TEST_CASE("torsion-only growth is flat even on the curve") {
    auto c = unit_count_curve(catalog_lookup("GAUSSIAN"), {std::exp(1.0), 10.0, 100.0});
    for (const auto& s : c.samples) CHECK(s.value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("caveat travels with fields whose unit list may be a subgroup") {
    CHECK(unit_ball_count(catalog_lookup("REAL_QUADRATIC_5"), 10.0).caveat.empty());
    CHECK_FALSE(unit_ball_count(catalog_lookup("CYCLOTOMIC_20"), 3.0).caveat.empty());
}

TEST_CASE("preconditions") {
    auto K = catalog_lookup("REAL_QUADRATIC_5");
    CHECK_THROWS_AS(enumerate_units_in_ball(K, 0.5), ScopeError);
    CHECK_THROWS_AS(unit_count_curve(K, {1.0, 10.0}), ScopeError);        // below e
    CHECK_THROWS_AS(unit_count_curve(K, {100.0, 10.0}), ScopeError);      // not increasing
    CHECK_THROWS_AS(unit_count_curve(K, std::vector<double>{}), ScopeError);
}

}  // TEST_SUITE
