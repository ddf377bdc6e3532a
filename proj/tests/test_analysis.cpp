#include "doctest.h"
#include "idsum/analysis.hpp"
#include "idsum/qoalgebra.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace idsum;

namespace {

SumCurve synthetic_curve(double p, double c, const std::vector<double>& ts, double noise,
                         uint32_t seed) {
    SumCurve curve;
    curve.label = "synthetic";
    curve.exponent_m = 2.0;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> eps(-noise, noise);
    for (double t : ts) {
        SumSample s;
        s.radius = std::exp(t);
        s.value = c * std::pow(t, p) * std::exp(noise > 0 ? eps(rng) : 0.0);
        s.point_count = 1;
        curve.samples.push_back(s);
    }
    return curve;
}

std::vector<double> t_grid(double lo, double hi, double step) {
    std::vector<double> out;
    for (double t = lo; t <= hi + 1e-9; t += step) out.push_back(t);
    return out;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("exact power curves are recovered to rounding error") {
    for (double p : {0.0, 1.0, 2.0, 3.0}) {
        auto curve = synthetic_curve(p, 7.0, t_grid(3.0, 7.0, 0.5), 0.0, 0);
        auto fit = fit_log_power(curve);
        CHECK(fit.exponent == doctest::Approx(p).epsilon(1e-9));
        CHECK(fit.prefactor == doctest::Approx(7.0).epsilon(1e-9));
        CHECK(fit.residual_rms <= 1e-12);
        CHECK(fit.radii_used.size() == 9);
        CHECK(fit.radii_used.front() == doctest::Approx(std::exp(3.0)).epsilon(1e-12));
    }
}

TEST_CASE("one percent multiplicative noise moves the exponent very little") {
    auto curve = synthetic_curve(2.0, 7.0, t_grid(3.0, 9.0, 0.5), 0.01, 42);
    auto fit = fit_log_power(curve);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.025));
    CHECK(fit.prefactor == doctest::Approx(7.0).epsilon(0.05));
    CHECK(fit.residual_rms <= 0.01);
}

TEST_CASE("fit preconditions") {
    // too few samples
    CHECK_THROWS_AS(fit_log_power(synthetic_curve(1.0, 1.0, {3.0, 4.0, 5.0}, 0.0, 0)),
                    ScopeError);
    // log M range spans less than a factor of two
    CHECK_THROWS_AS(fit_log_power(synthetic_curve(1.0, 1.0, {3.0, 3.3, 3.6, 3.9, 4.2}, 0.0, 0)),
                    ScopeError);
    // nonpositive values and too-small radii
    auto bad = synthetic_curve(1.0, 1.0, t_grid(3.0, 7.0, 1.0), 0.0, 0);
    bad.samples[2].value = 0.0;
    CHECK_THROWS_AS(fit_log_power(bad), ScopeError);
    auto tiny = synthetic_curve(1.0, 1.0, t_grid(3.0, 7.0, 1.0), 0.0, 0);
    tiny.samples[0].radius = 1.0;
    CHECK_THROWS_AS(fit_log_power(tiny), ScopeError);
}

TEST_CASE("comparing a curve against itself gives a flat unit trend") {
    auto ts = t_grid(3.0, 7.0, 0.5);
    auto curve = synthetic_curve(2.0, 5.0, ts, 0.0, 0);
    auto cmp = compare_growth(curve, curve);
    REQUIRE(cmp.ratio_trend.size() == ts.size());
    for (double r : cmp.ratio_trend) CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(cmp.ratio_increasing);
    CHECK(cmp.qo_fit.exponent == doctest::Approx(cmp.nf_fit.exponent).epsilon(1e-12));
}

TEST_CASE("swapping the compared curves inverts the trend") {
    auto ts = t_grid(3.0, 7.0, 0.5);
    auto qo = synthetic_curve(3.0, 5.0, ts, 0.0, 0);
    auto nf = synthetic_curve(1.0, 5.0, ts, 0.0, 0);
    auto fwd = compare_growth(qo, nf);
    auto rev = compare_growth(nf, qo);
    REQUIRE(fwd.ratio_trend.size() == rev.ratio_trend.size());
    for (size_t i = 0; i < fwd.ratio_trend.size(); ++i)
        CHECK(fwd.ratio_trend[i] * rev.ratio_trend[i] == doctest::Approx(1.0).epsilon(1e-12));
    // the trend tracks nf over qo, so it shrinks when qo grows faster
    CHECK_FALSE(fwd.ratio_increasing);
    CHECK(rev.ratio_increasing);
}

TEST_CASE("curves must share grid and exponent to be compared") {
    auto a = synthetic_curve(2.0, 5.0, t_grid(3.0, 7.0, 0.5), 0.0, 0);
    auto b = synthetic_curve(2.0, 5.0, t_grid(3.0, 8.0, 0.5), 0.0, 0);
    CHECK_THROWS_AS(compare_growth(a, b), ScopeError);
    auto c = synthetic_curve(2.0, 5.0, t_grid(3.0, 7.0, 0.5), 0.0, 0);
    c.exponent_m = 4.0;
    CHECK_THROWS_AS(compare_growth(a, c), ScopeError);
}

TEST_CASE("rational baseline lands between its bounds") {
    auto K = catalog_lookup("RATIONALS");
    auto rep = bound_report(K, 2.0, {std::exp(3.0), std::exp(4.0)});
    CHECK(rep.bound_name == "totally_real");
    CHECK(rep.label == "psi(O_RATIONALS)");
    CHECK(rep.exponent_m == 2.0);
    CHECK(rep.lower_coef == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.lower_log_power == 0);
    // zeta-function envelope 2 zeta(2), carried at power n - 1 = 0
    CHECK(rep.upper_coef == doctest::Approx(2.0 * 1.6449340668).epsilon(1e-4));
    CHECK(rep.upper_log_power == 0);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].pre_asymptotic);
    CHECK_FALSE(rep.rows[1].pre_asymptotic);
    // twice the partial sums of 1/n^2 up to e^3 and e^4
    CHECK(rep.rows[0].measured == doctest::Approx(3.1923).epsilon(1e-3));
    CHECK(rep.rows[1].measured == doctest::Approx(3.2531).epsilon(1e-3));
    for (const auto& r : rep.rows) CHECK(r.verdict == BoundVerdict::pass);
}

TEST_CASE("bound rows are derivable from the report coefficients") {
    auto K = catalog_lookup("REAL_QUADRATIC_5");
    auto rep = bound_report(K, 2.0, {std::exp(3.5), std::exp(4.0)});
    CHECK(rep.bound_name == "totally_real");
    CHECK(rep.slack == 2.0);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].pre_asymptotic);       // log M = 3.5
    CHECK_FALSE(rep.rows[1].pre_asymptotic);  // log M = 4
    for (const auto& r : rep.rows) {
        const double lg = std::log(r.radius);
        CHECK(r.lower ==
              doctest::Approx(rep.lower_coef * std::pow(lg, rep.lower_log_power)).epsilon(1e-12));
        CHECK(r.upper ==
              doctest::Approx(rep.upper_coef * std::pow(lg, rep.upper_log_power)).epsilon(1e-12));
        const bool should_pass =
            r.measured >= r.lower / rep.slack && r.measured <= r.upper * rep.slack;
        CHECK((r.verdict == BoundVerdict::pass) == should_pass);
        CHECK(r.point_count > 0);
    }
}

TEST_CASE("verdicts only improve as slack grows") {
    auto K = catalog_lookup("REAL_QUADRATIC_5");
    std::vector<double> radii = {std::exp(3.0), std::exp(4.0)};
    BoundOptions tight, loose;
    tight.slack = 1.0;
    loose.slack = 8.0;
    auto rt = bound_report(K, 2.0, radii, tight);
    auto rl = bound_report(K, 2.0, radii, loose);
    REQUIRE(rt.rows.size() == rl.rows.size());
    for (size_t i = 0; i < rt.rows.size(); ++i)
        if (rt.rows[i].verdict == BoundVerdict::pass)
            CHECK(rl.rows[i].verdict == BoundVerdict::pass);
}

TEST_CASE("exhausted budgets mark rows skipped instead of failing") {
    BoundOptions opt;
    opt.enum_opts.budget = 100;
    auto rep = bound_report(catalog_lookup("REAL_QUADRATIC_5"), 2.0, {std::exp(4.0)}, opt);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].verdict == BoundVerdict::skipped);
    CHECK(std::isnan(rep.rows[0].measured));
    CHECK(rep.rows[0].point_count == 0);

    auto qo = bound_report(algebra_lookup("ALAMOUTI"), 2, {std::exp(4.0)}, opt);
    REQUIRE(qo.rows.size() == 1);
    CHECK(qo.rows[0].verdict == BoundVerdict::skipped);
    CHECK(std::isnan(qo.upper_coef));  // no sample survived to fit the envelope
}

TEST_CASE("complex reports require an integer block count") {
    auto K = catalog_lookup("GAUSSIAN");
    CHECK_THROWS_AS(bound_report(K, 1.5, {std::exp(4.0)}), ScopeError);
    auto rep = bound_report(K, 2.0, {std::exp(4.0)});
    CHECK(rep.bound_name == "totally_complex");
    CHECK(rep.exponent_m == 4.0);  // m = 2 n_r
}

TEST_CASE("default radius grids thin out as the rank grows") {
    auto g2 = default_radius_grid(2);
    auto g4 = default_radius_grid(4);
    auto g8 = default_radius_grid(8);
    CHECK(g2.size() == 15);
    CHECK(g4.size() == 5);
    CHECK(g8.size() == 4);
    CHECK(g2.front() == doctest::Approx(std::exp(3.0)).epsilon(1e-12));
    CHECK(g2.back() == doctest::Approx(std::exp(10.0)).epsilon(1e-12));
    CHECK(g8.back() == doctest::Approx(std::exp(4.5)).epsilon(1e-12));
    for (size_t i = 1; i < g4.size(); ++i) CHECK(g4[i] > g4[i - 1]);
    CHECK_THROWS_AS(default_radius_grid(0), ScopeError);
}

TEST_CASE("report radii must be sane") {
    auto K = catalog_lookup("RATIONALS");
    CHECK_THROWS_AS(bound_report(K, 2.0, {}), ScopeError);
    CHECK_THROWS_AS(bound_report(K, 2.0, {2.0}), ScopeError);  // below e
    CHECK_THROWS_AS(bound_report(K, 2.0, {std::exp(4.0), std::exp(3.0)}), ScopeError);
    BoundOptions neg;
    neg.slack = 0.5;
    CHECK_THROWS_AS(bound_report(K, 2.0, {std::exp(3.0)}, neg), ScopeError);
}

}  // TEST_SUITE
