#include "doctest.h"
#include "idsum/analysis.hpp"
#include "idsum/detsum.hpp"
#include "idsum/qoalgebra.hpp"
#include "idsum/units.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

using namespace idsum;

namespace {

FieldElement fe_zero(const FieldPtr& E) {
    return FieldElement::from_int_coords(E, std::vector<int64_t>(size_t(E->degree), 0));
}

AlgebraElement random_element(const AlgebraPtr& A, std::mt19937& rng, int span) {
    std::uniform_int_distribution<int> d(-span, span);
    const size_t ed = size_t(A->E->degree);
    std::vector<Rat> c1(ed), c2(ed);
    for (size_t i = 0; i < ed; ++i) {
        c1[i] = Rat(d(rng));
        c2[i] = Rat(d(rng));
    }
    return A->element_pair(c1, c2);
}

FieldElement random_integral(const FieldPtr& E, std::mt19937& rng, int span) {
    std::uniform_int_distribution<int64_t> d(-span, span);
    const size_t ed = size_t(E->degree);
    std::vector<int64_t> c(ed);
    for (size_t i = 0; i < ed; ++i) c[i] = d(rng);
    return FieldElement::from_int_coords(E, c);
}

// reduced norm x1 conj(x1) + x2 conj(x2); for gamma = -1 the module index is
// its exact field norm over the compositum
Rat index_oracle(const AlgebraElement& a) {
    return (a.x1 * a.x1.conj() + a.x2 * a.x2.conj()).norm();
}

}  // namespace

TEST_SUITE("qoalgebra") {

TEST_CASE("catalog holds the two worked algebras") {
    auto names = catalog_algebra_names();
    REQUIRE(names.size() == 2);
    CHECK(names[0] == "ALAMOUTI");
    CHECK(names[1] == "HAMILTON");
    CHECK(algebra_lookup("ALAMOUTI") == algebra_lookup("ALAMOUTI"));  // cached
    CHECK_THROWS_AS(algebra_lookup("NO_SUCH_ALGEBRA"), ScopeError);
}

TEST_CASE("algebra shapes and evaluated gamma") {
    auto AL = algebra_lookup("ALAMOUTI");
    CHECK(AL->k() == 1);
    CHECK(AL->matrix_size() == 2);
    REQUIRE(AL->gamma_at.size() == 1);
    CHECK(AL->gamma_at[0] == doctest::Approx(-1.0).epsilon(1e-12));

    auto H = algebra_lookup("HAMILTON");
    CHECK(H->k() == 2);
    CHECK(H->matrix_size() == 4);
    REQUIRE(H->gamma_at.size() == 2);
    CHECK(H->gamma_at[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(H->gamma_at[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("block embeddings intertwine conjugation") {
    auto H = algebra_lookup("HAMILTON");
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto x = random_integral(H->E, rng, 5);
        for (int i = 0; i < H->k(); ++i) {
            auto lhs = H->tau(i, x.conj());
            auto rhs = std::conj(H->tau(i, x));
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("hand-checked representation matrices") {
    auto AL = algebra_lookup("ALAMOUTI");
    auto one_plus_u = AL->element(FieldElement::one(AL->E), FieldElement::one(AL->E));
    auto m = phi(one_plus_u);
    CHECK(m(0, 0) == std::complex<double>(1, 0));
    CHECK(m(0, 1) == std::complex<double>(1, 0));
    CHECK(m(1, 0) == std::complex<double>(-1, 0));
    CHECK(m(1, 1) == std::complex<double>(1, 0));
    CHECK(std::abs(m.determinant() - std::complex<double>(2, 0)) < 1e-12);

    auto u = AL->element(fe_zero(AL->E), FieldElement::one(AL->E));
    CHECK(std::abs(phi(u).determinant() - std::complex<double>(1, 0)) < 1e-12);

    auto H = algebra_lookup("HAMILTON");
    auto hu = H->element(FieldElement::one(H->E), FieldElement::one(H->E));
    auto p = multiblock_psi(hu);
    REQUIRE(p.rows() == 4);
    CHECK(std::abs(p.determinant() - std::complex<double>(4, 0)) < 1e-10);
    CHECK(p.squaredNorm() == doctest::Approx(8.0).epsilon(1e-12));
    // off-diagonal blocks of the block-diagonal form vanish
    CHECK(p.block(0, 2, 2, 2).norm() == 0.0);
    CHECK(p.block(2, 0, 2, 2).norm() == 0.0);

    // sqrt(5) is central, so psi is diagonal with the two real conjugates
    auto s5 = H->element(FieldElement::from_int_coords(H->E, {-1, 0, 2, 0}),
                         fe_zero(H->E));
    auto ps = multiblock_psi(s5);
    const double r5 = std::sqrt(5.0);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(std::abs(ps(i, i)) - r5) < 1e-9);
    CHECK(std::abs(ps.determinant() - std::complex<double>(25, 0)) < 1e-8);
}

TEST_CASE("psi reverses products, so determinants still multiply") {
    // the codeword layout [[x1, x2], [gamma conj(x2), conj(x1)]] represents the
    // opposite algebra: psi(ab) = psi(b) psi(a)
    std::mt19937 rng(11);
    for (const char* name : {"ALAMOUTI", "HAMILTON"}) {
        auto A = algebra_lookup(name);
        for (int trial = 0; trial < 100; ++trial) {
            auto a = random_element(A, rng, 6);
            auto b = random_element(A, rng, 6);
            Eigen::MatrixXcd lhs = multiblock_psi(a * b);
            Eigen::MatrixXcd rhs = multiblock_psi(b) * multiblock_psi(a);
            CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
            const double da = std::abs(multiblock_psi(a).determinant());
            const double db = std::abs(multiblock_psi(b).determinant());
            const double dab = std::abs(lhs.determinant());
            CHECK(dab == doctest::Approx(da * db).epsilon(1e-9));
        }
    }
}

TEST_CASE("module index equals the reduced norm, exhaustively for the small algebra") {
    auto AL = algebra_lookup("ALAMOUTI");
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int c = -3; c <= 3; ++c)
                for (int d = -3; d <= 3; ++d) {
                    if (a == 0 && b == 0 && c == 0 && d == 0) continue;
                    auto x = AL->element(FieldElement::from_int_coords(AL->E, {a, b}),
                                         FieldElement::from_int_coords(AL->E, {c, d}));
                    const int64_t q = int64_t(a) * a + int64_t(b) * b + int64_t(c) * c +
                                      int64_t(d) * d;
                    CHECK(principal_ideal_index(AL, x) == q * q);
                    CHECK(index_oracle(x) == Rat(q * q));
                }
}

TEST_CASE("module index equals the reduced norm on random biquadratic elements") {
    auto H = algebra_lookup("HAMILTON");
    std::mt19937 rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = random_element(H, rng, 3);
        if (x.is_zero()) continue;
        const Rat expected = index_oracle(x);
        REQUIRE(expected.den == 1);
        CHECK(principal_ideal_index(H, x) == expected.num);
    }
}

TEST_CASE("module index is multiplicative") {
    auto H = algebra_lookup("HAMILTON");
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_element(H, rng, 2);
        auto b = random_element(H, rng, 2);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK(principal_ideal_index(H, a * b) ==
              principal_ideal_index(H, a) * principal_ideal_index(H, b));
    }
}

TEST_CASE("worked index values") {
    auto AL = algebra_lookup("ALAMOUTI");
    auto H = algebra_lookup("HAMILTON");
    auto one_u_al = AL->element(FieldElement::one(AL->E), FieldElement::one(AL->E));
    auto one_u_h = H->element(FieldElement::one(H->E), FieldElement::one(H->E));
    auto two_h = H->element(FieldElement::from_int_coords(H->E, {2, 0, 0, 0}),
                            fe_zero(H->E));
    CHECK(principal_ideal_index(AL, one_u_al) == 4);
    CHECK(principal_ideal_index(H, one_u_h) == 16);
    CHECK(principal_ideal_index(H, two_h) == 256);
}

TEST_CASE("the two matrix blocks of a pair are Frobenius orthogonal") {
    std::mt19937 rng(19);
    for (const char* name : {"ALAMOUTI", "HAMILTON"}) {
        auto A = algebra_lookup(name);
        for (int trial = 0; trial < 500; ++trial) {
            auto x = random_integral(A->E, rng, 10);
            auto y = random_integral(A->E, rng, 10);
            auto oc = orthogonality_check(A, x, y);
            CHECK(oc.defect <= 1e-12 * (1.0 + oc.rhs));
        }
    }
}

TEST_CASE("order lattice shape, volume, and block-diagonal Gram") {
    auto H = algebra_lookup("HAMILTON");
    auto L = order_lattice(H);
    CHECK(L.rank == 8);
    CHECK(L.matrix_size == 4);
    CHECK(L.label == "psi(Lambda_HAMILTON)");
    CHECK(L.volume == doctest::Approx(400.0).epsilon(1e-9));
    // basis splits as (w, 0) then (0, w); orthogonality kills the mixed block
    CHECK(L.gram.block(0, 4, 4, 4).norm() == 0.0);
    CHECK(L.gram.block(4, 0, 4, 4).norm() == 0.0);

    auto LA = order_lattice(algebra_lookup("ALAMOUTI"));
    CHECK(LA.rank == 4);
    CHECK(LA.matrix_size == 2);
    CHECK(LA.volume == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("division certificates found no small determinant") {
    auto cal = algebra_lookup("ALAMOUTI")->division_certificate;
    CHECK(cal.probe_radius == doctest::Approx(12.0));
    CHECK(cal.points_checked == 25792);
    CHECK(cal.min_abs_det >= 1.0 - 1e-9);

    auto ch = algebra_lookup("HAMILTON")->division_certificate;
    CHECK(ch.probe_radius == doctest::Approx(12.0));
    CHECK(ch.points_checked == 4500072);
    CHECK(ch.min_abs_det >= 1.0 - 1e-9);
}

TEST_CASE("central units floor the count of determinant-one points") {
    auto H = algebra_lookup("HAMILTON");
    auto L = order_lattice(H);
    const double M = 6.1;
    auto pts = enumerate_ball(L, M);
    int64_t det_one = 0;
    for (const auto& p : pts)
        if (std::abs(p.abs_det - 1.0) <= 1e-9) ++det_one;
    // units of the center embed centrally and double their squared norm
    auto units = enumerate_units_in_ball(catalog_lookup("REAL_QUADRATIC_5"), M / std::sqrt(2.0));
    CHECK(units.size() == 14);
    CHECK(det_one >= int64_t(units.size()));
}

TEST_CASE("frozen determinant sums over the order lattices") {
    auto H = order_lattice(algebra_lookup("HAMILTON"));
    auto sh = inverse_det_sum(H, 4.0, 2.0);
    CHECK(sh.value == doctest::Approx(53.344958).epsilon(1e-6));
    CHECK(sh.point_count == 888);

    auto A = order_lattice(algebra_lookup("ALAMOUTI"));
    auto sa = inverse_det_sum(A, std::exp(3.0), 4.0);
    CHECK(sa.value == doctest::Approx(10.245364).epsilon(1e-6));
}

TEST_CASE("growth bounds at a worked radius") {
    auto H = algebra_lookup("HAMILTON");
    auto gb = qo_growth_bounds(H, 6.0, 2);
    CHECK(gb.lower == doctest::Approx(14.8937).epsilon(1e-3));
    CHECK(gb.upper_shape.envelope_exponent == doctest::Approx(1.0));
    CHECK(gb.upper_shape.c_emp == doctest::Approx(31.7511).epsilon(1e-3));
    CHECK(gb.upper_shape.symbolic_prefactor == "zeta_Lambda(2) * [Lambda^* : O_K^*]");
    // envelope dominates the measured sum at the probe radius itself
    auto s = inverse_det_sum(order_lattice(H), 6.0, 4.0);
    CHECK(s.value <= gb.upper_shape.c_emp * std::log(6.0) * (1.0 + 1e-12));
    CHECK(s.value >= gb.lower);
}

TEST_CASE("scope guards") {
    auto H = algebra_lookup("HAMILTON");
    CHECK_THROWS_AS(qo_growth_bounds(H, 6.0, 1), ScopeError);
    CHECK_THROWS_AS(qo_growth_bounds(H, 2.0, 2), ScopeError);
    CHECK_THROWS_AS(principal_ideal_index(H, H->element(fe_zero(H->E),
                                                        fe_zero(H->E))),
                    ScopeError);
    // half-integer coordinates leave the order
    std::vector<Rat> half(4, Rat(0));
    half[0] = Rat(1, 2);
    std::vector<Rat> zero(4, Rat(0));
    CHECK_THROWS_AS(principal_ideal_index(H, H->element_pair(half, zero)), ScopeError);
}

TEST_CASE("config loading rejects an inconsistent embedding table") {
    const std::string path = "/tmp/idsum_broken_algebra.json";
    {
        std::ofstream out(path);
        // center row 2 maps sqrt(5) to an element whose square is not 5
        out << R"({"algebras": [{
            "name": "BROKEN",
            "base_field": "GAUSSIAN",
            "center": "REAL_QUADRATIC_5",
            "maximal_field": "BIQUADRATIC",
            "gamma": ["-1", "0"],
            "center_in_maximal": [["1","0","0","0"], ["0","1","0","0"]],
            "base_in_maximal": [["1","0","0","0"], ["0","1","0","0"]]
        }]})";
    }
    try {
        load_algebra_config(path, "BROKEN");
        FAIL("expected a consistency failure");
    } catch (const ScopeError& e) {
        CHECK(std::string(e.what()).find("algebra consistency failure") != std::string::npos);
    }
    CHECK_THROWS_AS(load_algebra_config(path, "MISSING"), ScopeError);
    CHECK_THROWS_AS(load_algebra_config("/tmp/no_such_file_idsum.json", "X"), ScopeError);
    std::remove(path.c_str());
}

TEST_CASE("fitted envelope is stable across radii for the rank-four algebra") {
    auto A = algebra_lookup("ALAMOUTI");
    std::vector<double> radii = {std::exp(3.0), std::exp(3.5), std::exp(4.0)};
    auto rep = bound_report(A, 2, radii);
    REQUIRE(rep.rows.size() == 3);
    double lo = rep.rows[0].measured, hi = rep.rows[0].measured;
    for (const auto& r : rep.rows) {
        REQUIRE(r.verdict != BoundVerdict::skipped);
        lo = std::min(lo, r.measured);
        hi = std::max(hi, r.measured);
        CHECK(r.verdict == BoundVerdict::pass);
    }
    // the normalized sum has essentially converged at these radii
    CHECK(hi / lo <= 1.0 + 1e-4);
    CHECK(rep.upper_coef == doctest::Approx(hi).epsilon(1e-12));
}

}  // TEST_SUITE
