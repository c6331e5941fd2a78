#include <doctest.h>

#include <cmath>

#include "serlab/bounds.hpp"
#include "serlab/registry.hpp"
#include "serlab/special.hpp"

using namespace serlab;

TEST_CASE("coefficient landmarks") {
    auto b1 = coefficients(1);
    CHECK(b1.c_n == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * M_E)).epsilon(1e-14));
    CHECK(b1.beta_l == 0.0);

    auto b2 = coefficients(2);
    CHECK(b2.c_n == doctest::Approx(1.0 / M_E).epsilon(1e-14));
    CHECK(b2.beta_l == 0.0);
    CHECK(b2.beta_u == doctest::Approx(4.0 / (M_E * M_E)).epsilon(1e-13));
    CHECK(b2.b_1 == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(b2.b_2 == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));

    // independently computed references
    CHECK(coefficients(3).c_n == doctest::Approx(0.4625409894113079).epsilon(1e-13));
    CHECK(coefficients(5).c_n == doctest::Approx(0.6102076067469371).epsilon(1e-13));
    CHECK(coefficients(1).beta_u == doctest::Approx(0.31645996947725147).epsilon(1e-13));
    CHECK(coefficients(3).beta_u == doctest::Approx(0.7402567515377328).epsilon(1e-13));
    CHECK(coefficients(3).beta_l == doctest::Approx(-0.02781033339364065).epsilon(1e-12));
    CHECK(coefficients(5).beta_u == doctest::Approx(1.1033480005868905).epsilon(1e-13));

    for (int n = 1; n <= 8; ++n) {
        auto bs = coefficients(n);
        CHECK(bs.c_n > 0.0);
        CHECK(bs.beta_u > 0.0);
        CHECK(bs.beta_l <= 0.0);
        CHECK(bs.b_u > 0.0);
        CHECK(bs.b_l < 0.0);
        CHECK(bs.b_1 > bs.b_2);
        CHECK(bs.b_2 > 0.0);
    }
    CHECK_THROWS_AS(coefficients(0), std::invalid_argument);
}

TEST_CASE("transcribed form of the order-2 upper coefficient") {
    // coincides with the oracle-consistent value only at n = 2
    CHECK(beta_u_transcribed(2) == doctest::Approx(coefficients(2).beta_u).epsilon(1e-14));
    CHECK(beta_u_transcribed(1) == doctest::Approx(0.22825959366441625).epsilon(1e-12));
    CHECK(beta_u_transcribed(3) == doctest::Approx(0.9004532579342787).epsilon(1e-12));
    CHECK(beta_u_transcribed(1) != doctest::Approx(coefficients(1).beta_u).epsilon(1e-3));
    CHECK(beta_u_transcribed(3) != doctest::Approx(coefficients(3).beta_u).epsilon(1e-3));
}

TEST_CASE("snr regimes") {
    auto qpsk = snr_regimes(standard_constellation(StandardFamily::Qpsk));
    CHECK(qpsk.always_convex);
    CHECK(qpsk.small_mode_empty);

    auto cube = snr_regimes(standard_constellation(StandardFamily::Cube, 3), true);
    CHECK(!cube.always_convex);
    CHECK(cube.large_mode_onset == doctest::Approx(3.0 * (3.0 + std::sqrt(6.0))).epsilon(1e-13));
    CHECK(cube.small_mode_empty);  // all corner regions are unbounded
    CHECK(cube.per_point.size() == 8);
    CHECK(cube.per_point[0].large_mode_onset == doctest::Approx(cube.large_mode_onset));
    auto bracket = cube.inflection_bracket();
    CHECK(bracket.first == 0.0);
    CHECK(bracket.second == doctest::Approx(16.348469228349534).epsilon(1e-12));

    // equal distances collapse the bracket endpoints onto (n -+ sqrt(2n))/d^2
    auto t = snr_thresholds(3, 0.5, 0.5);
    CHECK(t.large_mode_onset == doctest::Approx((3.0 + std::sqrt(6.0)) / 0.25).epsilon(1e-13));
    CHECK(t.small_mode_cutoff.has_value());
    CHECK(*t.small_mode_cutoff == doctest::Approx((3.0 - std::sqrt(6.0)) / 0.25).epsilon(1e-13));
    CHECK(t.large_mode_onset >= *t.small_mode_cutoff);
}

TEST_CASE("noise regimes") {
    auto bpsk = noise_regimes(standard_constellation(StandardFamily::Bpsk));
    REQUIRE(bpsk.small_mode_cutoff.has_value());
    CHECK(*bpsk.small_mode_cutoff == doctest::Approx(1.0 / (3.0 + std::sqrt(6.0))).epsilon(1e-13));
    CHECK(bpsk.large_mode_empty);  // d_max infinite

    auto cube = noise_regimes(standard_constellation(StandardFamily::Cube, 3));
    REQUIRE(cube.small_mode_cutoff.has_value());
    CHECK(*cube.small_mode_cutoff ==
          doctest::Approx((1.0 / 3.0) / (5.0 + std::sqrt(10.0))).epsilon(1e-13));

    // bounded synthetic region: both noise modes exist and order correctly
    auto t = noise_thresholds(3, 1.0, std::sqrt(3.0));
    CHECK(t.small_mode_cutoff.has_value());
    CHECK(*t.small_mode_cutoff <= t.large_mode_onset);
}

TEST_CASE("derivative bound envelopes") {
    auto bs2 = coefficients(2);

    // spherical region at the first-order radius: order-1 lower bound met with equality
    CurveEstimate sphere_curve;
    sphere_curve.axis = Axis::Snr;
    sphere_curve.order = 1;
    sphere_curve.quantity = "d1";
    sphere_curve.method = "closed-form";
    for (double g : make_grid(0.1, 10.0, 9, true)) {
        sphere_curve.grid.push_back(g);
        sphere_curve.values.push_back(-bs2.c_n / g);
        sphere_curve.std_errors.push_back(0.0);
    }
    auto rep = check_derivative_bounds(sphere_curve, bs2);
    CHECK(rep.pass);
    for (const auto& row : rep.rows) CHECK(row.margin == doctest::Approx(0.0).epsilon(1e-12));

    // QPSK closed-form order-2 curve sits inside [0, (2/(e snr))^2]
    auto qpsk = make_pe_model("qpsk-closed-form");
    CurveEstimate d2;
    d2.axis = Axis::Snr;
    d2.order = 2;
    d2.quantity = "d2";
    d2.method = "closed-form";
    for (double g : make_grid(0.05, 30.0, 25, true)) {
        d2.grid.push_back(g);
        d2.values.push_back(qpsk.d2_snr(g));
        d2.std_errors.push_back(0.0);
    }
    auto rep2 = check_derivative_bounds(d2, bs2);
    CHECK(rep2.pass);
    CHECK(rep2.closest_index >= 0);

    // violation detection: a value just past the upper envelope fails
    d2.values[3] = bs2.beta_u / (d2.grid[3] * d2.grid[3]) * 1.01;
    CHECK(!check_derivative_bounds(d2, bs2).pass);

    CHECK_THROWS_AS(check_derivative_bounds(CurveEstimate{}, bs2), std::invalid_argument);
}

TEST_CASE("inflection scan") {
    // QPSK closed-form second derivative: convex everywhere, no crossings
    auto qpsk = make_pe_model("qpsk-closed-form");
    CurveEstimate d2;
    d2.axis = Axis::Snr;
    d2.order = 2;
    for (double g : make_grid(0.05, 30.0, 40, true)) {
        d2.grid.push_back(g);
        d2.values.push_back(qpsk.d2_snr(g));
        d2.std_errors.push_back(1e-12);
    }
    auto scan = inflection_scan(d2, 0.1, 20.0);
    CHECK(scan.crossings.empty());

    // sphere with fixed R on the noise axis: exactly one crossing at R^2/(n+2)
    auto sph = make_pe_model("sphere:3:1.0");
    CurveEstimate nd2;
    nd2.axis = Axis::Noise;
    nd2.order = 2;
    auto ngrid = make_grid(0.02, 3.0, 80, true);
    for (double p : ngrid) {
        nd2.grid.push_back(p);
        nd2.values.push_back(sph.d2_noise(p));
        nd2.std_errors.push_back(1e-15);
    }
    auto nscan = inflection_scan(nd2, 0.03, 2.5);
    REQUIRE(nscan.crossings.size() == 1);
    CHECK(nscan.odd_count());
    CHECK(nscan.crossings[0] == doctest::Approx(1.0 / 5.0).epsilon(0.05));

    CHECK_THROWS_AS(inflection_scan(nd2, 0.001, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(inflection_scan(d2, 20.0, 0.1), std::invalid_argument);
}

TEST_CASE("log concavity") {
    // BPSK and CUBE(3) P_ci have product closed forms; both are log-concave
    auto grid = make_grid(0.01, 100.0, 50, true);
    for (double scale : {1.0, 1.0 / 3.0}) {
        CurveEstimate pc;
        pc.axis = Axis::Snr;
        for (double g : grid) {
            pc.grid.push_back(g);
            double per_dim = 1.0 - q_func(std::sqrt(scale * g));
            pc.values.push_back(scale == 1.0 ? per_dim : per_dim * per_dim * per_dim);
            pc.std_errors.push_back(0.0);
        }
        CHECK(log_concavity_check(pc).pass);
    }

    // log-convex bump fails
    CurveEstimate bad;
    bad.axis = Axis::Snr;
    bad.grid = {1.0, 2.0, 3.0};
    bad.values = {0.9, 0.1, 0.9};
    bad.std_errors = {0.0, 0.0, 0.0};
    CHECK(!log_concavity_check(bad).pass);

    bad.values = {0.9, -0.1, 0.9};
    CHECK_THROWS_AS(log_concavity_check(bad), std::invalid_argument);
}
