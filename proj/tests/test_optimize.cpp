#include <doctest.h>

#include <cmath>

#include "serlab/numeric.hpp"
#include "serlab/optimize.hpp"
#include "serlab/registry.hpp"
#include "serlab/special.hpp"

using namespace serlab;

namespace {

const PeModel kBpsk = make_pe_model("bpsk-closed-form");
const PeModel kQpsk = make_pe_model("qpsk-closed-form");

}  // namespace

TEST_CASE("registry derivatives pass finite-difference gates") {
    for (const auto& m : {kBpsk, kQpsk}) {
        for (double g : {0.3, 1.0, 4.0, 12.0}) {
            CHECK(m.d1_snr(g) ==
                  doctest::Approx(fd_derivative(m.pe_snr, g, 1, 1e-5)).epsilon(1e-7));
            CHECK(m.d2_snr(g) ==
                  doctest::Approx(fd_derivative(m.pe_snr, g, 2, 1e-4)).epsilon(1e-5));
        }
        for (double p : {0.2, 0.7, 2.0}) {
            CHECK(m.d1_noise(p) ==
                  doctest::Approx(fd_derivative(m.pe_noise, p, 1, 1e-5)).epsilon(1e-7));
            CHECK(m.d2_noise(p) ==
                  doctest::Approx(fd_derivative(m.pe_noise, p, 2, 1e-4)).epsilon(1e-5));
        }
    }
    auto sph = make_pe_model("sphere:3:1.0");
    CHECK(sph.d2_noise(0.3) ==
          doctest::Approx(fd_derivative(sph.pe_noise, 0.3, 2, 1e-4)).epsilon(1e-6));
    CHECK_THROWS_AS(make_pe_model("nonesuch"), std::invalid_argument);
}

TEST_CASE("blast bler") {
    CHECK(blast_bler(kBpsk.pe_snr, {1.0}, {4.0}) ==
          doctest::Approx(q_func(2.0)).epsilon(1e-14));
    CHECK(blast_bler([](double) { return 0.0; }, {1.0, 1.0}, {1.0, 2.0}) == 0.0);
    CHECK(blast_bler(kBpsk.pe_snr, {1.0, 1.0}, {4.0, 4.0}) ==
          doctest::Approx(0.044982695392698835).epsilon(1e-12));
    CHECK_THROWS_AS(blast_bler(kBpsk.pe_snr, {1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(blast_bler(kBpsk.pe_snr, {-0.1, 2.1}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(blast_bler([](double) { return 1.5; }, {1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("allocation: symmetry, single stream, oracle agreement") {
    auto uniform = blast_allocate(kBpsk.pe_snr, kBpsk.d1_snr, {5.0, 5.0, 5.0});
    for (double a : uniform.fractions) CHECK(a == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(uniform.kkt_residual < 1e-6);

    auto single = blast_allocate(kBpsk.pe_snr, kBpsk.d1_snr, {3.0});
    CHECK(single.fractions[0] == doctest::Approx(1.0).epsilon(1e-9));

    // two streams against the exhaustive grid
    const std::vector<double> snrs = {10.0, 1.0};
    auto res = blast_allocate(kBpsk.pe_snr, kBpsk.d1_snr, snrs);
    double best = 2.0, best_a = 0.0;
    for (double a1 = 0.0; a1 <= 2.0 + 1e-12; a1 += 1e-4) {
        double v = blast_bler(kBpsk.pe_snr, {a1, 2.0 - a1}, snrs);
        if (v < best) {
            best = v;
            best_a = a1;
        }
    }
    CHECK(std::abs(res.fractions[0] - best_a) < 1e-3);
    CHECK(std::abs(res.objective - best) < 1e-8);
    CHECK(res.kkt_residual < 1e-6);
    CHECK(res.objective <= blast_bler(kBpsk.pe_snr, {1.0, 1.0}, snrs) + 1e-12);
}

TEST_CASE("allocation: feasible perturbations never help") {
    const std::vector<double> snrs = {10.0, 3.0, 0.5};
    auto res = blast_allocate(kBpsk.pe_snr, kBpsk.d1_snr, snrs);
    const double eps = 1e-3;
    for (std::size_t i = 0; i < snrs.size(); ++i)
        for (std::size_t j = 0; j < snrs.size(); ++j) {
            if (i == j) continue;
            auto alt = res.fractions;
            alt[i] += eps;
            alt[j] -= eps;
            if (alt[j] < 0.0) continue;
            CHECK(blast_bler(kBpsk.pe_snr, alt, snrs) >= res.objective - 1e-9);
        }
}

TEST_CASE("allocation rejects non-convex pe") {
    auto sph = make_pe_model("sphere:3:1.0");  // concave in snr at low snr
    CHECK_THROWS_AS(blast_allocate(sph.pe_snr, sph.d1_snr, {1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("inflection in noise power") {
    // bpsk: pe(P) = Q(1/sqrt(P)) has its single inflection at exactly 1/3
    double p0 = find_inflection_noise(kBpsk.d2_noise, 0.01, 10.0);
    CHECK(p0 == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    // inside the n = 1, d = 1 intermediate bracket
    CHECK(p0 >= 1.0 / (3.0 + std::sqrt(6.0)));
    CHECK(p0 <= 1.0 / (3.0 - std::sqrt(6.0)));

    auto sph = make_pe_model("sphere:2:1.0");
    CHECK(find_inflection_noise(sph.d2_noise, 0.01, 10.0) ==
          doctest::Approx(1.0 / 4.0).epsilon(1e-8));

    CHECK_THROWS_AS(find_inflection_noise([](double) { return -1.0; }, 0.1, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_inflection_noise([](double p) { return std::sin(20.0 * p); }, 0.1, 2.0),
                    std::invalid_argument);
}

TEST_CASE("sub-optimal jammer strategy follows the on-off rule") {
    const double p0 = 1.0 / 3.0;
    auto on = jam_suboptimal(kBpsk.pe_noise, p0, 2.0 * p0);
    CHECK(on.kind == SharingKind::None);
    REQUIRE(on.levels.size() == 1);
    CHECK(on.achieved_ser == doctest::Approx(kBpsk.pe_noise(2.0 * p0)).epsilon(1e-14));

    auto off = jam_suboptimal(kBpsk.pe_noise, p0, 0.5 * p0);
    CHECK(off.kind == SharingKind::OnOffSuboptimal);
    REQUIRE(off.levels.size() == 2);
    CHECK(off.levels[0].fraction == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(off.levels[0].power == doctest::Approx(p0).epsilon(1e-14));
    CHECK(off.levels[1].power == 0.0);
    CHECK(off.achieved_ser == doctest::Approx(0.5 * kBpsk.pe_noise(p0)).epsilon(1e-14));
    // budget conservation
    double spent = 0.0, frac = 0.0;
    for (auto& lv : off.levels) {
        spent += lv.fraction * lv.power;
        frac += lv.fraction;
    }
    CHECK(spent == doctest::Approx(0.5 * p0).epsilon(1e-12));
    CHECK(frac == doctest::Approx(1.0).epsilon(1e-14));

    // dominance over no sharing below the threshold
    for (double pn : make_grid(0.02, p0 * 0.999, 12, true))
        CHECK(jam_suboptimal(kBpsk.pe_noise, p0, pn).achieved_ser >=
              kBpsk.pe_noise(pn) - 1e-12);
}

TEST_CASE("optimal jammer strategy: tangent threshold and dominance chain") {
    const double p0 = find_inflection_noise(kBpsk.d2_noise, 0.01, 10.0);
    auto opt = jam_optimal(kBpsk.pe_noise, kBpsk.d1_noise, p0, 0.1);
    CHECK(opt.kind == SharingKind::TangentOptimal);
    // grid oracle: the best single on-level maximizes pe(P)/P
    double best_slope = 0.0, best_p = 0.0;
    for (double p = 0.1; p <= 50.0; p += 1e-4) {
        double s = kBpsk.pe_noise(p) / p;
        if (s > best_slope) {
            best_slope = s;
            best_p = p;
        }
    }
    CHECK(std::abs(opt.threshold - best_p) < 1e-4);
    CHECK(opt.threshold == doctest::Approx(0.7054517787605539).epsilon(1e-6));

    for (double pn : make_grid(0.05, 2.0, 15, true)) {
        double none = kBpsk.pe_noise(pn);
        double sub = jam_suboptimal(kBpsk.pe_noise, p0, pn).achieved_ser;
        double best = jam_optimal(kBpsk.pe_noise, kBpsk.d1_noise, p0, pn).achieved_ser;
        CHECK(sub >= none - 1e-9);
        CHECK(best >= sub - 1e-9);
    }

    // concave pe: sharing cannot help
    ScalarFn concave = [](double p) { return 1.0 - std::exp(-3.0 * p); };
    ScalarFn concave_d1 = [](double p) { return 3.0 * std::exp(-3.0 * p); };
    auto none = jam_optimal(concave, concave_d1, 1.0, 0.4);
    CHECK(none.kind == SharingKind::None);
    CHECK(none.achieved_ser == doctest::Approx(concave(0.4)).epsilon(1e-14));

    // supplying the tangent point itself as the threshold reproduces the
    // sub-optimal construction (the degenerate "unless" boundary)
    auto degen = jam_optimal(kBpsk.pe_noise, kBpsk.d1_noise, opt.threshold, 0.1);
    auto sub_at = jam_suboptimal(kBpsk.pe_noise, opt.threshold, 0.1);
    CHECK(degen.threshold == doctest::Approx(opt.threshold).epsilon(1e-12));
    CHECK(degen.achieved_ser == doctest::Approx(sub_at.achieved_ser).epsilon(1e-12));
}

TEST_CASE("envelope concavity") {
    const double p0 = 1.0 / 3.0;
    auto grid = make_grid(0.02, 3.0, 40, true);
    auto optimal_value = [&](double pn) {
        return jam_optimal(kBpsk.pe_noise, kBpsk.d1_noise, p0, pn).achieved_ser;
    };
    auto rep = envelope_concavity_check(optimal_value, grid);
    CHECK(rep.pass);

    // the sub-optimal curve has its kink at p0; any violation sits there
    auto sub_value = [&](double pn) {
        return jam_suboptimal(kBpsk.pe_noise, p0, pn).achieved_ser;
    };
    auto sub_rep = envelope_concavity_check(sub_value, grid);
    for (double x : sub_rep.violation_points) CHECK(std::abs(x - p0) < 0.25);
    CHECK(!sub_rep.pass);  // the Q(1/sqrt(P)) kink is a genuine convex corner

    // two consecutive sharings change nothing: the envelope is a fixed point
    for (double pn : make_grid(0.05, 1.5, 8, true)) {
        double direct = optimal_value(pn);
        double best_two_level = direct;
        for (double p1 : make_grid(pn, 20.0, 400, true)) {
            double alpha = pn / p1;
            best_two_level =
                std::max(best_two_level, alpha * optimal_value(p1) + (1.0 - alpha) * 0.0);
        }
        CHECK(best_two_level <= direct + 1e-9);
    }

    // linear pe: all strategies coincide and the check passes trivially
    ScalarFn lin = [](double p) { return 0.05 * p; };
    auto lin_rep = envelope_concavity_check(
        [&](double pn) { return jam_suboptimal(lin, 1.0, pn).achieved_ser; }, grid);
    CHECK(lin_rep.pass);
}

TEST_CASE("transmitter sharing via the duality substitution") {
    // concave P_c (2-D constellation): always on
    auto qpsk = transmitter_sharing(kQpsk.pc_snr, kQpsk.pc_d1_snr, 3.0);
    CHECK(qpsk.kind == SharingKind::None);
    REQUIRE(qpsk.levels.size() == 1);
    CHECK(qpsk.levels[0].power == doctest::Approx(3.0));

    // synthetic 3-D P_c with a convex region: two levels beat always-on
    auto sph = make_pe_model("sphere:3:1.0");
    const double budget = 0.5;
    auto tx = transmitter_sharing(sph.pc_snr, sph.pc_d1_snr, budget);
    CHECK(tx.kind == SharingKind::TangentOptimal);
    REQUIRE(tx.levels.size() == 2);
    CHECK(tx.achieved_ser > sph.pc_snr(budget));

    // grid oracle over two-level strategies
    double best = sph.pc_snr(budget);
    for (double g2 : make_grid(1e-6, budget * 0.999, 40, false))
        for (double g1 : make_grid(budget, 20.0, 4000, true)) {
            double alpha = (budget - g2) / (g1 - g2);
            double v = alpha * sph.pc_snr(g1) + (1.0 - alpha) * sph.pc_snr(g2);
            best = std::max(best, v);
        }
    CHECK(tx.achieved_ser == doctest::Approx(best).epsilon(1e-4));
    CHECK(tx.threshold == doctest::Approx(1.8734949789861135).epsilon(1e-6));

    // budget beyond the tangent point: concave side, stay on
    auto high = transmitter_sharing(sph.pc_snr, sph.pc_d1_snr, 5.0);
    CHECK(high.kind == SharingKind::None);
}
