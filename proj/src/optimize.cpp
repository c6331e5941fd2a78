#include "serlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "serlab/numeric.hpp"

namespace serlab {

namespace {

constexpr double kTinySnr = 1e-12;  // stand-in argument for pe(0+)

double checked_pe(const ScalarFn& pe, double x) {
    double v = pe(std::max(x, kTinySnr));
    if (v < -1e-12 || v > 1.0 + 1e-12)
        throw std::invalid_argument("pe left [0, 1]");
    return std::min(1.0, std::max(0.0, v));
}

}  // namespace

double blast_bler(const ScalarFn& pe, const std::vector<double>& fractions,
                  const std::vector<double>& stream_snrs) {
    if (fractions.size() != stream_snrs.size())
        throw std::invalid_argument("blast_bler: fractions/snrs length mismatch");
    double prod = 1.0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (fractions[i] < 0.0) throw std::invalid_argument("blast_bler: negative fraction");
        prod *= 1.0 - checked_pe(pe, fractions[i] * stream_snrs[i]);
    }
    return 1.0 - prod;
}

AllocationResult blast_allocate(const ScalarFn& pe, const ScalarFn& pe_d1,
                                const std::vector<double>& stream_snrs) {
    const std::size_t m = stream_snrs.size();
    if (m == 0) throw std::invalid_argument("blast_allocate: no streams");
    for (double g : stream_snrs)
        if (!(g > 0.0)) throw std::invalid_argument("blast_allocate: snrs must be positive");
    const double budget = static_cast<double>(m);

    // Marginal value of stream i at fraction a: the derivative of
    // ln(1 - pe(a g_i)). Decreasing in a exactly when ln(1 - pe) is concave.
    auto marginal = [&](std::size_t i, double a) {
        const double x = std::max(a * stream_snrs[i], kTinySnr);
        const double p = checked_pe(pe, x);
        if (p >= 1.0) return 0.0;
        return -stream_snrs[i] * pe_d1(x) / (1.0 - p);
    };

    // Convexity gate: a rising marginal means pe is not convex on the range.
    for (std::size_t i = 0; i < m; ++i) {
        double prev = marginal(i, 0.0);
        for (int k = 0; k <= 64; ++k) {
            double a = 1e-4 * std::pow(10.0 * budget / 1e-4, static_cast<double>(k) / 64.0);
            double cur = marginal(i, a);
            if (cur > prev * (1.0 + 1e-9) + 1e-12)
                throw std::invalid_argument(
                    "blast_allocate: marginal value is not decreasing (pe not convex)");
            prev = cur;
        }
    }

    auto fraction_at = [&](std::size_t i, double lambda) {
        if (marginal(i, 0.0) <= lambda) return 0.0;  // complementary slackness clamp
        double hi = 1.0;
        for (int k = 0; k < 200 && marginal(i, hi) > lambda; ++k) hi *= 2.0;
        return bisect_root([&](double a) { return marginal(i, a) - lambda; }, 0.0, hi,
                           1e-12, 1e-14);
    };

    double lam_hi = 0.0;
    for (std::size_t i = 0; i < m; ++i) lam_hi = std::max(lam_hi, marginal(i, 0.0));
    if (lam_hi <= 0.0)
        throw std::invalid_argument("blast_allocate: zero marginal value everywhere");
    double lam_lo = lam_hi;
    auto total = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += fraction_at(i, lambda);
        return s;
    };
    for (int k = 0; k < 2000 && total(lam_lo) < budget; ++k) lam_lo *= 0.5;

    double lambda = lam_lo;
    for (int it = 0; it < 200; ++it) {
        lambda = 0.5 * (lam_lo + lam_hi);
        double s = total(lambda);
        if (std::abs(s - budget) <= 1e-10) break;
        (s > budget ? lam_lo : lam_hi) = lambda;
    }

    AllocationResult res;
    res.multiplier = lambda;
    res.fractions.resize(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        res.fractions[i] = fraction_at(i, lambda);
        sum += res.fractions[i];
    }
    res.objective = blast_bler(pe, res.fractions, stream_snrs);

    double resid = std::abs(sum - budget);
    for (std::size_t i = 0; i < m; ++i) {
        if (res.fractions[i] > 0.0)
            resid = std::max(resid, std::abs(marginal(i, res.fractions[i]) - lambda) / lambda);
        else
            resid = std::max(resid, std::max(0.0, marginal(i, 0.0) - lambda) / lambda);
    }
    res.kkt_residual = resid;
    return res;
}

double find_inflection_noise(const ScalarFn& pe_d2, double bracket_lo, double bracket_hi) {
    if (!(bracket_lo > 0.0) || !(bracket_lo < bracket_hi))
        throw std::invalid_argument("find_inflection_noise: bad bracket");
    const int scan = 512;
    double prev_x = bracket_lo;
    double prev_v = pe_d2(bracket_lo);
    int flips = 0;
    double flip_lo = 0.0, flip_hi = 0.0;
    for (int k = 1; k < scan; ++k) {
        double x = bracket_lo * std::pow(bracket_hi / bracket_lo, static_cast<double>(k) / (scan - 1));
        double v = pe_d2(x);
        if (v != 0.0 && prev_v != 0.0 && (v > 0) != (prev_v > 0)) {
            ++flips;
            flip_lo = prev_x;
            flip_hi = x;
        }
        prev_x = x;
        prev_v = v;
    }
    if (flips == 0)
        throw std::invalid_argument("find_inflection_noise: no sign change in bracket");
    if (flips > 1)
        throw std::invalid_argument(
            "find_inflection_noise: multiple inflection points (unsupported)");
    return bisect_root(pe_d2, flip_lo, flip_hi, 1e-8);
}

namespace {

SharingStrategy single_level(const ScalarFn& f, double budget, double threshold) {
    SharingStrategy s;
    s.kind = SharingKind::None;
    s.levels = {{1.0, budget}};
    s.achieved_ser = checked_pe(f, budget);
    s.threshold = threshold;
    return s;
}

SharingStrategy two_level(const ScalarFn& f, double budget, double threshold,
                          SharingKind kind) {
    SharingStrategy s;
    s.kind = kind;
    const double alpha = budget / threshold;
    s.levels = {{alpha, threshold}, {1.0 - alpha, 0.0}};
    const double f0 = checked_pe(f, 0.0);
    s.achieved_ser = alpha * checked_pe(f, threshold) + (1.0 - alpha) * f0;
    s.threshold = threshold;
    return s;
}

// True when d1 never rises on a log grid spanning the range of interest.
bool concave_on_scan(const ScalarFn& d1, double lo, double hi) {
    const int scan = 256;
    double prev = d1(lo);
    for (int k = 1; k < scan; ++k) {
        double x = lo * std::pow(hi / lo, static_cast<double>(k) / (scan - 1));
        double cur = d1(x);
        if (cur > prev + 1e-12 + 1e-9 * std::abs(prev)) return false;
        prev = cur;
    }
    return true;
}

// Tangent-from-the-left threshold: the P* where the chord from (0, f(0+))
// touches f, i.e. P f'(P) = f(P) - f(0+). g starts positive at the
// inflection of a convex-then-concave f and turns negative as the concave
// part flattens; the bracket is expanded geometrically until it does.
double tangent_threshold(const ScalarFn& f, const ScalarFn& f_d1, double p0) {
    const double f0 = checked_pe(f, 0.0);
    auto g = [&](double p) { return p * f_d1(p) - (checked_pe(f, p) - f0); };
    if (g(p0) <= 0.0) return p0;  // degenerate: the inflection already is the tangent point
    double hi = p0;
    for (int k = 0; k < 200; ++k) {
        hi *= 2.0;
        if (g(hi) < 0.0)
            return bisect_root(g, hi / 2.0, hi, 1e-10);
    }
    throw std::runtime_error(
        "tangent threshold: no sign change after bracket expansion (curve never flattens)");
}

}  // namespace

SharingStrategy jam_suboptimal(const ScalarFn& pe, double p0, double budget) {
    if (!(p0 > 0.0) || !(budget > 0.0))
        throw std::invalid_argument("jam_suboptimal: threshold and budget must be positive");
    if (budget >= p0) return single_level(pe, budget, p0);
    return two_level(pe, budget, p0, SharingKind::OnOffSuboptimal);
}

SharingStrategy jam_optimal(const ScalarFn& pe, const ScalarFn& pe_d1, double p0_inflection,
                            double budget) {
    if (!(p0_inflection > 0.0) || !(budget > 0.0))
        throw std::invalid_argument("jam_optimal: threshold and budget must be positive");
    const double lo = std::min(budget, p0_inflection) / 100.0;
    const double hi = std::max(budget, p0_inflection) * 100.0;
    if (concave_on_scan(pe_d1, lo, hi)) return single_level(pe, budget, 0.0);
    const double pstar = tangent_threshold(pe, pe_d1, p0_inflection);
    if (budget >= pstar) return single_level(pe, budget, pstar);
    return two_level(pe, budget, pstar, SharingKind::TangentOptimal);
}

ConcavityReport envelope_concavity_check(const ScalarFn& strategy_value,
                                         const std::vector<double>& budget_grid,
                                         double tol) {
    if (budget_grid.size() < 3)
        throw std::invalid_argument("envelope_concavity_check: need at least 3 budgets");
    ConcavityReport rep;
    rep.pass = true;
    for (std::size_t k = 1; k + 1 < budget_grid.size(); ++k) {
        const double mid = 0.5 * (budget_grid[k - 1] + budget_grid[k + 1]);
        const double chord =
            0.5 * (strategy_value(budget_grid[k - 1]) + strategy_value(budget_grid[k + 1]));
        const double d = strategy_value(mid) - chord;
        if (d < -tol) {
            rep.pass = false;
            rep.worst_violation = std::min(rep.worst_violation, d);
            rep.violation_points.push_back(mid);
        }
    }
    return rep;
}

SharingStrategy transmitter_sharing(const ScalarFn& pc, const ScalarFn& pc_d1,
                                    double snr_budget) {
    if (!(snr_budget > 0.0))
        throw std::invalid_argument("transmitter_sharing: budget must be positive");
    const double lo = snr_budget / 100.0;
    const double hi = snr_budget * 100.0;
    if (concave_on_scan(pc_d1, lo, hi)) return single_level(pc, snr_budget, 0.0);
    // convex-then-concave P_c: the inflection maximizes the first derivative
    const double p0 = golden_min([&](double g) { return -pc_d1(g); }, lo, hi, 1e-10 * hi);
    const double gstar = tangent_threshold(pc, pc_d1, p0);
    if (snr_budget >= gstar) return single_level(pc, snr_budget, gstar);
    return two_level(pc, snr_budget, gstar, SharingKind::TangentOptimal);
}

}  // namespace serlab
