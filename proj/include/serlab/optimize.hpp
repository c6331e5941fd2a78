#pragma once

#include <functional>
#include <vector>

#include "serlab/fading.hpp"

namespace serlab {

/// Result of the power-allocation problem: minimize the block error rate
/// 1 - prod(1 - pe(alpha_i gamma_i)) subject to sum alpha_i = m, alpha >= 0.
struct AllocationResult {
    std::vector<double> fractions;
    double multiplier = 0.0;    // shared KKT multiplier
    double objective = 0.0;     // achieved BLER
    double kkt_residual = 0.0;  // max stationarity/complementarity violation
};

/// Block error rate of m independently detected streams.
double blast_bler(const ScalarFn& pe, const std::vector<double>& fractions,
                  const std::vector<double>& stream_snrs);

/// Water-filling style solver: outer bisection on the multiplier, inner
/// bisection on each stream's fraction (the marginal value is decreasing
/// when pe is convex). A non-monotone marginal is reported as an error
/// rather than silently solved.
AllocationResult blast_allocate(const ScalarFn& pe, const ScalarFn& pe_d1,
                                const std::vector<double>& stream_snrs);

/// Sign change of a second derivative inside a bracket, found by bisection
/// after a pre-scan. Zero or multiple sign changes on the scan grid raise
/// an error (only the single-inflection case is supported).
double find_inflection_noise(const ScalarFn& pe_d2, double bracket_lo, double bracket_hi);

enum class SharingKind { None, OnOffSuboptimal, TangentOptimal };

/// Power/time sharing over at most two power levels.
struct SharingLevel {
    double fraction = 0.0;
    double power = 0.0;
};

struct SharingStrategy {
    SharingKind kind = SharingKind::None;
    std::vector<SharingLevel> levels;
    double achieved_ser = 0.0;  // time-averaged objective of the strategy
    double threshold = 0.0;     // the P_0 (or tangent P*) that produced it
};

/// On-off jammer strategy with the inflection threshold: single level at
/// the budget when budget >= P_0, else on-interval budget/P_0 at P_0.
SharingStrategy jam_suboptimal(const ScalarFn& pe, double p0, double budget);

/// Optimal jammer strategy: the threshold moves from the inflection to the
/// tangent point P* where P* pe'(P*) = pe(P*) - pe(0+), giving the concave
/// envelope through the origin side. If pe is concave on the scan grid
/// sharing cannot help and a single level is returned.
SharingStrategy jam_optimal(const ScalarFn& pe, const ScalarFn& pe_d1,
                            double p0_inflection, double budget);

/// Midpoint concavity test of a budget -> achieved-SER map.
struct ConcavityReport {
    bool pass = false;
    double worst_violation = 0.0;
    std::vector<double> violation_points;
};

ConcavityReport envelope_concavity_check(const ScalarFn& strategy_value,
                                         const std::vector<double>& budget_grid,
                                         double tol = 1e-7);

/// Transmitter-side sharing via the jammer machinery applied to P_c as a
/// function of SNR: concave P_c (1-D/2-D constellations) keeps the
/// transmitter always on, otherwise the tangent construction yields the
/// two-level strategy maximizing time-averaged P_c at a fixed mean SNR.
SharingStrategy transmitter_sharing(const ScalarFn& pc, const ScalarFn& pc_d1,
                                    double snr_budget);

}  // namespace serlab
