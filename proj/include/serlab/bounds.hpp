#pragma once

#include <optional>
#include <string>
#include <vector>

#include "serlab/constellation.hpp"
#include "serlab/ser_engine.hpp"

namespace serlab {

/// Universal derivative-bound coefficients for dimension n. The beta pair
/// bounds snr^2 P''_e, the b pair bounds P_N^2 P''_e; c_n bounds the first
/// derivatives on both axes.
struct BoundSet {
    int n = 0;
    double c_n = 0.0;
    double beta_l = 0.0;  // <= 0; zero for n <= 2
    double beta_u = 0.0;
    double b_l = 0.0;  // < 0
    double b_u = 0.0;
    double b_1 = 0.0;  // ((n+2) + sqrt(2(n+2))) / 2
    double b_2 = 0.0;  // ((n+2) - sqrt(2(n+2))) / 2
    double a_n = 0.0;  // (2 + sqrt(2n)) / 2, kept for reporting
    double b_n = 0.0;  // (2 - sqrt(2n)) / 2, kept for reporting
};

/// All coefficients. The beta pair is computed from the spherical oracle's
/// closed form at the extremal arguments u = (n -+ sqrt(2n))/2; see
/// beta_u_transcribed for the literal printed variant it replaces.
BoundSet coefficients(int n);

/// The second-derivative upper coefficient transcribed literally from the
/// printed formula, a_n^{n/2+1} e^{-a_n} / Gamma(n/2). Coincides with the
/// oracle-consistent value only at n = 2; reported side by side so the
/// discrepancy stays visible.
double beta_u_transcribed(int n);

/// Convexity/concavity regime thresholds for one axis. A threshold of
/// +infinity (onset) or a missing small-mode cutoff means the regime is
/// empty.
struct RegimeReport {
    Axis axis = Axis::Snr;
    int n = 0;
    bool always_convex = false;  // snr axis with n <= 2
    double d_min = 0.0;
    double d_max = 0.0;  // +infinity when any region is unbounded

    // Global thresholds (Corollary substitutions d_min / d_max):
    double large_mode_onset = 0.0;           // convex (snr) / concave (noise) beyond this
    std::optional<double> small_mode_cutoff;  // regime empty when absent
    bool small_mode_empty = false;
    bool large_mode_empty = false;  // noise axis with unbounded regions

    struct PerPoint {
        int index = 0;
        double d_min = 0.0;
        double d_max = 0.0;
        double large_mode_onset = 0.0;
        std::optional<double> small_mode_cutoff;
    };
    std::vector<PerPoint> per_point;

    /// Intermediate interval [cutoff, onset] that can hold inflection
    /// points; the low end collapses to 0 when the small mode is empty and
    /// the high end is +infinity when the large mode is empty.
    std::pair<double, double> inflection_bracket() const;
};

RegimeReport snr_regimes(const Constellation& c, bool per_point = false);
RegimeReport noise_regimes(const Constellation& c, bool per_point = false);

/// The raw threshold formulas for one region's distances; used directly
/// for synthetic regions. snr: onset (n+sqrt(2n))/d_min^2, cutoff
/// (n-sqrt(2n))/d_max^2. noise: onset d_max^2/(n+2-sqrt(2(n+2))), cutoff
/// d_min^2/(n+2+sqrt(2(n+2))).
struct ModeThresholds {
    double large_mode_onset = 0.0;
    std::optional<double> small_mode_cutoff;
};

ModeThresholds snr_thresholds(int n, double d_min, double d_max);
ModeThresholds noise_thresholds(int n, double d_min, double d_max);

/// Per-grid-point envelope test of a derivative curve against the
/// universal bounds, with a k-sigma Monte Carlo allowance.
struct BoundCheckRow {
    double x = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double margin = 0.0;  // min slack against either side, in absolute units
    bool pass = false;
};

struct BoundCheckReport {
    std::string label;
    bool pass = false;
    std::vector<BoundCheckRow> rows;
    int closest_index = -1;  // grid point of closest approach
    double k_sigma = 4.0;
};

BoundCheckReport check_derivative_bounds(const CurveEstimate& curve, const BoundSet& bs,
                                         double k_sigma = 4.0);

/// Significant sign changes of an order-2 curve inside a bracket. Only
/// changes between consecutive 3-sigma-significant estimates count;
/// near-zero stretches in between are reported as unresolved.
struct InflectionScan {
    std::vector<double> crossings;  // interpolated abscissas
    int unresolved = 0;             // sub-significance grid points inside the bracket
    bool odd_count() const { return crossings.size() % 2 == 1; }
};

InflectionScan inflection_scan(const CurveEstimate& curve, double bracket_lo,
                               double bracket_hi, double significance = 3.0);

/// Discrete log-concavity test of a positive P_ci curve: second divided
/// differences of log values must not exceed k sigma of their propagated
/// error.
struct LogConcavityReport {
    bool pass = false;
    double worst_margin = 0.0;  // most positive (D - k sigma_D); <= 0 passes
    int worst_index = -1;
};

LogConcavityReport log_concavity_check(const CurveEstimate& curve, double k_sigma = 4.0);

}  // namespace serlab
