#include "serlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace serlab {

namespace {

double gamma_kernel(double half_n, double u) {
    if (u <= 0.0) return 0.0;
    return std::exp(half_n * std::log(u) - u - std::lgamma(half_n));
}

}  // namespace

BoundSet coefficients(int n) {
    if (n < 1) throw std::invalid_argument("coefficients: n must be >= 1");
    BoundSet bs;
    bs.n = n;
    const double dn = static_cast<double>(n);
    const double half_n = 0.5 * dn;
    bs.c_n = gamma_kernel(half_n, half_n);

    const double root = std::sqrt(2.0 * dn);
    bs.a_n = 0.5 * (2.0 + root);
    bs.b_n = 0.5 * (2.0 - root);
    const double u_u = 0.5 * (dn + root);
    const double u_l = 0.5 * (dn - root);
    bs.beta_u = bs.a_n * gamma_kernel(half_n, u_u);
    bs.beta_l = bs.b_n >= 0.0 ? 0.0 : bs.b_n * gamma_kernel(half_n, std::max(0.0, u_l));

    const double root2 = std::sqrt(2.0 * (dn + 2.0));
    bs.b_1 = 0.5 * (dn + 2.0 + root2);
    bs.b_2 = 0.5 * (dn + 2.0 - root2);
    const double factor = std::sqrt(0.5 * (dn + 2.0));
    bs.b_u = factor * gamma_kernel(half_n, bs.b_1);
    bs.b_l = -factor * gamma_kernel(half_n, bs.b_2);
    return bs;
}

double beta_u_transcribed(int n) {
    if (n < 1) throw std::invalid_argument("beta_u_transcribed: n must be >= 1");
    const double a_n = 0.5 * (2.0 + std::sqrt(2.0 * n));
    return a_n * gamma_kernel(0.5 * n, a_n);
}

std::pair<double, double> RegimeReport::inflection_bracket() const {
    return {small_mode_cutoff.value_or(0.0), large_mode_onset};
}

namespace {

ModeThresholds thresholds_impl(Axis axis, int n, double d_min, double d_max) {
    const double dn = static_cast<double>(n);
    // snr: thresholds in gamma via (n -+ sqrt(2n)) / d^2
    // noise: thresholds in P_N via d^2 / (n + 2 -+ sqrt(2(n+2)))
    const double hi_coef =
        axis == Axis::Snr ? dn + std::sqrt(2.0 * dn) : dn + 2.0 - std::sqrt(2.0 * (dn + 2.0));
    const double lo_coef =
        axis == Axis::Snr ? dn - std::sqrt(2.0 * dn) : dn + 2.0 + std::sqrt(2.0 * (dn + 2.0));
    ModeThresholds t;
    if (axis == Axis::Snr) {
        // large-SNR mode needs d_min; the small mode needs finite d_max
        t.large_mode_onset = hi_coef / (d_min * d_min);
        if (lo_coef > 0.0 && !std::isinf(d_max)) t.small_mode_cutoff = lo_coef / (d_max * d_max);
    } else {
        t.large_mode_onset = std::isinf(d_max) ? std::numeric_limits<double>::infinity()
                                               : d_max * d_max / hi_coef;
        t.small_mode_cutoff = d_min * d_min / lo_coef;
    }
    return t;
}

RegimeReport regimes_impl(const Constellation& c, Axis axis, bool per_point) {
    RegimeReport rep;
    rep.axis = axis;
    rep.n = c.n;

    double gmin = std::numeric_limits<double>::infinity();
    double gmax = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        auto e = region_extremes(decision_region(c, i));
        gmin = std::min(gmin, e.d_min);
        gmax = std::max(gmax, e.d_max);
        if (per_point) {
            auto t = thresholds_impl(axis, c.n, e.d_min, e.d_max);
            RegimeReport::PerPoint pp;
            pp.index = i;
            pp.d_min = e.d_min;
            pp.d_max = e.d_max;
            pp.large_mode_onset = t.large_mode_onset;
            pp.small_mode_cutoff = t.small_mode_cutoff;
            rep.per_point.push_back(pp);
        }
    }
    rep.d_min = gmin;
    rep.d_max = gmax;
    rep.always_convex = axis == Axis::Snr && c.n <= 2;
    auto t = thresholds_impl(axis, c.n, gmin, gmax);
    rep.large_mode_onset = t.large_mode_onset;
    rep.small_mode_cutoff = t.small_mode_cutoff;
    rep.small_mode_empty = !rep.small_mode_cutoff.has_value();
    rep.large_mode_empty = std::isinf(rep.large_mode_onset);
    return rep;
}

}  // namespace

RegimeReport snr_regimes(const Constellation& c, bool per_point) {
    return regimes_impl(c, Axis::Snr, per_point);
}

RegimeReport noise_regimes(const Constellation& c, bool per_point) {
    return regimes_impl(c, Axis::Noise, per_point);
}

ModeThresholds snr_thresholds(int n, double d_min, double d_max) {
    return thresholds_impl(Axis::Snr, n, d_min, d_max);
}

ModeThresholds noise_thresholds(int n, double d_min, double d_max) {
    return thresholds_impl(Axis::Noise, n, d_min, d_max);
}

BoundCheckReport check_derivative_bounds(const CurveEstimate& curve, const BoundSet& bs,
                                         double k_sigma) {
    if (curve.order != 1 && curve.order != 2)
        throw std::invalid_argument("check_derivative_bounds: curve is not a derivative");
    BoundCheckReport rep;
    rep.k_sigma = k_sigma;
    rep.label = std::string(axis_name(curve.axis)) + " order-" + std::to_string(curve.order);
    rep.pass = true;
    double closest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < curve.grid.size(); ++k) {
        const double x = curve.grid[k];
        double lower = 0.0, upper = 0.0;
        if (curve.axis == Axis::Snr) {
            if (curve.order == 1) {
                lower = -bs.c_n / x;
                upper = 0.0;
            } else {
                lower = bs.beta_l / (x * x);
                upper = bs.beta_u / (x * x);
            }
        } else {
            if (curve.order == 1) {
                lower = 0.0;
                upper = bs.c_n / x;
            } else {
                lower = bs.b_l / (x * x);
                upper = bs.b_u / (x * x);
            }
        }
        BoundCheckRow row;
        row.x = x;
        row.estimate = curve.values[k];
        row.std_error = curve.std_errors[k];
        row.lower = lower;
        row.upper = upper;
        const double slack = k_sigma * row.std_error;
        row.pass = row.estimate >= lower - slack && row.estimate <= upper + slack;
        row.margin = std::min(row.estimate - lower, upper - row.estimate);
        if (!row.pass) rep.pass = false;
        if (row.margin < closest) {
            closest = row.margin;
            rep.closest_index = static_cast<int>(k);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

InflectionScan inflection_scan(const CurveEstimate& curve, double bracket_lo,
                               double bracket_hi, double significance) {
    if (curve.order != 2)
        throw std::invalid_argument("inflection_scan: curve must be an order-2 derivative");
    if (!(bracket_lo < bracket_hi) || bracket_lo < curve.grid.front() ||
        bracket_hi > curve.grid.back())
        throw std::invalid_argument("inflection_scan: bracket outside the curve grid");

    InflectionScan scan;
    double prev_val = 0.0, prev_x = 0.0;
    bool have_prev = false;
    for (std::size_t k = 0; k < curve.grid.size(); ++k) {
        const double x = curve.grid[k];
        if (x < bracket_lo || x > bracket_hi) continue;
        const double v = curve.values[k];
        const double se = curve.std_errors[k];
        if (std::abs(v) <= significance * se) {
            ++scan.unresolved;
            continue;
        }
        if (have_prev && (v > 0) != (prev_val > 0)) {
            // linear interpolation between the two significant estimates
            double t = prev_val / (prev_val - v);
            scan.crossings.push_back(prev_x + t * (x - prev_x));
        }
        prev_val = v;
        prev_x = x;
        have_prev = true;
    }
    return scan;
}

LogConcavityReport log_concavity_check(const CurveEstimate& curve, double k_sigma) {
    LogConcavityReport rep;
    rep.pass = true;
    rep.worst_margin = -std::numeric_limits<double>::infinity();
    const auto& g = curve.grid;
    const auto& v = curve.values;
    const auto& se = curve.std_errors;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!(v[k] > 0.0))
            throw std::invalid_argument("log_concavity_check: curve values must be positive");

    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        // second divided difference of log values on the (possibly nonuniform) grid
        const double dl = (std::log(v[k]) - std::log(v[k - 1])) / (g[k] - g[k - 1]);
        const double dr = (std::log(v[k + 1]) - std::log(v[k])) / (g[k + 1] - g[k]);
        const double d2 = dr - dl;
        // sigma of log v is se/v; propagate through the two slopes
        const double sl = 1.0 / (g[k] - g[k - 1]);
        const double sr = 1.0 / (g[k + 1] - g[k]);
        const double var = (se[k - 1] / v[k - 1]) * (se[k - 1] / v[k - 1]) * sl * sl +
                           (se[k] / v[k]) * (se[k] / v[k]) * (sl + sr) * (sl + sr) +
                           (se[k + 1] / v[k + 1]) * (se[k + 1] / v[k + 1]) * sr * sr;
        const double margin = d2 - k_sigma * std::sqrt(var);
        if (margin > rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_index = static_cast<int>(k);
        }
        if (margin > 0.0) rep.pass = false;
    }
    return rep;
}

}  // namespace serlab
