#include "serlab/fading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "serlab/numeric.hpp"
#include "serlab/special.hpp"

namespace serlab {

FadingModel make_fading(FadingFamily family, double mean_snr, double param) {
    if (!(mean_snr > 0.0)) throw std::invalid_argument("fading: mean snr must be positive");
    switch (family) {
        case FadingFamily::Rayleigh:
            break;
        case FadingFamily::Rice:
            if (param < 0.0) throw std::invalid_argument("fading: Rice K must be >= 0");
            break;
        case FadingFamily::Nakagami:
            if (!(param >= 0.5)) throw std::invalid_argument("fading: Nakagami m must be >= 0.5");
            break;
        case FadingFamily::LogNormal:
            if (!(param > 0.0)) throw std::invalid_argument("fading: sigma_dB must be positive");
            break;
    }
    return {family, param, mean_snr};
}

FadingModel make_fading(const std::string& spec, double mean_snr) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    double param = 0.0;
    if (colon != std::string::npos) param = std::stod(spec.substr(colon + 1));
    if (head == "rayleigh") return make_fading(FadingFamily::Rayleigh, mean_snr);
    if (head == "rice") return make_fading(FadingFamily::Rice, mean_snr, param);
    if (head == "nakagami") return make_fading(FadingFamily::Nakagami, mean_snr, param);
    if (head == "lognormal") return make_fading(FadingFamily::LogNormal, mean_snr, param);
    throw std::invalid_argument("unknown fading model: " + spec);
}

double fading_pdf(const FadingModel& f, double snr) {
    if (snr < 0.0) throw std::invalid_argument("fading_pdf: snr must be >= 0");
    const double g0 = f.mean_snr;
    switch (f.family) {
        case FadingFamily::Rayleigh:
            return std::exp(-snr / g0) / g0;
        case FadingFamily::Rice: {
            const double k = f.param;
            const double arg = 2.0 * std::sqrt(k * (1.0 + k) * snr / g0);
            // I0 enters exponentially; fold its scale into the main exponent
            return (1.0 + k) / g0 * std::exp(-k - (1.0 + k) * snr / g0 + arg) *
                   bessel_i0_scaled(arg);
        }
        case FadingFamily::Nakagami: {
            const double m = f.param;
            if (snr == 0.0) {
                if (m == 1.0) return 1.0 / g0;
                return m < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
            }
            return std::exp(m * std::log(m / g0) + (m - 1.0) * std::log(snr) -
                            m * snr / g0 - std::lgamma(m));
        }
        case FadingFamily::LogNormal: {
            if (snr == 0.0) return 0.0;
            const double sigma = std::log(10.0) / 10.0 * f.param;
            const double mu = std::log(g0);  // dB-average anchoring: median = g0
            const double z = (std::log(snr) - mu) / sigma;
            return std::exp(-0.5 * z * z) / (snr * sigma * std::sqrt(2.0 * M_PI));
        }
    }
    throw std::logic_error("fading_pdf: unknown family");
}

bool scale_family_check(const FadingModel& f) {
    const double g0 = f.mean_snr;
    const double ratios[] = {0.05, 0.2, 0.5, 1.0, 1.5, 2.5, 4.0, 8.0};
    const double scales[] = {0.5, 2.0, 5.0};
    for (double c : scales) {
        FadingModel scaled = f;
        scaled.mean_snr = c * g0;
        for (double t : ratios) {
            const double g = t * g0;
            const double lhs = g0 * fading_pdf(f, g);
            const double rhs = c * g0 * fading_pdf(scaled, c * g);
            if (std::abs(lhs - rhs) > 1e-9) return false;
        }
    }
    // The condition anchors the collapse at the average SNR, so the stated
    // mean must be the distribution's actual mean.
    double mean = integrate(
        [&](double t) { return t * g0 * g0 * fading_pdf(f, t * g0); }, 0.0,
        std::numeric_limits<double>::infinity(), 1e-10);
    return std::abs(mean - g0) <= 1e-6 * g0;
}

double average_ser(const ScalarFn& pe, const FadingModel& f, double tol) {
    const double g0 = f.mean_snr;
    auto integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        double v = pe(t * g0);
        if (v < -1e-12 || v > 1.0 + 1e-12)
            throw std::invalid_argument("average_ser: pe left [0, 1]");
        return v * g0 * fading_pdf(f, t * g0);
    };
    double err = 0.0;
    double v = integrate(integrand, 0.0, std::numeric_limits<double>::infinity(),
                         std::min(tol, 1e-10), &err);
    // the Gauss-Kronrod estimate is conservative by orders of magnitude;
    // this guards against outright non-convergence only
    if (!(err < 1e-5))
        throw std::runtime_error("average_ser: quadrature did not converge");
    return std::min(1.0, std::max(0.0, v));
}

ScalarFn pe_from_curve(const CurveEstimate& curve) {
    if (curve.grid.size() < 2)
        throw std::invalid_argument("pe_from_curve: need at least 2 samples");
    MonotoneCubic interp(curve.grid, curve.values);
    const double lo_x = curve.grid.front();
    const double hi_x = curve.grid.back();
    const double below = *std::max_element(curve.values.begin(), curve.values.end());
    const double above = curve.values.back();
    return [interp, lo_x, hi_x, below, above](double g) {
        double v = g <= lo_x ? below : g >= hi_x ? above : interp(g);
        return std::min(1.0, std::max(0.0, v));
    };
}

JensenResult jensen_check(const ScalarFn& pe, const FadingModel& f) {
    JensenResult r;
    r.average = average_ser(pe, f);
    r.pe_at_mean = pe(f.mean_snr);
    r.gap = r.average - r.pe_at_mean;
    return r;
}

AvgConvexityReport avg_convexity_check(const ScalarFn& pe, FadingFamily family,
                                       double param, const std::vector<double>& mean_grid,
                                       double rel_tol) {
    if (mean_grid.size() < 3)
        throw std::invalid_argument("avg_convexity_check: need at least 3 grid points");
    AvgConvexityReport rep;
    rep.pass = true;
    rep.worst_violation = 0.0;
    for (double g0 : mean_grid)
        rep.averaged.push_back(average_ser(pe, make_fading(family, g0, param)));
    for (std::size_t k = 1; k + 1 < mean_grid.size(); ++k) {
        // chord-above-curve test at the middle abscissa
        const double w = (mean_grid[k + 1] - mean_grid[k]) / (mean_grid[k + 1] - mean_grid[k - 1]);
        const double chord = w * rep.averaged[k - 1] + (1.0 - w) * rep.averaged[k + 1];
        const double d = chord - rep.averaged[k];
        const double tol = rel_tol * std::max(rep.averaged[k], 1e-300);
        if (d < -tol) {
            rep.pass = false;
            rep.worst_violation = std::min(rep.worst_violation, d);
        }
    }
    return rep;
}

}  // namespace serlab
