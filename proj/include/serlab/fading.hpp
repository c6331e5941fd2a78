#pragma once

#include <functional>
#include <string>

#include "serlab/ser_engine.hpp"

namespace serlab {

enum class FadingFamily { Rayleigh, Rice, Nakagami, LogNormal };

/// Instantaneous-SNR distribution of a flat fading channel. Rayleigh, Rice
/// and Nakagami are parametrized by their linear mean SNR. LogNormal is the
/// conventional shadowing model anchored at its dB-domain average (the
/// median of the linear SNR), so its linear mean exceeds mean_snr by
/// exp(sigma^2/2); it exists as the negative case for the scale-family
/// check and is rejected there.
struct FadingModel {
    FadingFamily family = FadingFamily::Rayleigh;
    double param = 0.0;  // Rice K, Nakagami m, LogNormal sigma_dB
    double mean_snr = 0.0;
};

FadingModel make_fading(FadingFamily family, double mean_snr, double param = 0.0);

/// Parse CLI strings: "rayleigh", "rice:K", "nakagami:m", "lognormal:sigma_db".
FadingModel make_fading(const std::string& spec, double mean_snr);

/// Density of the instantaneous SNR. All families integrate to 1.
double fading_pdf(const FadingModel& f, double snr);

/// Tests the scale-family condition that makes averaging preserve
/// convexity: the normalized density must collapse onto one shape under
/// (snr, mean) -> (c snr, c mean), and the anchoring mean must equal the
/// distribution's actual mean. Rayleigh/Rice/Nakagami pass; LogNormal fails
/// the mean anchoring.
bool scale_family_check(const FadingModel& f);

using ScalarFn = std::function<double(double)>;

/// Fading-averaged SER by adaptive quadrature on t = snr / mean_snr.
double average_ser(const ScalarFn& pe, const FadingModel& f, double tol = 1e-8);

/// Wrap a sampled curve as a smooth pe(snr) callable: shape-preserving
/// monotone cubic through the samples, clamped to [0, 1]; constant beyond
/// the last grid point, the curve's maximum value below the first.
ScalarFn pe_from_curve(const CurveEstimate& curve);

struct JensenResult {
    double average = 0.0;
    double pe_at_mean = 0.0;
    double gap = 0.0;  // average - pe(mean); >= 0 for convex pe
};

JensenResult jensen_check(const ScalarFn& pe, const FadingModel& f);

/// Convexity of the averaged SER in the mean SNR by second differences
/// over the grid; violations beyond the relative tolerance fail.
struct AvgConvexityReport {
    bool pass = false;
    double worst_violation = 0.0;  // most negative scaled second difference
    std::vector<double> averaged;  // the curve over the mean-SNR grid
};

AvgConvexityReport avg_convexity_check(const ScalarFn& pe, FadingFamily family,
                                       double param, const std::vector<double>& mean_grid,
                                       double rel_tol = 1e-7);

}  // namespace serlab
