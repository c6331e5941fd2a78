#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "serlab/constellation.hpp"

namespace serlab {

enum class Axis { Snr, Noise };

inline const char* axis_name(Axis a) { return a == Axis::Snr ? "snr" : "noise"; }

/// Per-dimension AWGN description: snr = 1 / sigma0^2.
struct NoiseModel {
    int n = 0;
    double snr = 0.0;

    double noise_power() const { return 1.0 / snr; }

    static NoiseModel from_snr(int n, double snr);
    static NoiseModel from_noise_power(int n, double noise_power);
};

/// Gaussian density (2 pi sigma0^2)^{-n/2} exp(-|x|^2 / (2 sigma0^2)) with
/// sigma0^2 = 1/snr.
double noise_pdf(const std::vector<double>& x, double snr);

/// Minimum-distance decision, ties to the lowest index.
int ml_detect(const std::vector<double>& r, const Constellation& c);

/// Ratio (d^order p / d snr^order) / p as a function of t = |x|^2.
/// Order 1: (n/snr - t) / 2.  Order 2: (t - a1/snr)(t - a2/snr) / 4 with
/// a1 = n + sqrt(2n), a2 = n - sqrt(2n).
double deriv_weight_snr(double t, int n, double snr, int order);
double deriv_weight_snr(const std::vector<double>& x, double snr, int order);

/// Same ratio for the noise-power axis (sigma0^2 = P_N).
/// Order 1: (t/P - n) / (2P).  Order 2: (u - 2 b1)(u - 2 b2) / (4 P^2) with
/// u = t/P and b1,2 = ((n+2) +- sqrt(2(n+2))) / 2.
double deriv_weight_noise(double t, int n, double noise_power, int order);
double deriv_weight_noise(const std::vector<double>& x, double noise_power, int order);

struct PointEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct SerEstimate {
    std::vector<double> per_point;     // P_ei
    std::vector<double> per_point_se;
    double pe = 0.0;
    double pe_se = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Monte Carlo SER: the sample budget is apportioned across points by their
/// priors, each point's share conditioned on that point being sent.
/// Deterministic given the seed, independent of the thread count.
SerEstimate ser_mc(const Constellation& c, double snr, std::uint64_t samples,
                   std::uint64_t seed, unsigned threads = 0);

/// P_ei of a single point with the full sample budget.
PointEstimate point_ser_mc(const Constellation& c, int i, double snr,
                           std::uint64_t samples, std::uint64_t seed,
                           unsigned threads = 0);

/// Deterministic SER: 1-D by Gaussian CDF differences over the region
/// interval, 2-D by adaptive quadrature over the polyhedron clipped to a
/// 10-sigma box. Dimensions above 2 raise capability_error.
double ser_quadrature(const Constellation& c, double snr);
double point_ser_quadrature(const Constellation& c, int i, double snr);

using Membership = std::function<bool(const std::vector<double>&)>;

/// E[weight * indicator] estimate of d^order Pr[xi in region] / d axis^order.
PointEstimate region_derivative_mc(const Membership& inside, int n, Axis axis,
                                   double value, int order, std::uint64_t samples,
                                   std::uint64_t seed, unsigned threads = 0,
                                   std::uint64_t stream_tag = 0);

/// Plain MC probability of the region under the same noise draw scheme.
PointEstimate region_prob_mc(const Membership& inside, int n, Axis axis,
                             double value, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads = 0, std::uint64_t stream_tag = 0);

/// Derivative of P_ci for point i on the chosen axis (the P_ei derivative
/// is its negation), via the in-integral weights.
PointEstimate ser_derivative_mc(const Constellation& c, int i, Axis axis,
                                double value, int order, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads = 0);

enum class Quantity { Pe, Pei, Pc, D1, D2 };
enum class Method { Mc, Quadrature };

/// A sampled curve over an SNR or noise-power grid.
struct CurveEstimate {
    Axis axis = Axis::Snr;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> std_errors;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string quantity;  // "pe", "pei[2]", "pc", "d1", "d2"
    std::string method;    // "mc", "quadrature", "closed-form"
    int order = 0;         // 1 or 2 for derivative curves
};

/// Apply the chosen estimator at every grid point with common random
/// numbers (the noise substreams do not depend on the grid value).
/// D1/D2 are derivatives of the average P_e on the curve's axis.
CurveEstimate curve(const Constellation& c, Axis axis, const std::vector<double>& grid,
                    Quantity q, int point_index, Method method, std::uint64_t samples,
                    std::uint64_t seed, unsigned threads = 0);

}  // namespace serlab
