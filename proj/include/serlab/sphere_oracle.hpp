#pragma once

#include "serlab/ser_engine.hpp"

namespace serlab {

/// Spherical decision region of radius R about the transmitted point: the
/// extremal region that achieves every universal derivative bound.
struct SphereRegion {
    int n = 0;
    double radius = 0.0;
};

SphereRegion make_sphere(int n, double radius);

/// P_c = Pr[|xi| <= R] = P(n/2, snr R^2 / 2), the chi-square CDF with n
/// degrees of freedom at snr R^2.
double sphere_pc(const SphereRegion& s, double snr);

/// d^order P_c / d snr^order in closed form, u = snr R^2 / 2:
///   order 1:  u^{n/2} e^{-u} / (snr Gamma(n/2))
///   order 2:  u^{n/2} e^{-u} (n/2 - 1 - u) / (snr^2 Gamma(n/2))
double sphere_pc_d(const SphereRegion& s, double snr, int order);

/// d^order P_e / d P_N^order with P_e = 1 - P(n/2, v), v = R^2 / (2 P_N):
///   order 1:  v^{n/2} e^{-v} / (P_N Gamma(n/2))
///   order 2:  v^{n/2} e^{-v} (v - (n+2)/2) / (P_N^2 Gamma(n/2))
double sphere_pe_noise_d(const SphereRegion& s, double noise_power, int order);

struct ExtremalRadii {
    double r_lower = 0.0;        // achieves the second-derivative lower bound
    double r_upper = 0.0;        // achieves the second-derivative upper bound
    double r_first_order = 0.0;  // achieves the first-derivative bound
};

/// Radii of the bound-achieving spheres. SNR axis: sqrt((n -+ sqrt(2n))_+ /
/// snr) and sqrt(n/snr). Noise axis: sqrt(2 b2 P_N), sqrt(2 b1 P_N) and
/// sqrt(n P_N).
ExtremalRadii extremal_radii(int n, Axis axis, double value);

}  // namespace serlab
