#include "serlab/sphere_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "serlab/special.hpp"

namespace serlab {

SphereRegion make_sphere(int n, double radius) {
    if (n < 1) throw std::invalid_argument("sphere: n must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("sphere: radius must be positive");
    return {n, radius};
}

double sphere_pc(const SphereRegion& s, double snr) {
    if (!(snr > 0.0)) throw std::invalid_argument("sphere_pc: snr must be positive");
    return gamma_p(0.5 * s.n, 0.5 * snr * s.radius * s.radius);
}

namespace {

// u^{n/2} e^{-u} / Gamma(n/2), evaluated in log space to survive extremes.
double gamma_kernel(double half_n, double u) {
    if (u <= 0.0) return 0.0;
    return std::exp(half_n * std::log(u) - u - std::lgamma(half_n));
}

}  // namespace

double sphere_pc_d(const SphereRegion& s, double snr, int order) {
    if (!(snr > 0.0)) throw std::invalid_argument("sphere_pc_d: snr must be positive");
    const double half_n = 0.5 * s.n;
    const double u = 0.5 * snr * s.radius * s.radius;
    const double k = gamma_kernel(half_n, u);
    if (order == 1) return k / snr;
    if (order == 2) return k * (half_n - 1.0 - u) / (snr * snr);
    throw std::invalid_argument("sphere_pc_d: order must be 1 or 2");
}

double sphere_pe_noise_d(const SphereRegion& s, double noise_power, int order) {
    if (!(noise_power > 0.0))
        throw std::invalid_argument("sphere_pe_noise_d: noise power must be positive");
    const double half_n = 0.5 * s.n;
    const double v = 0.5 * s.radius * s.radius / noise_power;
    const double k = gamma_kernel(half_n, v);
    if (order == 1) return k / noise_power;
    if (order == 2) return k * (v - (half_n + 1.0)) / (noise_power * noise_power);
    throw std::invalid_argument("sphere_pe_noise_d: order must be 1 or 2");
}

ExtremalRadii extremal_radii(int n, Axis axis, double value) {
    if (n < 1) throw std::invalid_argument("extremal_radii: n must be >= 1");
    if (!(value > 0.0)) throw std::invalid_argument("extremal_radii: value must be positive");
    ExtremalRadii r;
    const double dn = static_cast<double>(n);
    if (axis == Axis::Snr) {
        const double root = std::sqrt(2.0 * dn);
        r.r_lower = std::sqrt(std::max(0.0, dn - root) / value);
        r.r_upper = std::sqrt((dn + root) / value);
        r.r_first_order = std::sqrt(dn / value);
    } else {
        const double root = std::sqrt(2.0 * (dn + 2.0));
        const double b1 = 0.5 * (dn + 2.0 + root);
        const double b2 = 0.5 * (dn + 2.0 - root);
        r.r_lower = std::sqrt(2.0 * b2 * value);
        r.r_upper = std::sqrt(2.0 * b1 * value);
        r.r_first_order = std::sqrt(dn * value);
    }
    return r;
}

}  // namespace serlab
