#include "serlab/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace serlab {

double normal_pdf(double x) {
    const double inv_sqrt_2pi = 0.39894228040143267793994605993438;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    const double inv_sqrt2 = 0.70710678118654752440084436210485;
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

double q_func(double x) {
    const double inv_sqrt2 = 0.70710678118654752440084436210485;
    return 0.5 * std::erfc(x * inv_sqrt2);
}

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int k = 0; k < 1000; ++k) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p: series failed to converge");
}

// Lentz continued fraction for Q(a, x) = 1 - P(a, x), valid for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw std::runtime_error("gamma_p: continued fraction failed to converge");
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_p: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double bessel_i0_scaled(double x) {
    if (x < 0.0) throw std::invalid_argument("bessel_i0_scaled: x must be nonnegative");
    if (x < 20.0) {
        double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-x);
    }
    // asymptotic: I0(x) e^{-x} ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k <= 30; ++k) {
        double odd = 2.0 * k - 1.0;
        double next = term * odd * odd / (8.0 * k * x);
        if (next >= term) break;  // asymptotic series started diverging
        term = next;
        sum += term;
        if (term < sum * 1e-16) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

}  // namespace serlab
