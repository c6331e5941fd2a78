#pragma once

namespace serlab {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF via erfc (accurate in both tails).
double normal_cdf(double x);

/// Gaussian tail probability Q(x) = 1 - Phi(x).
double q_func(double x);

/// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, Lentz continued fraction otherwise;
/// absolute error well below 1e-12 over the supported range.
double gamma_p(double a, double x);

/// exp(-x) * I0(x) for x >= 0: power series below x = 20, asymptotic
/// expansion above. Relative error < 1e-10.
double bessel_i0_scaled(double x);

}  // namespace serlab
