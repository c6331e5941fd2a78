#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace serlab {

/// Thrown when a request exceeds a documented capability limit
/// (e.g. quadrature above 2-D, vertex enumeration past the combinatorial cap).
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- deterministic stream splitting -------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derive an independent substream seed from (seed, stream, chunk).
/// Fixed mixing chain; the same triple always yields the same seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xD1B54A32D192ED03ull;
    std::uint64_t b = splitmix64(s);
    s ^= chunk * 0x8CB92BA72F3D8DD7ull;
    std::uint64_t c = splitmix64(s);
    return a ^ (b + 0x165667B19E3779F9ull) ^ (c << 1);
}

// --- 1-D quadrature ------------------------------------------------------

/// Adaptive Gauss-Kronrod integration of f over [a, b].
/// Either endpoint may be infinite. `tol` is the target on the error
/// estimate relative to the L1 norm of the integrand.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, double* err_estimate = nullptr);

// --- root finding / scalar optimization ----------------------------------

/// Bisection on a bracketing interval. Requires f(lo) and f(hi) of opposite
/// sign (zero counts as either); stops when the bracket is narrower than
/// xtol_rel * |mid| + xtol_abs.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol_rel = 1e-12, double xtol_abs = 0.0);

/// Golden-section minimizer on [lo, hi] for a unimodal function.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol = 1e-10);

// --- finite differences ---------------------------------------------------

/// Central first/second differences with one Richardson step (h, h/2).
double fd_derivative(const std::function<double(double)>& f, double x, int order,
                     double rel_step = 1e-5);

// --- monotone cubic interpolation ------------------------------------------

/// Fritsch-Carlson shape-preserving cubic. Monotone data yields a monotone
/// interpolant (no overshoot between samples). Evaluation outside the grid
/// returns the nearest endpoint value.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys);
    double operator()(double x) const;
    bool empty() const { return xs_.empty(); }

  private:
    std::vector<double> xs_, ys_, slopes_;
};

// --- grids ------------------------------------------------------------------

/// count points from start to stop inclusive, linear or logarithmic spacing.
std::vector<double> make_grid(double start, double stop, int count, bool log_scale);

}  // namespace serlab
