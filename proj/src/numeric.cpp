#include "serlab/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace serlab {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, double* err_estimate) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    // depth 25 copes with sqrt-type kinks at interval ends (error-rate
    // integrands are of that shape near zero snr)
    double v = gk::integrate(f, a, b, 25, tol, &err);
    if (err_estimate) *err_estimate = err;
    return v;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol_rel, double xtol_abs) {
    if (!(lo < hi)) throw std::invalid_argument("bisect_root: empty bracket");
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("bisect_root: no sign change on bracket");
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        double tol = xtol_rel * std::abs(mid) + xtol_abs;
        if (hi - lo <= tol || mid == lo || mid == hi) return mid;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double fd_derivative(const std::function<double(double)>& f, double x, int order,
                     double rel_step) {
    double h = std::max(std::abs(x), 1.0) * rel_step;
    auto stencil = [&](double hh) {
        if (order == 1) return (f(x + hh) - f(x - hh)) / (2.0 * hh);
        if (order == 2) return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / (hh * hh);
        throw std::invalid_argument("fd_derivative: order must be 1 or 2");
    };
    // one Richardson step: error O(h^4)
    double d_h = stencil(h);
    double d_h2 = stencil(h / 2.0);
    return (4.0 * d_h2 - d_h) / 3.0;
}

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n)
        throw std::invalid_argument("MonotoneCubic: need >= 2 matched samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw std::invalid_argument("MonotoneCubic: abscissas must be strictly ascending");

    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        delta[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);

    slopes_.assign(n, 0.0);
    slopes_[0] = delta[0];
    slopes_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0)
            slopes_[i] = 0.0;  // local extremum: flatten to preserve shape
        else
            slopes_[i] = 0.5 * (delta[i - 1] + delta[i]);
    }
    // Fritsch-Carlson limiter
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (delta[i] == 0.0) {
            slopes_[i] = slopes_[i + 1] = 0.0;
            continue;
        }
        double alpha = slopes_[i] / delta[i];
        double beta = slopes_[i + 1] / delta[i];
        double r = alpha * alpha + beta * beta;
        if (r > 9.0) {
            double tau = 3.0 / std::sqrt(r);
            slopes_[i] = tau * alpha * delta[i];
            slopes_[i + 1] = tau * beta * delta[i];
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    if (xs_.empty()) throw std::logic_error("MonotoneCubic: empty interpolant");
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    double h = xs_[i + 1] - xs_[i];
    double t = (x - xs_[i]) / h;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] + h11 * h * slopes_[i + 1];
}

std::vector<double> make_grid(double start, double stop, int count, bool log_scale) {
    if (count < 2) throw std::invalid_argument("make_grid: count must be >= 2");
    if (!(start < stop)) throw std::invalid_argument("make_grid: start must be < stop");
    if (log_scale && start <= 0.0)
        throw std::invalid_argument("make_grid: log grid needs positive start");
    std::vector<double> g(static_cast<std::size_t>(count));
    if (log_scale) {
        double la = std::log(start), lb = std::log(stop);
        for (int i = 0; i < count; ++i)
            g[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (count - 1));
    } else {
        for (int i = 0; i < count; ++i)
            g[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
    }
    g.front() = start;
    g.back() = stop;
    return g;
}

}  // namespace serlab
