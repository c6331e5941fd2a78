#include "serlab/ser_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "serlab/rng.hpp"
#include "serlab/special.hpp"

namespace serlab {

NoiseModel NoiseModel::from_snr(int n, double snr) {
    if (n < 1) throw std::invalid_argument("NoiseModel: n must be positive");
    if (!(snr > 0.0)) throw std::invalid_argument("NoiseModel: snr must be positive");
    return {n, snr};
}

NoiseModel NoiseModel::from_noise_power(int n, double noise_power) {
    if (!(noise_power > 0.0))
        throw std::invalid_argument("NoiseModel: noise power must be positive");
    return from_snr(n, 1.0 / noise_power);
}

double noise_pdf(const std::vector<double>& x, double snr) {
    if (!(snr > 0.0)) throw std::invalid_argument("noise_pdf: snr must be positive");
    const int n = static_cast<int>(x.size());
    double t = 0.0;
    for (double v : x) t += v * v;
    const double sigma2 = 1.0 / snr;
    return std::pow(2.0 * M_PI * sigma2, -0.5 * n) * std::exp(-0.5 * t / sigma2);
}

int ml_detect(const std::vector<double>& r, const Constellation& c) {
    if (static_cast<int>(r.size()) != c.n)
        throw std::invalid_argument("ml_detect: dimension mismatch");
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            double d = r[k] - c.points[static_cast<std::size_t>(i)][k];
            d2 += d * d;
        }
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

double deriv_weight_snr(double t, int n, double snr, int order) {
    if (!(snr > 0.0)) throw std::invalid_argument("deriv_weight_snr: snr must be positive");
    if (order == 1) return 0.5 * (n / snr - t);
    if (order == 2) {
        const double root = std::sqrt(2.0 * n);
        return 0.25 * (t - (n + root) / snr) * (t - (n - root) / snr);
    }
    throw std::invalid_argument("deriv_weight_snr: order must be 1 or 2");
}

double deriv_weight_snr(const std::vector<double>& x, double snr, int order) {
    double t = 0.0;
    for (double v : x) t += v * v;
    return deriv_weight_snr(t, static_cast<int>(x.size()), snr, order);
}

double deriv_weight_noise(double t, int n, double noise_power, int order) {
    if (!(noise_power > 0.0))
        throw std::invalid_argument("deriv_weight_noise: noise power must be positive");
    const double p = noise_power;
    if (order == 1) return 0.5 * (t / (p * p) - n / p);
    if (order == 2) {
        const double u = t / p;
        const double root = std::sqrt(2.0 * (n + 2.0));
        return (u - (n + 2.0 + root)) * (u - (n + 2.0 - root)) / (4.0 * p * p);
    }
    throw std::invalid_argument("deriv_weight_noise: order must be 1 or 2");
}

double deriv_weight_noise(const std::vector<double>& x, double noise_power, int order) {
    double t = 0.0;
    for (double v : x) t += v * v;
    return deriv_weight_noise(t, static_cast<int>(x.size()), noise_power, order);
}

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

struct ChunkSums {
    double sum = 0.0;
    double sumsq = 0.0;
};

// Runs `samples` evaluations of sample_fn partitioned into fixed chunks.
// Each chunk owns the substream (seed, stream_tag, chunk index) and a
// private copy of the sampler; partial sums are reduced in chunk order, so
// the result does not depend on the number of worker threads.
template <typename SampleFn>
ChunkSums mc_run(std::uint64_t samples, std::uint64_t seed, std::uint64_t stream_tag,
                 unsigned threads, const SampleFn& sample_fn) {
    if (samples < 1) throw std::invalid_argument("mc_run: samples must be >= 1");
    const std::uint64_t nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<ChunkSums> parts(nchunks);

    auto work_chunk = [&](std::uint64_t ci) {
        const std::uint64_t lo = ci * kChunk;
        const std::uint64_t hi = std::min(samples, lo + kChunk);
        NormalStream rng(substream_seed(seed, stream_tag, ci));
        SampleFn fn = sample_fn;
        ChunkSums s;
        for (std::uint64_t k = lo; k < hi; ++k) {
            double v = fn(rng);
            s.sum += v;
            s.sumsq += v * v;
        }
        parts[ci] = s;
    };

    unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
    if (nthreads <= 1 || nchunks == 1) {
        for (std::uint64_t ci = 0; ci < nchunks; ++ci) work_chunk(ci);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (std::uint64_t ci = next.fetch_add(1); ci < nchunks; ci = next.fetch_add(1))
                work_chunk(ci);
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::uint64_t>(nthreads, nchunks); ++t)
            pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ChunkSums total;
    for (const auto& p : parts) {
        total.sum += p.sum;
        total.sumsq += p.sumsq;
    }
    return total;
}

struct FlatPoints {
    int n = 0;
    int m = 0;
    std::vector<double> data;  // m rows of n

    explicit FlatPoints(const Constellation& c) : n(c.n), m(c.size()) {
        data.reserve(static_cast<std::size_t>(n) * m);
        for (const auto& p : c.points) data.insert(data.end(), p.begin(), p.end());
    }

    int detect(const double* r) const {
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            const double* s = data.data() + static_cast<std::size_t>(i) * n;
            double d2 = 0.0;
            for (int k = 0; k < n; ++k) {
                double d = r[k] - s[k];
                d2 += d * d;
            }
            if (d2 < best_d2) {
                best_d2 = d2;
                best = i;
            }
        }
        return best;
    }
};

double sigma_for(Axis axis, double value) {
    if (!(value > 0.0)) throw std::invalid_argument("axis value must be positive");
    return axis == Axis::Snr ? 1.0 / std::sqrt(value) : std::sqrt(value);
}

// Largest-remainder apportionment of the budget by priors.
std::vector<std::uint64_t> split_budget(std::uint64_t samples, const std::vector<double>& priors) {
    const std::size_t m = priors.size();
    std::vector<std::uint64_t> out(m, 0);
    std::vector<std::pair<double, std::size_t>> rem(m);
    std::uint64_t used = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double ideal = priors[i] * static_cast<double>(samples);
        out[i] = static_cast<std::uint64_t>(ideal);
        used += out[i];
        rem[i] = {ideal - static_cast<double>(out[i]), i};
    }
    std::stable_sort(rem.begin(), rem.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; used < samples && k < m; ++k, ++used) ++out[rem[k].second];
    return out;
}

}  // namespace

PointEstimate point_ser_mc(const Constellation& c, int i, double snr,
                           std::uint64_t samples, std::uint64_t seed, unsigned threads) {
    if (i < 0 || i >= c.size()) throw std::out_of_range("point_ser_mc: bad index");
    const FlatPoints fp(c);
    const double sigma = sigma_for(Axis::Snr, snr);
    const double* s_i = fp.data.data() + static_cast<std::size_t>(i) * fp.n;
    const int n = fp.n;
    std::vector<double> rv(static_cast<std::size_t>(n));

    auto sample = [&, rv](NormalStream& rng) mutable {
        for (int k = 0; k < n; ++k)
            rv[static_cast<std::size_t>(k)] = s_i[k] + sigma * rng.normal();
        return fp.detect(rv.data()) != i ? 1.0 : 0.0;
    };
    auto sums = mc_run(samples, seed, static_cast<std::uint64_t>(i), threads, sample);
    double p = sums.sum / static_cast<double>(samples);
    double se = std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(samples));
    return {p, se};
}

SerEstimate ser_mc(const Constellation& c, double snr, std::uint64_t samples,
                   std::uint64_t seed, unsigned threads) {
    if (samples < 1) throw std::invalid_argument("ser_mc: samples must be >= 1");
    auto budgets = split_budget(samples, c.priors);
    SerEstimate est;
    est.samples = samples;
    est.seed = seed;
    est.per_point.resize(c.priors.size(), 0.0);
    est.per_point_se.resize(c.priors.size(), 0.0);
    double pe = 0.0, var = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        if (budgets[ui] == 0) continue;  // zero-prior point contributes nothing
        auto p = point_ser_mc(c, i, snr, budgets[ui], seed, threads);
        est.per_point[ui] = p.value;
        est.per_point_se[ui] = p.std_error;
        pe += c.priors[ui] * p.value;
        var += c.priors[ui] * c.priors[ui] * p.std_error * p.std_error;
    }
    est.pe = pe;
    est.pe_se = std::sqrt(var);
    return est;
}

namespace {

// n = 1: the region is an interval; exact CDF differences.
double point_pc_1d(const DecisionRegion& reg, double sigma) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& h : reg.rows) {
        if (h.normal[0] > 0.0)
            hi = std::min(hi, h.offset / h.normal[0]);
        else
            lo = std::max(lo, -h.offset / (-h.normal[0]));
    }
    if (!(lo < hi)) return 0.0;
    double a = std::isinf(lo) ? 0.0 : normal_cdf(lo / sigma);
    double b = std::isinf(hi) ? 1.0 : normal_cdf(hi / sigma);
    return std::max(0.0, b - a);
}

// n = 2: slice the polyhedron along x and integrate closed-form y-mass.
double point_pc_2d(const DecisionRegion& reg, double sigma) {
    const double box = 10.0 * sigma;
    double xlo = -box, xhi = box;
    for (const auto& h : reg.rows) {
        if (std::abs(h.normal[1]) < 1e-14) {
            if (h.normal[0] > 0.0)
                xhi = std::min(xhi, h.offset / h.normal[0]);
            else
                xlo = std::max(xlo, h.offset / h.normal[0]);
        }
    }
    if (!(xlo < xhi)) return 0.0;

    auto slice_mass = [&](double x) {
        double ylo = -box, yhi = box;
        for (const auto& h : reg.rows) {
            double ay = h.normal[1];
            if (std::abs(ay) < 1e-14) continue;
            double y = (h.offset - h.normal[0] * x) / ay;
            if (ay > 0.0)
                yhi = std::min(yhi, y);
            else
                ylo = std::max(ylo, y);
        }
        if (!(ylo < yhi)) return 0.0;
        double mass_y = normal_cdf(yhi / sigma) - normal_cdf(ylo / sigma);
        return normal_pdf(x / sigma) / sigma * mass_y;
    };
    return integrate(slice_mass, xlo, xhi, 1e-11);
}

}  // namespace

double point_ser_quadrature(const Constellation& c, int i, double snr) {
    if (c.n > 2) throw capability_error("ser_quadrature: only n <= 2 is supported");
    const double sigma = 1.0 / std::sqrt(snr);
    auto reg = decision_region(c, i);
    double pc = c.n == 1 ? point_pc_1d(reg, sigma) : point_pc_2d(reg, sigma);
    return std::min(1.0, std::max(0.0, 1.0 - pc));
}

double ser_quadrature(const Constellation& c, double snr) {
    double pe = 0.0;
    for (int i = 0; i < c.size(); ++i)
        pe += c.priors[static_cast<std::size_t>(i)] * point_ser_quadrature(c, i, snr);
    return pe;
}

PointEstimate region_derivative_mc(const Membership& inside, int n, Axis axis,
                                   double value, int order, std::uint64_t samples,
                                   std::uint64_t seed, unsigned threads,
                                   std::uint64_t stream_tag) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("region_derivative_mc: order must be 1 or 2");
    const double sigma = sigma_for(axis, value);
    std::vector<double> x(static_cast<std::size_t>(n));

    auto sample = [&, x](NormalStream& rng) mutable {
        double t = 0.0;
        for (int k = 0; k < n; ++k) {
            double v = sigma * rng.normal();
            x[static_cast<std::size_t>(k)] = v;
            t += v * v;
        }
        double w = axis == Axis::Snr ? deriv_weight_snr(t, n, value, order)
                                     : deriv_weight_noise(t, n, value, order);
        return inside(x) ? w : 0.0;
    };
    auto sums = mc_run(samples, seed, stream_tag, threads, sample);
    double mean = sums.sum / static_cast<double>(samples);
    double var = std::max(0.0, sums.sumsq / static_cast<double>(samples) - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(samples))};
}

PointEstimate region_prob_mc(const Membership& inside, int n, Axis axis, double value,
                             std::uint64_t samples, std::uint64_t seed, unsigned threads,
                             std::uint64_t stream_tag) {
    const double sigma = sigma_for(axis, value);
    std::vector<double> x(static_cast<std::size_t>(n));
    auto sample = [&, x](NormalStream& rng) mutable {
        for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = sigma * rng.normal();
        return inside(x) ? 1.0 : 0.0;
    };
    auto sums = mc_run(samples, seed, stream_tag, threads, sample);
    double p = sums.sum / static_cast<double>(samples);
    double se = std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(samples));
    return {p, se};
}

PointEstimate ser_derivative_mc(const Constellation& c, int i, Axis axis, double value,
                                int order, std::uint64_t samples, std::uint64_t seed,
                                unsigned threads) {
    if (i < 0 || i >= c.size()) throw std::out_of_range("ser_derivative_mc: bad index");
    auto reg = decision_region(c, i);
    auto inside = [reg](const std::vector<double>& x) { return region_contains(reg, x); };
    return region_derivative_mc(inside, c.n, axis, value, order, samples, seed, threads,
                                static_cast<std::uint64_t>(i));
}

CurveEstimate curve(const Constellation& c, Axis axis, const std::vector<double>& grid,
                    Quantity q, int point_index, Method method, std::uint64_t samples,
                    std::uint64_t seed, unsigned threads) {
    if (grid.size() < 1) throw std::invalid_argument("curve: empty grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0)) throw std::invalid_argument("curve: grid must be positive");
        if (k > 0 && !(grid[k] > grid[k - 1]))
            throw std::invalid_argument("curve: grid must be strictly ascending");
    }
    const bool deriv = q == Quantity::D1 || q == Quantity::D2;
    if (method == Method::Quadrature && deriv)
        throw std::invalid_argument("curve: derivative quantities require the mc method");
    if (q == Quantity::Pei && (point_index < 0 || point_index >= c.size()))
        throw std::out_of_range("curve: bad point index");

    CurveEstimate ce;
    ce.axis = axis;
    ce.grid = grid;
    ce.samples = samples;
    ce.seed = seed;
    ce.method = method == Method::Mc ? "mc" : "quadrature";
    ce.order = q == Quantity::D1 ? 1 : q == Quantity::D2 ? 2 : 0;
    switch (q) {
        case Quantity::Pe: ce.quantity = "pe"; break;
        case Quantity::Pc: ce.quantity = "pc"; break;
        case Quantity::Pei: ce.quantity = "pei[" + std::to_string(point_index) + "]"; break;
        case Quantity::D1: ce.quantity = "d1"; break;
        case Quantity::D2: ce.quantity = "d2"; break;
    }

    auto budgets = split_budget(samples, c.priors);
    for (double g : grid) {
        const double snr = axis == Axis::Snr ? g : 1.0 / g;
        double v = 0.0, se = 0.0;
        switch (q) {
            case Quantity::Pe:
            case Quantity::Pc: {
                if (method == Method::Mc) {
                    auto est = ser_mc(c, snr, samples, seed, threads);
                    v = est.pe;
                    se = est.pe_se;
                } else {
                    v = ser_quadrature(c, snr);
                }
                if (q == Quantity::Pc) v = 1.0 - v;
                break;
            }
            case Quantity::Pei: {
                if (method == Method::Mc) {
                    auto est = point_ser_mc(c, point_index, snr, samples, seed, threads);
                    v = est.value;
                    se = est.std_error;
                } else {
                    v = point_ser_quadrature(c, point_index, snr);
                }
                break;
            }
            case Quantity::D1:
            case Quantity::D2: {
                // P_e = 1 - sum p_i P_ci: negate the region derivatives.
                const int order = q == Quantity::D1 ? 1 : 2;
                double var = 0.0;
                for (int i = 0; i < c.size(); ++i) {
                    const std::size_t ui = static_cast<std::size_t>(i);
                    if (budgets[ui] == 0) continue;
                    auto d = ser_derivative_mc(c, i, axis, g, order, budgets[ui], seed, threads);
                    v -= c.priors[ui] * d.value;
                    var += c.priors[ui] * c.priors[ui] * d.std_error * d.std_error;
                }
                se = std::sqrt(var);
                break;
            }
        }
        ce.values.push_back(v);
        ce.std_errors.push_back(se);
    }
    return ce;
}

}  // namespace serlab
