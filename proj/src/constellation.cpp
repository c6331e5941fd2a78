#include "serlab/constellation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace serlab {

namespace {

constexpr double kEnergyTol = 1e-9;
constexpr double kPriorTol = 1e-12;

double sq_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

Constellation make_constellation(std::vector<std::vector<double>> points,
                                 std::vector<double> priors, bool rescale) {
    const std::size_t m = points.size();
    if (m < 2) throw std::invalid_argument("constellation: need at least 2 points");
    const std::size_t n = points[0].size();
    if (n < 1) throw std::invalid_argument("constellation: dimension must be positive");
    for (const auto& p : points)
        if (p.size() != n) throw std::invalid_argument("constellation: dimension mismatch");

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                double d = points[i][k] - points[j][k];
                d2 += d * d;
            }
            if (d2 == 0.0) throw std::invalid_argument("constellation: duplicate points");
        }

    double energy = 0.0;
    for (const auto& p : points) energy += sq_norm(p);
    energy /= static_cast<double>(m);
    if (energy == 0.0) throw std::invalid_argument("constellation: zero total energy");
    if (std::abs(energy - 1.0) > kEnergyTol) {
        if (!rescale)
            throw std::invalid_argument("constellation: mean energy is not 1 (pass rescale)");
        double scale = 1.0 / std::sqrt(energy);
        for (auto& p : points)
            for (double& x : p) x *= scale;
    }

    if (priors.empty()) {
        priors.assign(m, 1.0 / static_cast<double>(m));
    } else {
        if (priors.size() != m)
            throw std::invalid_argument("constellation: priors length mismatch");
        double sum = 0.0;
        for (double p : priors) {
            if (p < 0.0) throw std::invalid_argument("constellation: negative prior");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kPriorTol)
            throw std::invalid_argument("constellation: priors must sum to 1");
    }

    Constellation c;
    c.n = static_cast<int>(n);
    c.points = std::move(points);
    c.priors = std::move(priors);
    return c;
}

Constellation standard_constellation(StandardFamily family, int param) {
    switch (family) {
        case StandardFamily::Bpsk:
            return make_constellation({{1.0}, {-1.0}});
        case StandardFamily::Qpsk: {
            const double h = std::sqrt(0.5);
            return make_constellation({{h, h}, {-h, h}, {-h, -h}, {h, -h}});
        }
        case StandardFamily::Mpsk: {
            if (param < 2) throw std::invalid_argument("mpsk: M must be >= 2");
            std::vector<std::vector<double>> pts;
            for (int k = 0; k < param; ++k) {
                double th = 2.0 * M_PI * k / param;
                pts.push_back({std::cos(th), std::sin(th)});
            }
            return make_constellation(std::move(pts));
        }
        case StandardFamily::Mqam: {
            int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(param))));
            if (side * side != param || side < 2 || side % 2 != 0)
                throw std::invalid_argument("mqam: M must be a square with even side (4, 16, 36, ...)");
            std::vector<std::vector<double>> pts;
            for (int i = 0; i < side; ++i)
                for (int j = 0; j < side; ++j)
                    pts.push_back({static_cast<double>(2 * i - side + 1),
                                   static_cast<double>(2 * j - side + 1)});
            return make_constellation(std::move(pts), {}, /*rescale=*/true);
        }
        case StandardFamily::Orthogonal: {
            if (param < 2) throw std::invalid_argument("orthogonal: n must be >= 2");
            std::vector<std::vector<double>> pts(static_cast<std::size_t>(param),
                                                 std::vector<double>(static_cast<std::size_t>(param), 0.0));
            for (int k = 0; k < param; ++k) pts[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1.0;
            return make_constellation(std::move(pts));
        }
        case StandardFamily::Cube: {
            if (param < 1 || param > 16) throw std::invalid_argument("cube: n must be in [1, 16]");
            const double h = 1.0 / std::sqrt(static_cast<double>(param));
            std::vector<std::vector<double>> pts;
            for (int mask = 0; mask < (1 << param); ++mask) {
                std::vector<double> p(static_cast<std::size_t>(param));
                for (int k = 0; k < param; ++k) p[static_cast<std::size_t>(k)] = (mask >> k & 1) ? h : -h;
                pts.push_back(std::move(p));
            }
            return make_constellation(std::move(pts));
        }
    }
    throw std::invalid_argument("standard_constellation: unknown family");
}

Constellation standard_constellation(const std::string& name) {
    std::string s;
    for (char ch : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    auto param_after = [&](std::size_t pos) {
        return std::stoi(s.substr(pos));
    };
    if (s == "bpsk") return standard_constellation(StandardFamily::Bpsk);
    if (s == "qpsk") return standard_constellation(StandardFamily::Qpsk);
    if (auto p = s.find("psk:"); s.rfind("mpsk:", 0) == 0 && p != std::string::npos)
        return standard_constellation(StandardFamily::Mpsk, param_after(5));
    if (s.size() > 3 && s.substr(s.size() - 3) == "psk" && std::isdigit(static_cast<unsigned char>(s[0])))
        return standard_constellation(StandardFamily::Mpsk, std::stoi(s));
    if (s.rfind("mqam:", 0) == 0) return standard_constellation(StandardFamily::Mqam, param_after(5));
    if (s.size() > 3 && s.substr(s.size() - 3) == "qam" && std::isdigit(static_cast<unsigned char>(s[0])))
        return standard_constellation(StandardFamily::Mqam, std::stoi(s));
    if (s.rfind("orthogonal:", 0) == 0)
        return standard_constellation(StandardFamily::Orthogonal, param_after(11));
    if (s.rfind("cube:", 0) == 0) return standard_constellation(StandardFamily::Cube, param_after(5));
    throw std::invalid_argument("unknown constellation name: " + name);
}

DecisionRegion make_region(const std::vector<std::vector<double>>& normals,
                           const std::vector<double>& offsets, int owner) {
    if (normals.empty() || normals.size() != offsets.size())
        throw std::invalid_argument("make_region: rows/offsets mismatch");
    DecisionRegion r;
    r.owner = owner;
    r.n = static_cast<int>(normals[0].size());
    r.d_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < normals.size(); ++j) {
        if (static_cast<int>(normals[j].size()) != r.n)
            throw std::invalid_argument("make_region: dimension mismatch");
        double len = std::sqrt(sq_norm(normals[j]));
        if (len == 0.0) throw std::invalid_argument("make_region: zero normal");
        Halfspace h;
        h.normal = normals[j];
        for (double& x : h.normal) x /= len;
        h.offset = offsets[j] / len;
        if (!(h.offset > 0.0)) throw std::invalid_argument("make_region: offset must be positive");
        r.d_min = std::min(r.d_min, h.offset);
        r.rows.push_back(std::move(h));
    }
    return r;
}

DecisionRegion decision_region(const Constellation& c, int i) {
    if (i < 0 || i >= c.size()) throw std::out_of_range("decision_region: bad index");
    DecisionRegion r;
    r.owner = i;
    r.n = c.n;
    r.d_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < c.size(); ++j) {
        if (j == i) continue;
        Halfspace h;
        h.normal.resize(static_cast<std::size_t>(c.n));
        double dist2 = 0.0;
        for (int k = 0; k < c.n; ++k) {
            double d = c.points[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
                       c.points[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            h.normal[static_cast<std::size_t>(k)] = d;
            dist2 += d * d;
        }
        double dist = std::sqrt(dist2);
        for (double& x : h.normal) x /= dist;
        h.offset = 0.5 * dist;
        r.d_min = std::min(r.d_min, h.offset);
        r.rows.push_back(std::move(h));
    }
    return r;
}

DecisionRegion box_region(int n, double half_width) {
    if (n < 1 || !(half_width > 0.0)) throw std::invalid_argument("box_region: bad parameters");
    std::vector<std::vector<double>> normals;
    std::vector<double> offsets;
    for (int k = 0; k < n; ++k)
        for (double sgn : {1.0, -1.0}) {
            std::vector<double> a(static_cast<std::size_t>(n), 0.0);
            a[static_cast<std::size_t>(k)] = sgn;
            normals.push_back(std::move(a));
            offsets.push_back(half_width);
        }
    return make_region(normals, offsets);
}

namespace {

constexpr double kGeomTol = 1e-9;

// Gaussian elimination rank of the row set (rows are unit vectors).
int matrix_rank(const std::vector<Halfspace>& rows, int n) {
    std::vector<std::vector<double>> m;
    m.reserve(rows.size());
    for (const auto& h : rows) m.push_back(h.normal);
    int rank = 0;
    for (int col = 0; col < n && rank < static_cast<int>(m.size()); ++col) {
        int piv = -1;
        double best = 1e-10;
        for (int r = rank; r < static_cast<int>(m.size()); ++r)
            if (std::abs(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) > best) {
                best = std::abs(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
                piv = r;
            }
        if (piv < 0) continue;
        std::swap(m[static_cast<std::size_t>(rank)], m[static_cast<std::size_t>(piv)]);
        for (int r = 0; r < static_cast<int>(m.size()); ++r) {
            if (r == rank) continue;
            double f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                       m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
            for (int k2 = col; k2 < n; ++k2)
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k2)] -=
                    f * m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(k2)];
        }
        ++rank;
    }
    return rank;
}

// Solve the k x k system in place; returns false when singular.
bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double>& x) {
    const int k = static_cast<int>(b.size());
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        if (std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]) < 1e-10)
            return false;
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(piv)]);
        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
        for (int r = col + 1; r < k; ++r) {
            double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                       a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int c2 = col; c2 < k; ++c2)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] -=
                    f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    x.assign(static_cast<std::size_t>(k), 0.0);
    for (int r = k - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int c2 = r + 1; c2 < k; ++c2)
            s -= a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] * x[static_cast<std::size_t>(c2)];
        x[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    }
    return true;
}

double det_small(const std::vector<std::vector<double>>& m) {
    const int k = static_cast<int>(m.size());
    if (k == 0) return 1.0;
    if (k == 1) return m[0][0];
    if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    // k == 3
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Generalized cross product: the null direction of n-1 independent rows.
std::vector<double> null_direction(const std::vector<const Halfspace*>& rows, int n) {
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        std::vector<std::vector<double>> minor;
        for (const auto* h : rows) {
            std::vector<double> row;
            for (int c2 = 0; c2 < n; ++c2)
                if (c2 != k) row.push_back(h->normal[static_cast<std::size_t>(c2)]);
            minor.push_back(std::move(row));
        }
        d[static_cast<std::size_t>(k)] = ((k % 2) ? -1.0 : 1.0) * det_small(minor);
    }
    return d;
}

bool cone_feasible_direction(const std::vector<Halfspace>& rows, const std::vector<double>& d) {
    for (const auto& h : rows)
        if (dot(h.normal, d) > kGeomTol) return false;
    return true;
}

// Enumerate index subsets of size k from [0, total); invokes fn(subset).
template <typename Fn>
void for_each_subset(int total, int k, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    if (k == 0) {
        fn(idx);
        return;
    }
    while (true) {
        fn(idx);
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == total - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int r = pos + 1; r < k; ++r)
            idx[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r - 1)] + 1;
    }
}

bool recession_cone_nontrivial(const DecisionRegion& r) {
    const int n = r.n;
    const int rows = static_cast<int>(r.rows.size());
    if (matrix_rank(r.rows, n) < n) return true;  // cone contains a line
    if (n == 1) {
        for (double sgn : {1.0, -1.0})
            if (cone_feasible_direction(r.rows, {sgn})) return true;
        return false;
    }
    bool found = false;
    for_each_subset(rows, n - 1, [&](const std::vector<int>& idx) {
        if (found) return;
        std::vector<const Halfspace*> sel;
        for (int j : idx) sel.push_back(&r.rows[static_cast<std::size_t>(j)]);
        auto d = null_direction(sel, n);
        double len = std::sqrt(sq_norm(d));
        if (len < 1e-10) return;  // dependent subset: no ray here
        for (double& x : d) x /= len;
        if (cone_feasible_direction(r.rows, d)) {
            found = true;
            return;
        }
        for (double& x : d) x = -x;
        if (cone_feasible_direction(r.rows, d)) found = true;
    });
    return found;
}

}  // namespace

RegionExtremes region_extremes(const DecisionRegion& r) {
    const int n = r.n;
    const int rows = static_cast<int>(r.rows.size());
    if (n > 4 || rows > 63)
        throw capability_error("region_extremes: enumeration limited to n <= 4 and 63 rows");

    RegionExtremes e;
    e.d_min = r.d_min;
    if (recession_cone_nontrivial(r)) {
        e.bounded = false;
        e.d_max = std::numeric_limits<double>::infinity();
        return e;
    }
    e.bounded = true;
    double best = 0.0;
    bool any = false;
    for_each_subset(rows, n, [&](const std::vector<int>& idx) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (int j : idx) {
            a.push_back(r.rows[static_cast<std::size_t>(j)].normal);
            b.push_back(r.rows[static_cast<std::size_t>(j)].offset);
        }
        std::vector<double> x;
        if (!solve_dense(std::move(a), std::move(b), x)) return;
        for (const auto& h : r.rows)
            if (dot(h.normal, x) > h.offset + kGeomTol) return;
        any = true;
        best = std::max(best, std::sqrt(sq_norm(x)));
    });
    if (!any)
        throw std::logic_error("region_extremes: bounded region produced no vertex");
    e.d_max = best;
    return e;
}

std::pair<double, double> global_distances(const Constellation& c) {
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        auto e = region_extremes(decision_region(c, i));
        dmin = std::min(dmin, e.d_min);
        dmax = std::max(dmax, e.d_max);
    }
    return {dmin, dmax};
}

bool region_contains(const DecisionRegion& r, const std::vector<double>& x, double tol) {
    for (const auto& h : r.rows)
        if (dot(h.normal, x) > h.offset + tol) return false;
    return true;
}

int detect_by_regions(const Constellation& c, const std::vector<double>& r) {
    for (int i = 0; i < c.size(); ++i) {
        auto region = decision_region(c, i);
        std::vector<double> x(r.size());
        for (std::size_t k = 0; k < r.size(); ++k)
            x[k] = r[k] - c.points[static_cast<std::size_t>(i)][k];
        bool wins = true;
        // rows are ordered by j skipping i: row index -> point index
        int row_idx = 0;
        for (int j = 0; j < c.size() && wins; ++j) {
            if (j == i) continue;
            const auto& h = region.rows[static_cast<std::size_t>(row_idx++)];
            double lhs = dot(h.normal, x);
            if (j < i ? !(lhs < h.offset) : !(lhs <= h.offset)) wins = false;
        }
        if (wins) return i;
    }
    throw std::logic_error("detect_by_regions: no region claimed the point");
}

Constellation load_constellation_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open constellation file: " + path);
    nlohmann::json j;
    in >> j;
    auto points = j.at("points").get<std::vector<std::vector<double>>>();
    std::vector<double> priors;
    if (j.contains("priors")) priors = j.at("priors").get<std::vector<double>>();
    bool rescale = j.value("rescale", false);
    auto c = make_constellation(std::move(points), std::move(priors), rescale);
    if (j.contains("n") && j.at("n").get<int>() != c.n)
        throw std::invalid_argument("constellation file: n does not match points");
    return c;
}

void save_constellation_json(const Constellation& c, const std::string& path) {
    nlohmann::json j;
    j["n"] = c.n;
    j["points"] = c.points;
    j["priors"] = c.priors;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write constellation file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace serlab
