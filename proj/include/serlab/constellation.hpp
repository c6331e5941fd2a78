#pragma once

#include <string>
#include <vector>

#include "serlab/numeric.hpp"

namespace serlab {

/// M points in n dimensions with priors, energy-normalized so that the
/// mean squared norm over the points equals 1.
struct Constellation {
    int n = 0;
    std::vector<std::vector<double>> points;
    std::vector<double> priors;

    int size() const { return static_cast<int>(points.size()); }
};

/// Validate and build a constellation. With rescale = true, inputs whose
/// mean energy differs from 1 are scaled by the common factor that restores
/// it; otherwise off-normalization is an error.
Constellation make_constellation(std::vector<std::vector<double>> points,
                                 std::vector<double> priors = {},
                                 bool rescale = false);

enum class StandardFamily { Bpsk, Qpsk, Mpsk, Mqam, Orthogonal, Cube };

/// Canonical layouts: MPSK on the unit circle, MQAM the square grid with
/// odd-integer coordinates scaled to unit mean energy, ORTHOGONAL(n) the
/// standard basis, CUBE(n) the corners {+-1/sqrt(n)}^n.
Constellation standard_constellation(StandardFamily family, int param = 0);

/// Parse names like "bpsk", "qpsk", "8psk", "mpsk:8", "16qam", "mqam:16",
/// "orthogonal:3", "cube:3".
Constellation standard_constellation(const std::string& name);

/// One half-space a.x <= b with |a| = 1 and b > 0.
struct Halfspace {
    std::vector<double> normal;
    double offset = 0.0;
};

/// Decision polyhedron of one constellation point, in the frame whose
/// origin sits at that point. d_min is the distance to the nearest facet
/// plane; the full extremes (d_max, boundedness) are computed on demand by
/// region_extremes.
struct DecisionRegion {
    int owner = -1;
    int n = 0;
    std::vector<Halfspace> rows;
    double d_min = 0.0;
};

/// Build a region from raw half-spaces (rows are normalized; offsets must
/// come out positive). Used for synthetic regions in tests and bound
/// studies.
DecisionRegion make_region(const std::vector<std::vector<double>>& normals,
                           const std::vector<double>& offsets, int owner = -1);

/// Voronoi region of point i: one row per other point j, with the bisector
/// normal (s_j - s_i)/|s_j - s_i| and offset |s_j - s_i|/2. Redundant rows
/// are retained.
DecisionRegion decision_region(const Constellation& c, int i);

/// Axis-aligned box |x_k| <= half_width, a bounded synthetic region.
DecisionRegion box_region(int n, double half_width);

struct RegionExtremes {
    double d_min = 0.0;
    double d_max = 0.0;  // +infinity when unbounded
    bool bounded = false;
};

/// d_min = min offset. Boundedness is decided by searching the recession
/// cone {x | Ax <= 0} for a nonzero direction: a rank-deficient normal
/// matrix admits a line; otherwise the cone is pointed and every extreme
/// ray solves n-1 active rows, so all (n-1)-subsets are enumerated. When
/// bounded, d_max is the maximum vertex norm over all feasible n-subset
/// intersections. Dimensions above 4 or more than 63 rows exceed the
/// enumeration cap and raise capability_error.
RegionExtremes region_extremes(const DecisionRegion& r);

/// Corollary-style global substitutions: d_min over regions, d_max over
/// regions (+infinity if any region is unbounded).
std::pair<double, double> global_distances(const Constellation& c);

/// Closed membership: all rows satisfied within tol.
bool region_contains(const DecisionRegion& r, const std::vector<double>& x,
                     double tol = 0.0);

/// Region-side detector with the same tie rule as ml_detect: index i wins
/// when strictly closer than every lower-indexed point and weakly closer
/// than every higher-indexed one.
int detect_by_regions(const Constellation& c, const std::vector<double>& r);

/// JSON file I/O:  { "n": int, "points": [[...]], "priors": [...],
/// "rescale": bool }  (priors and rescale optional).
Constellation load_constellation_json(const std::string& path);
void save_constellation_json(const Constellation& c, const std::string& path);

}  // namespace serlab
