#ifndef SUMAPPROX_DOMAIN_HPP
#define SUMAPPROX_DOMAIN_HPP

#include <array>
#include <string>
#include <vector>

namespace sumapprox {

struct Point {
    int id = 0;
    std::vector<double> coords;  // empty for coordinate-free domains
};

/// Finite discretized domain: a point set together with n >= 2 factor
/// partitions. factors[i][p] is the class of point p under factor i.
/// Class ids per factor are contiguous 0..class_counts[i]-1 and every
/// class is non-empty; point ids are 0..num_points()-1 with no gaps.
struct Domain {
    std::vector<Point> points;
    std::vector<std::vector<int>> factors;
    std::vector<int> class_counts;

    int num_points() const { return static_cast<int>(points.size()); }
    int num_factors() const { return static_cast<int>(factors.size()); }
    int class_of(int point, int factor) const { return factors[factor][point]; }
    int coord_dim() const { return points.empty() ? 0 : static_cast<int>(points[0].coords.size()); }
};

/// Materialized level sets of one factor: classes[c] is the sorted list of
/// point ids with class c. The lists are disjoint and exhaust the point set.
struct LevelSetIndex {
    int factor = 0;
    std::vector<std::vector<int>> classes;
};

/// Checks all Domain invariants and renumbers class ids to contiguous form
/// (gaps removed, order preserved). Point ids are reassigned by position.
/// Repairs that changed anything are appended to `warnings` when non-null.
/// Throws std::invalid_argument on an empty point set, fewer than two
/// factors, or a factor of the wrong length.
Domain validate_domain(std::vector<Point> points,
                       std::vector<std::vector<int>> factors,
                       std::vector<std::string>* warnings = nullptr);

LevelSetIndex level_sets(const Domain& d, int factor);

/// Region descriptor for lattice-domain generation.
struct RegionSpec {
    enum class Kind {
        rectangle,       // params a,b,c,d : [a,b] x [c,d]
        lshape_k1,       // [0,1]x[0,1/2] u [0,1/2]x[0,1]
        union_ncu,       // [0,1]x[0,2] u [1,2]x[0,1]
        triangle_abc,    // vertices (0,0), (2,2), (1,0)
        convex_polygon,  // vertices, counterclockwise or clockwise
        product_grid,    // dims: points per axis, n >= 2 axes
    };
    Kind kind = Kind::rectangle;
    std::vector<double> params;
    std::vector<std::array<double, 2>> vertices;
    std::vector<int> dims;
};

/// Parses a region name ("rectangle", "lshape_K1", "union_ncu",
/// "triangle_abc", "convex_polygon", "product_grid") plus numeric
/// parameters into a RegionSpec. Throws std::invalid_argument on an
/// unknown name or malformed parameters.
RegionSpec make_region(const std::string& name, const std::vector<double>& params = {});

/// Lattice points of the region at step 1/N, closed membership with
/// tolerance 1e-9 on half-plane tests. Factor i assigns a class per
/// distinct lattice index along coordinate i; classes are keyed by the
/// integer lattice index, never by floating comparison. Points are ordered
/// lexicographically by lattice index (first coordinate outermost).
/// Throws std::invalid_argument if the region has no lattice points at
/// resolution N or a non-convex polygon is passed to convex_polygon.
Domain generate_domain(const RegionSpec& spec, int resolution);

/// Appends a new factor binning points by floor((a.x)/bin_width), classes
/// renumbered contiguously. Throws on zero direction or bin_width <= 0.
void add_inner_product_factor(Domain& d, const std::vector<double>& direction,
                              double bin_width);

}  // namespace sumapprox

#endif
