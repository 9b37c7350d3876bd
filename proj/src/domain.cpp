#include "sumapprox/domain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sumapprox {

namespace {

constexpr double kGeomTol = 1e-9;

// Maps the distinct values occurring in `raw` to 0..k-1, preserving order of
// the sorted distinct values. Returns the class count.
int renumber_contiguous(std::vector<int>& raw, bool* changed) {
    std::vector<int> distinct(raw);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    bool identity = true;
    for (size_t k = 0; k < distinct.size(); ++k)
        if (distinct[k] != static_cast<int>(k)) identity = false;
    if (!identity) {
        std::map<int, int> remap;
        for (size_t k = 0; k < distinct.size(); ++k) remap[distinct[k]] = static_cast<int>(k);
        for (int& c : raw) c = remap[c];
        if (changed) *changed = true;
    }
    return static_cast<int>(distinct.size());
}

}  // namespace

Domain validate_domain(std::vector<Point> points,
                       std::vector<std::vector<int>> factors,
                       std::vector<std::string>* warnings) {
    if (points.empty()) throw std::invalid_argument("domain has no points");
    if (factors.size() < 2) throw std::invalid_argument("need at least two factors");
    for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].size() != points.size())
            throw std::invalid_argument("factor " + std::to_string(i) +
                                        " length does not match point count");
    }
    for (size_t p = 0; p < points.size(); ++p) {
        if (points[p].id != static_cast<int>(p)) {
            if (warnings) warnings->push_back("point ids renumbered to 0..n-1");
            break;
        }
    }
    for (size_t p = 0; p < points.size(); ++p) points[p].id = static_cast<int>(p);

    Domain d;
    d.points = std::move(points);
    d.factors = std::move(factors);
    d.class_counts.resize(d.factors.size());
    for (size_t i = 0; i < d.factors.size(); ++i) {
        bool changed = false;
        d.class_counts[i] = renumber_contiguous(d.factors[i], &changed);
        if (changed && warnings)
            warnings->push_back("factor " + std::to_string(i) +
                                " class ids renumbered to contiguous form");
    }
    return d;
}

LevelSetIndex level_sets(const Domain& d, int factor) {
    if (factor < 0 || factor >= d.num_factors())
        throw std::invalid_argument("factor index out of range");
    LevelSetIndex idx;
    idx.factor = factor;
    idx.classes.resize(d.class_counts[factor]);
    for (int p = 0; p < d.num_points(); ++p)
        idx.classes[d.factors[factor][p]].push_back(p);
    return idx;
}

RegionSpec make_region(const std::string& name, const std::vector<double>& params) {
    RegionSpec spec;
    if (name == "rectangle") {
        spec.kind = RegionSpec::Kind::rectangle;
        if (params.size() != 4)
            throw std::invalid_argument("rectangle needs params a,b,c,d");
        if (params[0] > params[1] || params[2] > params[3])
            throw std::invalid_argument("rectangle needs a<=b and c<=d");
        spec.params = params;
    } else if (name == "lshape_K1" || name == "lshape_k1") {
        spec.kind = RegionSpec::Kind::lshape_k1;
    } else if (name == "union_ncu") {
        spec.kind = RegionSpec::Kind::union_ncu;
    } else if (name == "triangle_abc") {
        spec.kind = RegionSpec::Kind::triangle_abc;
    } else if (name == "convex_polygon") {
        spec.kind = RegionSpec::Kind::convex_polygon;
        if (params.size() < 6 || params.size() % 2 != 0)
            throw std::invalid_argument("convex_polygon needs x1,y1,...,xk,yk with k>=3");
        for (size_t i = 0; i + 1 < params.size(); i += 2)
            spec.vertices.push_back({params[i], params[i + 1]});
    } else if (name == "product_grid") {
        spec.kind = RegionSpec::Kind::product_grid;
        if (params.size() < 2)
            throw std::invalid_argument("product_grid needs at least two axis sizes");
        for (double v : params) {
            int n = static_cast<int>(std::llround(v));
            if (n < 1) throw std::invalid_argument("product_grid axis size must be >= 1");
            spec.dims.push_back(n);
        }
    } else {
        throw std::invalid_argument(
            "unknown region '" + name +
            "'; known: rectangle, lshape_K1, union_ncu, triangle_abc, "
            "convex_polygon, product_grid");
    }
    return spec;
}

namespace {

bool in_rect(double x, double y, double a, double b, double c, double d) {
    return x >= a - kGeomTol && x <= b + kGeomTol && y >= c - kGeomTol && y <= d + kGeomTol;
}

struct HalfPlanes {
    // Each row (nx, ny, c): inside means nx*x + ny*y <= c + tol.
    std::vector<std::array<double, 3>> rows;
    bool contains(double x, double y) const {
        for (const auto& r : rows)
            if (r[0] * x + r[1] * y > r[2] + kGeomTol) return false;
        return true;
    }
};

HalfPlanes polygon_halfplanes(const std::vector<std::array<double, 2>>& verts) {
    const size_t k = verts.size();
    double area2 = 0.0;
    for (size_t i = 0; i < k; ++i) {
        const auto& p = verts[i];
        const auto& q = verts[(i + 1) % k];
        area2 += p[0] * q[1] - q[0] * p[1];
    }
    if (std::fabs(area2) < kGeomTol)
        throw std::invalid_argument("polygon is degenerate");
    const double orient = area2 > 0 ? 1.0 : -1.0;
    HalfPlanes hp;
    for (size_t i = 0; i < k; ++i) {
        const auto& p = verts[i];
        const auto& q = verts[(i + 1) % k];
        // Outward normal for the edge p->q, given the orientation.
        double nx = orient * (q[1] - p[1]);
        double ny = orient * (p[0] - q[0]);
        double len = std::hypot(nx, ny);
        if (len < kGeomTol) throw std::invalid_argument("polygon has a repeated vertex");
        nx /= len;
        ny /= len;
        hp.rows.push_back({nx, ny, nx * p[0] + ny * p[1]});
        // Convexity: every other vertex must lie inside this edge's half-plane.
        for (size_t j = 0; j < k; ++j)
            if (nx * verts[j][0] + ny * verts[j][1] > hp.rows.back()[2] + kGeomTol)
                throw std::invalid_argument("non-convex polygon passed to convex_polygon");
    }
    return hp;
}

Domain lattice_domain_2d(const std::function<bool(double, double)>& member,
                         double x0, double x1, double y0, double y1, int n) {
    const int ilo = static_cast<int>(std::ceil(x0 * n - kGeomTol));
    const int ihi = static_cast<int>(std::floor(x1 * n + kGeomTol));
    const int jlo = static_cast<int>(std::ceil(y0 * n - kGeomTol));
    const int jhi = static_cast<int>(std::floor(y1 * n + kGeomTol));

    std::vector<Point> pts;
    std::vector<int> ikeys, jkeys;
    for (int i = ilo; i <= ihi; ++i) {
        for (int j = jlo; j <= jhi; ++j) {
            const double x = static_cast<double>(i) / n;
            const double y = static_cast<double>(j) / n;
            if (!member(x, y)) continue;
            Point p;
            p.coords = {x, y};
            pts.push_back(std::move(p));
            ikeys.push_back(i);
            jkeys.push_back(j);
        }
    }
    if (pts.empty())
        throw std::invalid_argument("region has no lattice points at this resolution");

    std::vector<std::vector<int>> factors(2, std::vector<int>(pts.size()));
    for (size_t p = 0; p < pts.size(); ++p) {
        factors[0][p] = ikeys[p];
        factors[1][p] = jkeys[p];
    }
    return validate_domain(std::move(pts), std::move(factors));
}

Domain product_grid_domain(const std::vector<int>& dims, int n) {
    const int nf = static_cast<int>(dims.size());
    long total = 1;
    for (int dsz : dims) total *= dsz;
    std::vector<Point> pts;
    pts.reserve(total);
    std::vector<std::vector<int>> factors(nf, std::vector<int>(total));
    std::vector<int> idx(nf, 0);
    for (long p = 0; p < total; ++p) {
        Point pt;
        pt.coords.resize(nf);
        for (int i = 0; i < nf; ++i) {
            pt.coords[i] = static_cast<double>(idx[i]) / n;
            factors[i][p] = idx[i];
        }
        pts.push_back(std::move(pt));
        for (int i = nf - 1; i >= 0; --i) {
            if (++idx[i] < dims[i]) break;
            idx[i] = 0;
        }
    }
    return validate_domain(std::move(pts), std::move(factors));
}

}  // namespace

Domain generate_domain(const RegionSpec& spec, int resolution) {
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    const int n = resolution;
    using K = RegionSpec::Kind;
    switch (spec.kind) {
        case K::rectangle: {
            const double a = spec.params[0], b = spec.params[1];
            const double c = spec.params[2], d = spec.params[3];
            return lattice_domain_2d(
                [=](double x, double y) { return in_rect(x, y, a, b, c, d); }, a, b, c, d, n);
        }
        case K::lshape_k1:
            return lattice_domain_2d(
                [](double x, double y) {
                    return in_rect(x, y, 0, 1, 0, 0.5) || in_rect(x, y, 0, 0.5, 0, 1);
                },
                0, 1, 0, 1, n);
        case K::union_ncu:
            return lattice_domain_2d(
                [](double x, double y) {
                    return in_rect(x, y, 0, 1, 0, 2) || in_rect(x, y, 1, 2, 0, 1);
                },
                0, 2, 0, 2, n);
        case K::triangle_abc: {
            auto hp = polygon_halfplanes({{{0, 0}, {2, 2}, {1, 0}}});
            return lattice_domain_2d(
                [hp](double x, double y) { return hp.contains(x, y); }, 0, 2, 0, 2, n);
        }
        case K::convex_polygon: {
            auto hp = polygon_halfplanes(spec.vertices);
            double x0 = spec.vertices[0][0], x1 = x0, y0 = spec.vertices[0][1], y1 = y0;
            for (const auto& v : spec.vertices) {
                x0 = std::min(x0, v[0]);
                x1 = std::max(x1, v[0]);
                y0 = std::min(y0, v[1]);
                y1 = std::max(y1, v[1]);
            }
            return lattice_domain_2d(
                [hp](double x, double y) { return hp.contains(x, y); }, x0, x1, y0, y1, n);
        }
        case K::product_grid:
            return product_grid_domain(spec.dims, n);
    }
    throw std::invalid_argument("unknown region kind");
}

void add_inner_product_factor(Domain& d, const std::vector<double>& direction,
                              double bin_width) {
    if (d.coord_dim() == 0) throw std::invalid_argument("domain has no coordinates");
    if (bin_width <= 0) throw std::invalid_argument("bin_width must be positive");
    double norm = 0;
    for (double a : direction) norm += a * a;
    if (norm == 0) throw std::invalid_argument("direction must be nonzero");
    if (direction.size() != static_cast<size_t>(d.coord_dim()))
        throw std::invalid_argument("direction dimension mismatch");

    std::vector<int> raw(d.num_points());
    for (int p = 0; p < d.num_points(); ++p) {
        double dot = 0;
        for (int k = 0; k < d.coord_dim(); ++k) dot += direction[k] * d.points[p].coords[k];
        raw[p] = static_cast<int>(std::floor(dot / bin_width + kGeomTol));
    }
    d.class_counts.push_back(renumber_contiguous(raw, nullptr));
    d.factors.push_back(std::move(raw));
}

}  // namespace sumapprox
