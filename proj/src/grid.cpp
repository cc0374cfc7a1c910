#include "concavity/grid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace concavity {

namespace {

// Boundary crossing along p + t*h*dir for t in (0, 1]; the node at p is
// interior and the lattice neighbour at t=1 is not. Bisection on the signed
// distance to 1e-12 h resolution.
double arm_fraction(const Domain& dom, Vec2 p, Vec2 dir, double h) {
    double lo = 0.0, hi = 1.0;
    double fhi = dom.sdf(p + h * dir);
    if (fhi < 0.0) return 1.0;  // neighbour is inside but excluded: full arm
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        if (dom.sdf(p + (mid * h) * dir) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12) break;
    }
    return std::max(0.5 * (lo + hi), 1e-12);
}

}  // namespace

GridPtr build_grid(const Domain& domain, double h) {
    const GeometryStats& st = domain.stats();
    if (!(h > 0.0))
        throw std::invalid_argument("fdsolver.build_grid: h must be positive");
    if (!(h < st.inradius / 4.0))
        throw std::invalid_argument(
            "fdsolver.build_grid: h must be smaller than a quarter of the inradius");

    auto grid = std::make_shared<Grid>(Grid{domain, h, {}, 0, 0, {}, {}, {}});
    BBox box = domain.bounding_box();
    Vec2 c = domain.spec().center;
    int kx = static_cast<int>(
                 std::ceil(std::max(box.hi.x - c.x, c.x - box.lo.x) / h)) +
             1;
    int ky = static_cast<int>(
                 std::ceil(std::max(box.hi.y - c.y, c.y - box.lo.y) / h)) +
             1;
    grid->origin = {c.x - kx * h, c.y - ky * h};
    grid->nx = 2 * kx + 1;
    grid->ny = 2 * ky + 1;
    grid->node_of_cell.assign(static_cast<size_t>(grid->nx) * grid->ny, -1);

    const double cut = -1e-9 * h;  // nodes this close to the boundary are excluded
    for (int iy = 0; iy < grid->ny; ++iy) {
        for (int ix = 0; ix < grid->nx; ++ix) {
            if (domain.sdf(grid->position(ix, iy)) <= cut) {
                grid->node_of_cell[static_cast<size_t>(iy) * grid->nx + ix] =
                    static_cast<int32_t>(grid->nodes.size());
                grid->nodes.push_back({ix, iy});
            }
        }
    }
    if (grid->nodes.empty())
        throw std::invalid_argument("fdsolver.build_grid: no interior nodes at this h");

    // 4-connectivity check: the discrete interior must be a single component
    std::vector<uint8_t> seen(grid->nodes.size(), 0);
    std::queue<int32_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    size_t visited = 1;
    while (!frontier.empty()) {
        Grid::NodeRef n = grid->nodes[frontier.front()];
        frontier.pop();
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int32_t j = grid->at(n.ix + dx[k], n.iy + dy[k]);
            if (j >= 0 && !seen[j]) {
                seen[j] = 1;
                ++visited;
                frontier.push(j);
            }
        }
    }
    if (visited != grid->nodes.size())
        throw std::runtime_error(
            "fdsolver.build_grid: interior lattice is not connected at this h");

    grid->arms.resize(grid->nodes.size());
    for (size_t i = 0; i < grid->nodes.size(); ++i) {
        Grid::NodeRef n = grid->nodes[i];
        Vec2 p = grid->position(n);
        Grid::Arms a{1.0, 1.0, 1.0, 1.0};
        if (grid->at(n.ix + 1, n.iy) < 0) a.east = arm_fraction(domain, p, {1, 0}, h);
        if (grid->at(n.ix - 1, n.iy) < 0) a.west = arm_fraction(domain, p, {-1, 0}, h);
        if (grid->at(n.ix, n.iy + 1) < 0) a.north = arm_fraction(domain, p, {0, 1}, h);
        if (grid->at(n.ix, n.iy - 1) < 0) a.south = arm_fraction(domain, p, {0, -1}, h);
        grid->arms[i] = a;
    }
    return grid;
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double Field::max() const {
    double m = -1e300;
    for (double v : values) m = std::max(m, v);
    return m;
}

double Field::min() const {
    double m = 1e300;
    for (double v : values) m = std::min(m, v);
    return m;
}

Field apply_laplacian(const Field& u) {
    if (!u.grid) throw std::invalid_argument("fdsolver.apply_laplacian: field has no grid");
    const Grid& g = *u.grid;
    Field out(u.grid, 0.0);
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (size_t i = 0; i < g.size(); ++i) {
        Grid::NodeRef n = g.nodes[i];
        const Grid::Arms& a = g.arms[i];
        auto value = [&](int ix, int iy) {
            int32_t j = g.at(ix, iy);
            return j >= 0 ? u.values[j] : 0.0;  // Dirichlet zero outside
        };
        double ue = value(n.ix + 1, n.iy), uw = value(n.ix - 1, n.iy);
        double un = value(n.ix, n.iy + 1), us = value(n.ix, n.iy - 1);
        double up = u.values[i];
        double lx = 2.0 * inv_h2 *
                    (ue / (a.east * (a.east + a.west)) +
                     uw / (a.west * (a.east + a.west)) - up / (a.east * a.west));
        double ly = 2.0 * inv_h2 *
                    (un / (a.north * (a.north + a.south)) +
                     us / (a.south * (a.north + a.south)) - up / (a.north * a.south));
        out.values[i] = lx + ly;
    }
    return out;
}

}  // namespace concavity
