#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "concavity/geometry.hpp"
#include "concavity/vec2.hpp"

namespace concavity {

// Uniform lattice clipped to a domain. Interior nodes are lattice points with
// sdf <= -1e-9 h; each interior node stores the four arm fractions
// theta in (0, 1] giving the distance (in units of h) to either the
// neighbouring node or the boundary crossing along each axis direction.
class Grid {
  public:
    struct NodeRef {
        int ix;
        int iy;
    };
    struct Arms {
        double east, west, north, south;
    };

    Domain domain;
    double h = 0.0;
    Vec2 origin;              // world position of lattice index (0, 0)
    int nx = 0, ny = 0;       // lattice extent
    std::vector<int32_t> node_of_cell;  // nx*ny, -1 for non-interior lattice points
    std::vector<NodeRef> nodes;         // interior nodes, row-major by (iy, ix)
    std::vector<Arms> arms;             // one per interior node

    Vec2 position(int ix, int iy) const {
        return {origin.x + h * ix, origin.y + h * iy};
    }
    Vec2 position(NodeRef n) const { return position(n.ix, n.iy); }

    // interior node index at lattice point, or -1
    int32_t at(int ix, int iy) const {
        if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return -1;
        return node_of_cell[static_cast<size_t>(iy) * nx + ix];
    }

    size_t size() const { return nodes.size(); }

    // true if the node has all four lattice neighbours interior
    bool has_full_stencil(int32_t node) const {
        const NodeRef& n = nodes[node];
        return at(n.ix + 1, n.iy) >= 0 && at(n.ix - 1, n.iy) >= 0 &&
               at(n.ix, n.iy + 1) >= 0 && at(n.ix, n.iy - 1) >= 0;
    }
};

using GridPtr = std::shared_ptr<const Grid>;

// Builds the clipped lattice. Requires h < inradius / 4; throws if the
// interior is empty or not 4-connected.
GridPtr build_grid(const Domain& domain, double h);

// Nodal scalar field over a grid's interior nodes.
struct Field {
    GridPtr grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(GridPtr g, double fill = 0.0)
        : grid(std::move(g)), values(grid->size(), fill) {}

    double max_abs() const;
    double max() const;
    double min() const;
};

// Cut-cell five-point Laplacian (exact on quadratics for exact arm
// fractions); boundary values are taken as zero.
Field apply_laplacian(const Field& u);

}  // namespace concavity
