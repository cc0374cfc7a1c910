#pragma once

#include <memory>
#include <string>
#include <vector>

#include "concavity/vec2.hpp"

namespace concavity {

enum class ShapeKind {
    Disk,
    Ellipse,
    Rectangle,
    RoundedRectangle,
    EquilateralTriangle,
    Stadium,
};

std::string shape_kind_name(ShapeKind kind);

// Immutable description of a domain. Dimensions are those of the shape in
// its local frame; `center` translates it and `rotation` (radians,
// counterclockwise) rotates it about the center.
struct DomainSpec {
    ShapeKind kind = ShapeKind::Disk;
    double radius = 0.0;         // disk
    double a = 0.0, b = 0.0;     // ellipse semi-axes
    double length = 0.0;         // rectangle / rounded-rectangle / stadium straight part
    double width = 0.0;          // rectangle / rounded-rectangle
    double corner_radius = 0.0;  // rounded-rectangle
    double side = 0.0;           // equilateral triangle
    double cap_radius = 0.0;     // stadium
    Vec2 center{0.0, 0.0};
    double rotation = 0.0;

    static DomainSpec disk(double radius, Vec2 center = {});
    static DomainSpec ellipse(double a, double b, Vec2 center = {});
    static DomainSpec rectangle(double length, double width, Vec2 center = {});
    static DomainSpec rounded_rectangle(double length, double width,
                                        double corner_radius, Vec2 center = {});
    static DomainSpec equilateral_triangle(double side, Vec2 center = {});
    static DomainSpec stadium(double length, double cap_radius, Vec2 center = {});
};

struct GeometryStats {
    double area = 0.0;
    double inradius = 0.0;
    double diameter = 0.0;
    double boundary_length = 0.0;
    bool smooth_boundary = false;
};

struct BoundaryPoint {
    Vec2 point;
    Vec2 inward_normal;  // unit vector; averaged edge normals at corners
    double arclength = 0.0;
};

namespace detail {
class ShapeImpl;
}

// Convex planar domain with exact signed-distance and boundary queries.
// All public queries operate in world coordinates.
class Domain {
  public:
    explicit Domain(const DomainSpec& spec);

    const DomainSpec& spec() const { return spec_; }
    const GeometryStats& stats() const { return stats_; }

    // signed distance: negative inside, zero on the boundary, positive outside
    double sdf(Vec2 p) const;

    // closest boundary point together with its arclength coordinate
    BoundaryPoint project_boundary(Vec2 p) const;

    // boundary point at arclength s (wrapped into [0, boundary_length))
    BoundaryPoint boundary_point(double arclength) const;

    // axis-aligned box containing the domain (world frame)
    BBox bounding_box() const;

    bool contains(Vec2 p) const { return sdf(p) < 0.0; }

  private:
    Vec2 to_local(Vec2 p) const;
    Vec2 to_world(Vec2 p) const;
    Vec2 vec_to_world(Vec2 v) const;

    DomainSpec spec_;
    GeometryStats stats_;
    std::shared_ptr<const detail::ShapeImpl> impl_;
};

// Validates the spec (positive dimensions, corner radius bound) and builds
// the domain. Throws std::invalid_argument with a descriptive message.
Domain make_domain(const DomainSpec& spec);

// m boundary points at equal arclength spacing, starting at arclength 0.
std::vector<BoundaryPoint> boundary_sample(const Domain& domain, int m);

}  // namespace concavity
