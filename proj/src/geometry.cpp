#include "concavity/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "concavity/numerics.hpp"

namespace concavity {

namespace {

constexpr double kPi = M_PI;

double wrap_arclength(double s, double perimeter) {
    double w = std::fmod(s, perimeter);
    if (w < 0.0) w += perimeter;
    return w;
}

// closest point on segment [a, b], with arclength offset along the segment
struct SegmentHit {
    Vec2 point;
    double t;  // distance from a along the segment
    double dist;
};

SegmentHit closest_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = norm2(ab);
    double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    Vec2 q = a + t * ab;
    return {q, t * std::sqrt(len2), norm(p - q)};
}

}  // namespace

namespace detail {

class ShapeImpl {
  public:
    virtual ~ShapeImpl() = default;
    virtual double sdf(Vec2 p) const = 0;
    virtual BoundaryPoint project(Vec2 p) const = 0;
    virtual BoundaryPoint at_arclength(double s) const = 0;  // s already wrapped
    virtual GeometryStats stats() const = 0;
    virtual BBox bbox() const = 0;
};

// ---------------------------------------------------------------- disk

class DiskImpl final : public ShapeImpl {
  public:
    explicit DiskImpl(double radius) : r_(radius) {}

    double sdf(Vec2 p) const override { return norm(p) - r_; }

    BoundaryPoint project(Vec2 p) const override {
        Vec2 dir = norm(p) > 0.0 ? normalized(p) : Vec2{1.0, 0.0};
        double phi = std::atan2(dir.y, dir.x);
        if (phi < 0.0) phi += 2.0 * kPi;
        return {r_ * dir, -dir, r_ * phi};
    }

    BoundaryPoint at_arclength(double s) const override {
        double phi = s / r_;
        Vec2 dir{std::cos(phi), std::sin(phi)};
        return {r_ * dir, -dir, s};
    }

    GeometryStats stats() const override {
        return {kPi * r_ * r_, r_, 2.0 * r_, 2.0 * kPi * r_, true};
    }

    BBox bbox() const override { return {{-r_, -r_}, {r_, r_}}; }

  private:
    double r_;
};

// ---------------------------------------------------------------- ellipse

// Arclength table for (a cos t, b sin t), t in [0, 2pi]. Cumulative sums of
// per-cell Gauss quadrature; inversion by bracketed Newton on the table.
class EllipseArcTable {
  public:
    EllipseArcTable(double a, double b) : a_(a), b_(b) {
        cum_.resize(kCells + 1, 0.0);
        auto spd = [this](double t) { return speed(t); };
        for (int k = 0; k < kCells; ++k) {
            double t0 = 2.0 * kPi * k / kCells;
            double t1 = 2.0 * kPi * (k + 1) / kCells;
            cum_[k + 1] = cum_[k] + numerics::gauss5(spd, t0, t1);
        }
    }

    double perimeter() const { return cum_.back(); }

    double speed(double t) const { return std::hypot(a_ * std::sin(t), b_ * std::cos(t)); }

    double s_of_t(double t) const {
        double dt = 2.0 * kPi / kCells;
        int k = std::clamp(static_cast<int>(t / dt), 0, kCells - 1);
        auto spd = [this](double u) { return speed(u); };
        return cum_[k] + numerics::gauss5(spd, k * dt, t);
    }

    double t_of_s(double s) const {
        auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        int k = std::clamp(static_cast<int>(it - cum_.begin()) - 1, 0, kCells - 1);
        double dt = 2.0 * kPi / kCells;
        double t = k * dt + dt * (s - cum_[k]) / (cum_[k + 1] - cum_[k]);
        for (int iter = 0; iter < 8; ++iter) {
            double g = s_of_t(t) - s;
            t -= g / speed(t);
            t = std::clamp(t, 0.0, 2.0 * kPi);
        }
        return t;
    }

  private:
    static constexpr int kCells = 2048;
    double a_, b_;
    std::vector<double> cum_;
};

class EllipseImpl final : public ShapeImpl {
  public:
    EllipseImpl(double a, double b) : a_(a), b_(b), arc_(a, b) {}

    double sdf(Vec2 p) const override {
        Vec2 cp = closest_point(p);
        double dist = norm(p - cp);
        double level = (p.x / a_) * (p.x / a_) + (p.y / b_) * (p.y / b_);
        return level < 1.0 ? -dist : dist;
    }

    BoundaryPoint project(Vec2 p) const override {
        Vec2 cp = closest_point(p);
        double t = std::atan2(cp.y / b_, cp.x / a_);
        if (t < 0.0) t += 2.0 * kPi;
        return {cp, inward_normal(cp), arc_.s_of_t(t)};
    }

    BoundaryPoint at_arclength(double s) const override {
        double t = arc_.t_of_s(s);
        Vec2 cp{a_ * std::cos(t), b_ * std::sin(t)};
        return {cp, inward_normal(cp), s};
    }

    GeometryStats stats() const override {
        return {kPi * a_ * b_, std::min(a_, b_), 2.0 * std::max(a_, b_),
                arc_.perimeter(), true};
    }

    BBox bbox() const override { return {{-a_, -b_}, {a_, b_}}; }

  private:
    Vec2 inward_normal(Vec2 cp) const {
        return -normalized({cp.x / (a_ * a_), cp.y / (b_ * b_)});
    }

    // Closest point on the ellipse with semi-axes e0 >= e1 to (y0, y1) in the
    // closed first quadrant. Root of F(t) = (e0 y0/(t+e0^2))^2
    // + (e1 y1/(t+e1^2))^2 - 1, which is strictly decreasing for t > -e1^2;
    // the bracket below always straddles the root.
    static Vec2 closest_first_quadrant(double e0, double e1, double y0, double y1) {
        if (y1 > 0.0) {
            if (y0 > 0.0) {
                auto F = [&](double t) {
                    double r0 = e0 * y0 / (t + e0 * e0);
                    double r1 = e1 * y1 / (t + e1 * e1);
                    return r0 * r0 + r1 * r1 - 1.0;
                };
                double lo = -e1 * e1 + 0.5 * e1 * y1;
                double hi = -e1 * e1 + std::hypot(e0 * y0, e1 * y1);
                double t = lo;
                double flo = F(lo);
                if (flo <= 0.0) {
                    t = lo;
                } else {
                    for (int i = 0; i < 160; ++i) {
                        double mid = 0.5 * (lo + hi);
                        if (mid == lo || mid == hi) break;
                        if (F(mid) > 0.0)
                            lo = mid;
                        else
                            hi = mid;
                    }
                    t = 0.5 * (lo + hi);
                }
                return {e0 * e0 * y0 / (t + e0 * e0), e1 * e1 * y1 / (t + e1 * e1)};
            }
            return {0.0, e1};  // on the minor axis the minor vertex is closest
        }
        // y1 == 0: closest point leaves the major axis inside the evolute
        double denom = e0 * e0 - e1 * e1;
        if (denom > 0.0 && e0 * y0 < denom) {
            double x0 = e0 * e0 * y0 / denom;
            double f = x0 / e0;
            return {x0, e1 * std::sqrt(std::max(0.0, 1.0 - f * f))};
        }
        return {e0, 0.0};
    }

    Vec2 closest_point(Vec2 p) const {
        double sx = p.x < 0.0 ? -1.0 : 1.0;
        double sy = p.y < 0.0 ? -1.0 : 1.0;
        double u = std::abs(p.x), v = std::abs(p.y);
        Vec2 cp;
        if (a_ >= b_) {
            cp = closest_first_quadrant(a_, b_, u, v);
        } else {
            Vec2 swapped = closest_first_quadrant(b_, a_, v, u);
            cp = {swapped.y, swapped.x};
        }
        return {sx * cp.x, sy * cp.y};
    }

    double a_, b_;
    EllipseArcTable arc_;
};

// ---------------------------------------------------------------- rectangle

class RectangleImpl final : public ShapeImpl {
  public:
    RectangleImpl(double length, double width)
        : hx_(0.5 * length), hy_(0.5 * width) {}

    double sdf(Vec2 p) const override {
        double qx = std::abs(p.x) - hx_, qy = std::abs(p.y) - hy_;
        double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
        return outside + std::min(std::max(qx, qy), 0.0);
    }

    BoundaryPoint project(Vec2 p) const override {
        double s;
        bool inside = std::abs(p.x) < hx_ && std::abs(p.y) < hy_;
        if (!inside) {
            Vec2 cp{std::clamp(p.x, -hx_, hx_), std::clamp(p.y, -hy_, hy_)};
            s = arclength_of(cp);
        } else {
            double dright = hx_ - p.x, dleft = p.x + hx_;
            double dtop = hy_ - p.y, dbottom = p.y + hy_;
            double d = std::min({dright, dleft, dtop, dbottom});
            Vec2 cp;
            if (d == dright)
                cp = {hx_, p.y};
            else if (d == dleft)
                cp = {-hx_, p.y};
            else if (d == dbottom)
                cp = {p.x, -hy_};
            else
                cp = {p.x, hy_};
            s = arclength_of(cp);
        }
        return at_arclength(s);
    }

    BoundaryPoint at_arclength(double s) const override {
        double L = 2.0 * hx_, W = 2.0 * hy_;
        std::array<double, 4> ends{L, L + W, 2.0 * L + W, 2.0 * L + 2.0 * W};
        // corners get the averaged normal of the adjacent edges
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        if (s == 0.0) return {{-hx_, -hy_}, {inv_sqrt2, inv_sqrt2}, s};
        if (s == ends[0]) return {{hx_, -hy_}, {-inv_sqrt2, inv_sqrt2}, s};
        if (s == ends[1]) return {{hx_, hy_}, {-inv_sqrt2, -inv_sqrt2}, s};
        if (s == ends[2]) return {{-hx_, hy_}, {inv_sqrt2, -inv_sqrt2}, s};
        if (s < ends[0]) return {{-hx_ + s, -hy_}, {0.0, 1.0}, s};
        if (s < ends[1]) return {{hx_, -hy_ + (s - ends[0])}, {-1.0, 0.0}, s};
        if (s < ends[2]) return {{hx_ - (s - ends[1]), hy_}, {0.0, -1.0}, s};
        return {{-hx_, hy_ - (s - ends[2])}, {1.0, 0.0}, s};
    }

    GeometryStats stats() const override {
        double L = 2.0 * hx_, W = 2.0 * hy_;
        return {L * W, std::min(hx_, hy_), std::hypot(L, W), 2.0 * (L + W), false};
    }

    BBox bbox() const override { return {{-hx_, -hy_}, {hx_, hy_}}; }

  private:
    double arclength_of(Vec2 cp) const {
        double L = 2.0 * hx_, W = 2.0 * hy_;
        // classify by which wall the point lies on (corners fall through
        // consistently to the first matching wall)
        if (cp.y == -hy_ && cp.x < hx_) return cp.x + hx_;
        if (cp.x == hx_ && cp.y < hy_) return L + (cp.y + hy_);
        if (cp.y == hy_ && cp.x > -hx_) return L + W + (hx_ - cp.x);
        return 2.0 * L + W + (hy_ - cp.y);
    }

    double hx_, hy_;
};

// ------------------------------------------------------- rounded rectangle

class RoundedRectangleImpl final : public ShapeImpl {
  public:
    RoundedRectangleImpl(double length, double width, double rho)
        : hx_(0.5 * length - rho), hy_(0.5 * width - rho), rho_(rho) {}

    double sdf(Vec2 p) const override {
        double qx = std::abs(p.x) - hx_, qy = std::abs(p.y) - hy_;
        double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
        return outside + std::min(std::max(qx, qy), 0.0) - rho_;
    }

    BoundaryPoint project(Vec2 p) const override {
        Vec2 q0{std::clamp(p.x, -hx_, hx_), std::clamp(p.y, -hy_, hy_)};
        Vec2 d = p - q0;
        if (norm(d) == 0.0) {
            // inside the core box: offset from the nearest core wall
            double ddx = hx_ - std::abs(p.x), ddy = hy_ - std::abs(p.y);
            if (ddx < ddy) {
                double sgn = p.x >= 0.0 ? 1.0 : -1.0;
                return project(Vec2{sgn * (hx_ + rho_), p.y});
            }
            double sgn = p.y >= 0.0 ? 1.0 : -1.0;
            return project(Vec2{p.x, sgn * (hy_ + rho_)});
        }
        Vec2 dir = normalized(d);
        return at_arclength(arclength_of(q0, dir));
    }

    BoundaryPoint at_arclength(double s) const override {
        double le = 2.0 * hx_;   // straight edge length (x direction)
        double se = 2.0 * hy_;   // straight edge length (y direction)
        double arc = 0.5 * kPi * rho_;
        struct Piece {
            double len;
        };
        std::array<double, 8> lens{le, arc, se, arc, le, arc, se, arc};
        double acc = 0.0;
        int piece = 7;
        double t = s;
        for (int k = 0; k < 8; ++k) {
            if (s < acc + lens[k]) {
                piece = k;
                t = s - acc;
                break;
            }
            acc += lens[k];
        }
        double W2 = hy_ + rho_, L2 = hx_ + rho_;
        switch (piece) {
            case 0: return {{-hx_ + t, -W2}, {0.0, 1.0}, s};
            case 1: return arc_point({hx_, -hy_}, -0.5 * kPi + t / rho_, s);
            case 2: return {{L2, -hy_ + t}, {-1.0, 0.0}, s};
            case 3: return arc_point({hx_, hy_}, t / rho_, s);
            case 4: return {{hx_ - t, W2}, {0.0, -1.0}, s};
            case 5: return arc_point({-hx_, hy_}, 0.5 * kPi + t / rho_, s);
            case 6: return {{-L2, hy_ - t}, {1.0, 0.0}, s};
            default: return arc_point({-hx_, -hy_}, kPi + t / rho_, s);
        }
    }

    GeometryStats stats() const override {
        double L = 2.0 * (hx_ + rho_), W = 2.0 * (hy_ + rho_);
        double area = L * W - (4.0 - kPi) * rho_ * rho_;
        double diameter = 2.0 * (std::hypot(hx_, hy_) + rho_);
        double per = 4.0 * (hx_ + hy_) + 2.0 * kPi * rho_;
        return {area, 0.5 * std::min(L, W), diameter, per, true};
    }

    BBox bbox() const override {
        return {{-(hx_ + rho_), -(hy_ + rho_)}, {hx_ + rho_, hy_ + rho_}};
    }

  private:
    BoundaryPoint arc_point(Vec2 center, double theta, double s) const {
        Vec2 dir{std::cos(theta), std::sin(theta)};
        return {center + rho_ * dir, -dir, s};
    }

    double arclength_of(Vec2 q0, Vec2 dir) const {
        double le = 2.0 * hx_, se = 2.0 * hy_, arc = 0.5 * kPi * rho_;
        bool corner_x = std::abs(q0.x) == hx_ && hx_ > 0.0;
        bool corner_y = std::abs(q0.y) == hy_ && hy_ > 0.0;
        bool on_corner = (corner_x || hx_ == 0.0) && (corner_y || hy_ == 0.0);
        if (on_corner && std::abs(dir.x) > 1e-15 && std::abs(dir.y) > 1e-15) {
            double theta = std::atan2(dir.y, dir.x);
            if (q0.x >= 0.0 && q0.y <= 0.0 && theta < 0.0)  // BR arc
                return le + (theta + 0.5 * kPi) * rho_;
            if (q0.x >= 0.0 && q0.y >= 0.0 && theta >= 0.0 && theta <= 0.5 * kPi)
                return le + arc + se + theta * rho_;  // TR arc
            if (q0.x <= 0.0 && q0.y >= 0.0 && theta >= 0.5 * kPi)
                return 2.0 * le + 2.0 * arc + se + (theta - 0.5 * kPi) * rho_;  // TL
            double th = theta < 0.0 ? theta + 2.0 * kPi : theta;  // BL arc
            return 2.0 * le + 3.0 * arc + 2.0 * se + (th - kPi) * rho_;
        }
        // edge contact
        if (dir.y < -0.5) return q0.x + hx_;                              // bottom
        if (dir.x > 0.5) return le + arc + (q0.y + hy_);                  // right
        if (dir.y > 0.5) return 2.0 * arc + le + se + (hx_ - q0.x);       // top
        return 3.0 * arc + 2.0 * le + se + (hy_ - q0.y);                  // left
    }

    double hx_, hy_, rho_;
};

// ----------------------------------------------------- equilateral triangle

class TriangleImpl final : public ShapeImpl {
  public:
    explicit TriangleImpl(double side) : side_(side) {
        double half = 0.5 * side;
        double y_base = -side / (2.0 * std::sqrt(3.0));
        double y_apex = side / std::sqrt(3.0);
        v_[0] = {-half, y_base};
        v_[1] = {half, y_base};
        v_[2] = {0.0, y_apex};
    }

    double sdf(Vec2 p) const override {
        double best = std::numeric_limits<double>::infinity();
        bool inside = true;
        for (int k = 0; k < 3; ++k) {
            Vec2 a = v_[k], b = v_[(k + 1) % 3];
            best = std::min(best, closest_on_segment(p, a, b).dist);
            if (cross(b - a, p - a) < 0.0) inside = false;
        }
        return inside ? -best : best;
    }

    BoundaryPoint project(Vec2 p) const override {
        double best = std::numeric_limits<double>::infinity();
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
            SegmentHit hit = closest_on_segment(p, v_[k], v_[(k + 1) % 3]);
            if (hit.dist < best) {
                best = hit.dist;
                s = k * side_ + hit.t;
            }
        }
        return at_arclength(wrap_arclength(s, 3.0 * side_));
    }

    BoundaryPoint at_arclength(double s) const override {
        int k = std::clamp(static_cast<int>(s / side_), 0, 2);
        double t = s - k * side_;
        Vec2 a = v_[k], b = v_[(k + 1) % 3];
        Vec2 dir = normalized(b - a);
        if (t == 0.0) {  // vertex: average the two adjacent edge normals
            Vec2 prev_dir = normalized(a - v_[(k + 2) % 3]);
            Vec2 n = normalized(perp_left(dir) + perp_left(prev_dir));
            return {a, n, s};
        }
        return {a + t * dir, perp_left(dir), s};
    }

    GeometryStats stats() const override {
        double area = std::sqrt(3.0) / 4.0 * side_ * side_;
        double inradius = side_ / (2.0 * std::sqrt(3.0));
        return {area, inradius, side_, 3.0 * side_, false};
    }

    BBox bbox() const override {
        return {{-0.5 * side_, -side_ / (2.0 * std::sqrt(3.0))},
                {0.5 * side_, side_ / std::sqrt(3.0)}};
    }

  private:
    double side_;
    Vec2 v_[3];
};

// ---------------------------------------------------------------- stadium

class StadiumImpl final : public ShapeImpl {
  public:
    StadiumImpl(double length, double cap_radius) : hl_(0.5 * length), r_(cap_radius) {}

    double sdf(Vec2 p) const override {
        double cx = std::clamp(p.x, -hl_, hl_);
        return std::hypot(p.x - cx, p.y) - r_;
    }

    BoundaryPoint project(Vec2 p) const override {
        Vec2 q0{std::clamp(p.x, -hl_, hl_), 0.0};
        Vec2 d = p - q0;
        Vec2 dir = norm(d) > 0.0 ? normalized(d) : Vec2{0.0, 1.0};
        double L = 2.0 * hl_, arc = kPi * r_;
        double s;
        if (q0.x > -hl_ && q0.x < hl_) {
            s = dir.y < 0.0 ? (q0.x + hl_) : (L + arc + (hl_ - q0.x));
        } else if (q0.x == hl_) {
            double theta = std::atan2(dir.y, dir.x);  // in [-pi, pi]
            if (theta >= -0.5 * kPi && theta <= 0.5 * kPi)
                s = L + (theta + 0.5 * kPi) * r_;
            else
                s = theta > 0.0 ? L + arc + (hl_ - q0.x) : q0.x + hl_;
        } else {
            double theta = std::atan2(dir.y, dir.x);
            if (theta >= 0.5 * kPi || theta <= -0.5 * kPi) {
                double th = theta < 0.0 ? theta + 2.0 * kPi : theta;
                s = 2.0 * L + arc + (th - 0.5 * kPi) * r_;
            } else {
                s = theta > 0.0 ? L + arc + (hl_ - q0.x) : q0.x + hl_;
            }
        }
        return at_arclength(wrap_arclength(s, 2.0 * L + 2.0 * arc));
    }

    BoundaryPoint at_arclength(double s) const override {
        double L = 2.0 * hl_, arc = kPi * r_;
        if (s < L) return {{-hl_ + s, -r_}, {0.0, 1.0}, s};
        if (s < L + arc) {
            double theta = -0.5 * kPi + (s - L) / r_;
            Vec2 dir{std::cos(theta), std::sin(theta)};
            return {Vec2{hl_, 0.0} + r_ * dir, -dir, s};
        }
        if (s < 2.0 * L + arc) return {{hl_ - (s - L - arc), r_}, {0.0, -1.0}, s};
        double theta = 0.5 * kPi + (s - 2.0 * L - arc) / r_;
        Vec2 dir{std::cos(theta), std::sin(theta)};
        return {Vec2{-hl_, 0.0} + r_ * dir, -dir, s};
    }

    GeometryStats stats() const override {
        double L = 2.0 * hl_;
        return {2.0 * r_ * L + kPi * r_ * r_, r_, L + 2.0 * r_,
                2.0 * L + 2.0 * kPi * r_, true};
    }

    BBox bbox() const override { return {{-(hl_ + r_), -r_}, {hl_ + r_, r_}}; }

  private:
    double hl_, r_;
};

}  // namespace detail

// ---------------------------------------------------------------- DomainSpec

DomainSpec DomainSpec::disk(double radius, Vec2 center) {
    DomainSpec s;
    s.kind = ShapeKind::Disk;
    s.radius = radius;
    s.center = center;
    return s;
}

DomainSpec DomainSpec::ellipse(double a, double b, Vec2 center) {
    DomainSpec s;
    s.kind = ShapeKind::Ellipse;
    s.a = a;
    s.b = b;
    s.center = center;
    return s;
}

DomainSpec DomainSpec::rectangle(double length, double width, Vec2 center) {
    DomainSpec s;
    s.kind = ShapeKind::Rectangle;
    s.length = length;
    s.width = width;
    s.center = center;
    return s;
}

DomainSpec DomainSpec::rounded_rectangle(double length, double width,
                                         double corner_radius, Vec2 center) {
    DomainSpec s;
    s.kind = ShapeKind::RoundedRectangle;
    s.length = length;
    s.width = width;
    s.corner_radius = corner_radius;
    s.center = center;
    return s;
}

DomainSpec DomainSpec::equilateral_triangle(double side, Vec2 center) {
    DomainSpec s;
    s.kind = ShapeKind::EquilateralTriangle;
    s.side = side;
    s.center = center;
    return s;
}

DomainSpec DomainSpec::stadium(double length, double cap_radius, Vec2 center) {
    DomainSpec s;
    s.kind = ShapeKind::Stadium;
    s.length = length;
    s.cap_radius = cap_radius;
    s.center = center;
    return s;
}

std::string shape_kind_name(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Disk: return "disk";
        case ShapeKind::Ellipse: return "ellipse";
        case ShapeKind::Rectangle: return "rectangle";
        case ShapeKind::RoundedRectangle: return "rounded-rectangle";
        case ShapeKind::EquilateralTriangle: return "equilateral-triangle";
        case ShapeKind::Stadium: return "stadium";
    }
    return "unknown";
}

// ---------------------------------------------------------------- Domain

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("geometry.make_domain: " + what);
}

std::shared_ptr<const detail::ShapeImpl> build_impl(const DomainSpec& s) {
    using namespace detail;
    switch (s.kind) {
        case ShapeKind::Disk:
            require(s.radius > 0.0, "disk radius must be positive");
            return std::make_shared<DiskImpl>(s.radius);
        case ShapeKind::Ellipse:
            require(s.a > 0.0 && s.b > 0.0, "ellipse semi-axes must be positive");
            return std::make_shared<EllipseImpl>(s.a, s.b);
        case ShapeKind::Rectangle:
            require(s.length > 0.0 && s.width > 0.0,
                    "rectangle sides must be positive");
            return std::make_shared<RectangleImpl>(s.length, s.width);
        case ShapeKind::RoundedRectangle:
            require(s.length > 0.0 && s.width > 0.0,
                    "rounded-rectangle sides must be positive");
            require(s.corner_radius > 0.0,
                    "rounded-rectangle corner radius must be positive");
            require(s.corner_radius <= 0.5 * std::min(s.length, s.width),
                    "rounded-rectangle corner radius exceeds half the shorter side");
            return std::make_shared<RoundedRectangleImpl>(s.length, s.width,
                                                          s.corner_radius);
        case ShapeKind::EquilateralTriangle:
            require(s.side > 0.0, "triangle side must be positive");
            return std::make_shared<TriangleImpl>(s.side);
        case ShapeKind::Stadium:
            require(s.length > 0.0, "stadium straight length must be positive");
            require(s.cap_radius > 0.0, "stadium cap radius must be positive");
            return std::make_shared<StadiumImpl>(s.length, s.cap_radius);
    }
    throw std::invalid_argument("geometry.make_domain: unknown shape kind");
}

}  // namespace

Domain::Domain(const DomainSpec& spec) : spec_(spec), impl_(build_impl(spec)) {
    require(std::isfinite(spec.center.x) && std::isfinite(spec.center.y),
            "center must be finite");
    require(std::isfinite(spec.rotation), "rotation must be finite");
    stats_ = impl_->stats();
}

Vec2 Domain::to_local(Vec2 p) const { return rotated(p - spec_.center, -spec_.rotation); }
Vec2 Domain::to_world(Vec2 p) const { return rotated(p, spec_.rotation) + spec_.center; }
Vec2 Domain::vec_to_world(Vec2 v) const { return rotated(v, spec_.rotation); }

double Domain::sdf(Vec2 p) const { return impl_->sdf(to_local(p)); }

BoundaryPoint Domain::project_boundary(Vec2 p) const {
    BoundaryPoint bp = impl_->project(to_local(p));
    return {to_world(bp.point), vec_to_world(bp.inward_normal), bp.arclength};
}

BoundaryPoint Domain::boundary_point(double arclength) const {
    BoundaryPoint bp =
        impl_->at_arclength(wrap_arclength(arclength, stats_.boundary_length));
    return {to_world(bp.point), vec_to_world(bp.inward_normal), bp.arclength};
}

BBox Domain::bounding_box() const {
    BBox local = impl_->bbox();
    Vec2 corners[4] = {{local.lo.x, local.lo.y},
                       {local.hi.x, local.lo.y},
                       {local.lo.x, local.hi.y},
                       {local.hi.x, local.hi.y}};
    BBox out{{1e300, 1e300}, {-1e300, -1e300}};
    for (Vec2 c : corners) {
        Vec2 w = to_world(c);
        out.lo.x = std::min(out.lo.x, w.x);
        out.lo.y = std::min(out.lo.y, w.y);
        out.hi.x = std::max(out.hi.x, w.x);
        out.hi.y = std::max(out.hi.y, w.y);
    }
    return out;
}

Domain make_domain(const DomainSpec& spec) { return Domain(spec); }

std::vector<BoundaryPoint> boundary_sample(const Domain& domain, int m) {
    if (m < 1)
        throw std::invalid_argument("geometry.boundary_sample: m must be >= 1");
    std::vector<BoundaryPoint> out;
    out.reserve(m);
    double per = domain.stats().boundary_length;
    for (int k = 0; k < m; ++k) out.push_back(domain.boundary_point(per * k / m));
    return out;
}

}  // namespace concavity
