#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "concavity/grid.hpp"
#include "concavity/nonlinearity.hpp"

namespace concavity {

// Gradient and Hessian of a nodal field. Deep nodes (full 8-neighbour
// stencil) use centered differences; nodes nearer the boundary use a
// least-squares quadratic constrained through the zero boundary values at
// the arm intersections. Nodes whose fit is rejected are non-evaluable.
struct HessianField {
    GridPtr grid;
    std::vector<double> ux, uy;
    std::vector<double> uxx, uxy, uyy;
    std::vector<double> lambda_min, lambda_max;
    std::vector<uint8_t> evaluable;
    // local quadratic models for near-boundary nodes (coordinates scaled by
    // 1/h around the node); consumed by the field interpolator
    std::vector<uint8_t> has_model;
    std::vector<std::array<double, 6>> model;
    int rejected = 0;
};

HessianField hessian_field(const Field& u);

struct BoundaryHessianSample {
    double arclength = 0.0;
    Vec2 point;
    Vec2 inward_normal;
    bool evaluable = false;
    double ux = 0.0, uy = 0.0;
    double uxx = 0.0, uxy = 0.0, uyy = 0.0;
    double lambda_min = 0.0, lambda_max = 0.0;
    double normal_second = 0.0;   // n^T (D^2 u) n
    double tangent_second = 0.0;  // t^T (D^2 u) t
};

// Hessian spectrum at m equispaced boundary points, each from a quadratic
// fitted through the zero boundary arc plus interior values within 3h.
std::vector<BoundaryHessianSample> boundary_hessian(const Field& u, int m);

struct Tolerances {
    double interior = 0.0;
    double boundary = 0.0;
};

// tau_int = 5 h |f(u)|_inf, tau_bdy = 20 h |f(u)|_inf, with the source
// magnitude measured from the discrete Laplacian of u itself.
Tolerances default_tolerances(const Field& u);

struct ConcavityReport {
    bool boundary_nsd = false;
    bool boundary_strictly_negative = false;  // lambda_max < -tau at all probes
    bool interior_nsd = false;
    double max_lambda_interior = 0.0;
    Vec2 argmax_interior;
    double min_lambda_interior = 0.0;
    Vec2 argmin_interior;
    double max_lambda_boundary = 0.0;
    double argmax_boundary_arclength = 0.0;
    double lambda_max_at_peak = 0.0;
    Vec2 peak;
    double peak_value = 0.0;
    Tolerances tolerances;
    int interior_evaluated = 0, interior_rejected = 0;
    int boundary_evaluated = 0, boundary_rejected = 0;
    bool boundary_checked = true;   // false for transform reports
    std::string verdict_kind = "concavity";  // "convexity" for sqrt transform
    std::string transform = "none";

    bool implication_holds() const { return !boundary_nsd || interior_nsd; }
};

// Boundary + interior NSD classification with witnesses.
ConcavityReport concavity_report(const Field& u, const HessianField& hess,
                                 const std::vector<BoundaryHessianSample>& bdy,
                                 std::optional<Tolerances> tol = {});

// Convenience form: computes the Hessian field and m = ceil(perimeter/h)
// boundary probes itself.
ConcavityReport concavity_report(const Field& u, std::optional<Tolerances> tol = {});

struct TransformSpec {
    enum class Kind { Sqrt, Power, Log } kind = Kind::Power;
    double alpha = 1.0;  // power exponent

    static TransformSpec sqrt() { return {Kind::Sqrt, 0.5}; }
    static TransformSpec power(double alpha) { return {Kind::Power, alpha}; }
    static TransformSpec log() { return {Kind::Log, 0.0}; }
    std::string name() const;
};

// Applies the transform nodewise, recomputes the Hessian field, and issues
// the interior verdict over nodes with u >= 10 tau_int (the restriction is
// dropped for power transforms with alpha >= 1, which stay regular at 0).
// For sqrt the tested verdict is convexity: lambda_min >= -tau.
ConcavityReport transform_concavity(const Field& u, TransformSpec transform,
                                    std::optional<Tolerances> tol = {});

struct SweepRow {
    double aspect = 0.0;
    double lambda_max_at_peak = 0.0;
    double log_abs_lambda_max = 0.0;
    double peak_value = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    bool all_negative = false;
};

// Torsion-type solves over rounded-rectangles of width 1, length = aspect,
// corner radius 1/4; reports lambda_max at the interpolated peak per aspect
// and the least-squares line through (aspect, log |lambda_max|).
SweepResult eccentricity_sweep(const std::vector<double>& aspects, double h,
                               const Nonlinearity& f, int workers = 0);

// Interpolating evaluator for (value, gradient, Hessian) jets at arbitrary
// interior points: bilinear where the four cell corners are deep evaluable
// nodes, otherwise the quadratic model of the nearest evaluable fit node.
// Borrows both arguments; they must outlive the evaluator.
class FieldEvaluator {
  public:
    FieldEvaluator(const Field& u, const HessianField& hess);

    struct Jet {
        bool ok = false;
        double value = 0.0;
        Vec2 grad;
        double uxx = 0.0, uxy = 0.0, uyy = 0.0;
    };

    Jet jet(Vec2 p) const;
    // value-only interpolation (same fallback rules)
    double value(Vec2 p, bool* ok = nullptr) const;

  private:
    const Field& u_;
    const HessianField& hess_;
};

// Second derivative along `dir` interpolated between boundary Hessian
// samples by arclength; ok=false when a bracketing sample is non-evaluable.
class BoundaryJet {
  public:
    BoundaryJet(const Domain& domain, std::vector<BoundaryHessianSample> samples);

    double second_derivative(double arclength, Vec2 dir, bool* ok) const;
    const std::vector<BoundaryHessianSample>& samples() const { return samples_; }

  private:
    double perimeter_;
    std::vector<BoundaryHessianSample> samples_;
};

}  // namespace concavity
