#pragma once

#include <vector>

#include "concavity/fdsolver.hpp"
#include "concavity/nonlinearity.hpp"
#include "concavity/radial.hpp"

namespace concavity {

// Symmetric decreasing rearrangement of a grid field onto the disk of equal
// discrete measure.  Every interior node carries measure cell_measure = h^2;
// the k-th largest value occupies the annulus with outer radius
// sqrt((k+1) h^2 / pi), so annulus areas are exactly h^2 each.
//
// `sorted` is the exact step representation (descending node values) used by
// value_at / measure_above / integral.  `radii` / `values` hold the profile
// resampled onto a uniform radial mesh by area-weighted cell averages, fine
// enough that each uniform cell holds at most one source cell of area; this
// is the serialization surface.
struct RearrangedProfile {
    std::vector<double> radii;    // uniform, increasing, radii.front() == 0
    std::vector<double> values;   // non-increasing; values.front() == max u
    std::vector<double> sorted;   // exact descending node values
    double cell_measure = 0.0;    // h^2

    double outer_radius() const;          // sqrt(N h^2 / pi)
    double value_at(double r) const;      // exact step evaluation, 0 outside
    double measure_above(double t) const; // |{u* > t}|, exact layer cake
    double integral() const;              // ∫ u* dA = Σ u h^2, exact
};

RearrangedProfile rearrange_field(const Field& u);

// Comparison of the rearranged solution u* against v, the solution of the
// linear radial problem -Δv = (f(u))* on the equal-measure ball.  The source
// is the rearranged step function (monotone f commutes with sorting), so v
// has a per-annulus closed form and min_gap = min over annulus edges of
// v - u* is exact up to roundoff.
struct TalentiReport {
    RearrangedProfile u_star;
    RadialSolution v;
    double min_gap = 0.0;  // min over the support of u* of v - u*
    double max_u = 0.0;
    double max_v = 0.0;
    // The interior solve had a contraction certificate. Without it the
    // discrete solution (and hence the gap) carries an uncontrolled
    // amplification of the truncation error, so the v >= u* bound is only
    // asserted against its tolerance on certified runs.
    bool certified = false;
};

TalentiReport talenti_compare(const Domain& domain, const Nonlinearity& f,
                              double h);

// Equal-measure-ball maximum comparison: solves the semilinear problem on the
// domain and on the ball of the same area, and tests max_u <= max_psi within
// a discretization tolerance.  When the rearrangement admissibility condition
// fails the run still executes but is flagged exploratory and asserts
// nothing.
struct RearrangementExperiment {
    double max_u = 0.0;
    double max_psi = 0.0;
    ConditionReport condition;
    bool exploratory = false;  // condition failed; data only
    bool pass = false;         // max_u <= max_psi + tolerance
    double tolerance = 0.0;    // 5 h^2 + radial quadrature margin
    double min_profile_gap = 0.0;  // min over u* support of psi - u*
    RearrangedProfile u_star;
    RadialSolution psi;
};

RearrangementExperiment rearrangement_experiment(const Domain& domain,
                                                 const Nonlinearity& f,
                                                 double h);

}  // namespace concavity
