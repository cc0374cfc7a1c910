#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "concavity/analysis.hpp"
#include "concavity/geometry.hpp"
#include "concavity/nonlinearity.hpp"
#include "concavity/rng.hpp"

namespace concavity {

struct WalkConfig {
    long n_walks = 100000;
    double eps_shell = 0.0;  // 0: defaults to 1e-4 * diameter
    long max_steps = 1000000;
    uint64_t seed = 1;
    int workers = 0;  // 0: CONCAVITY_LAB_WORKERS env var, else hardware count
};

// Monte Carlo estimate with its sampling error. Bit-identical for a fixed
// (seed, n_walks) regardless of worker count: every walk has its own RNG
// stream keyed by walk index, and the reduction is a fixed-order block sum.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n_walks)
    long n_walks = 0;
    uint64_t seed = 0;
};

struct WalkStep {
    Vec2 center;
    double radius;
};

struct ExitResult {
    bool ok = false;  // false: step budget exhausted
    BoundaryPoint exit;
    std::vector<WalkStep> steps;
};

double resolve_eps_shell(const Domain& domain, const WalkConfig& cfg);
int resolve_workers(const WalkConfig& cfg);

// One walk-on-spheres trajectory from x to the eps-shell, exit point
// projected onto the boundary. Requires sdf(x) < -eps_shell.
ExitResult wos_exit(const Domain& domain, Vec2 x, double eps_shell,
                    long max_steps, Xoshiro256pp& rng);

// Mean of g over harmonic-measure samples (walk exit points).
Estimate estimate_harmonic_integral(
    const Domain& domain, Vec2 x,
    const std::function<double(const BoundaryPoint&)>& g, const WalkConfig& cfg);

// Expected exit time via the per-step exact conditional mean radius^2 / n.
Estimate estimate_exit_time(const Domain& domain, Vec2 x, const WalkConfig& cfg);

// Occupation functional E 1/2 int_0^tau F(w(s)) ds: one Green's-density
// sample per sphere step, each contributing (radius^2/4) F(xi) in n = 2.
// F reports evaluation failure through its bool* argument (walk discarded).
Estimate estimate_occupation(const Domain& domain, Vec2 x,
                             const std::function<double(Vec2, bool*)>& F,
                             const WalkConfig& cfg);
Estimate estimate_occupation(const Domain& domain, Vec2 x, const Field& F,
                             const HessianField& hess, const WalkConfig& cfg);

struct RepresentationCheck {
    Vec2 probe;
    Vec2 direction;
    double lhs = 0.0;  // second directional derivative at the probe (grid)
    Estimate rhs_occupation;
    Estimate rhs_boundary;
    Estimate rhs_total;  // std_error from the per-walk totals (shared stream)
    double z_score = 0.0;
    double discard_rate = 0.0;
};

// Monte Carlo check of the second-derivative representation
//   d^2u/dn^2(x) = E 1/2 int_0^tau [f''(u)(du/dn)^2 + f'(u) d^2u/dn^2] ds
//                + int_bdy d^2u/dn^2 dw_x,
// with both terms estimated from the same walk stream.
RepresentationCheck verify_representation(const Domain& domain,
                                          const Nonlinearity& f, const Field& u,
                                          const HessianField& hess,
                                          const BoundaryJet& boundary, Vec2 x,
                                          Vec2 direction, const WalkConfig& cfg);

struct BrownianCheck {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double z = 0.0;
    bool pass = false;  // |z| <= 3
};

// Sanity checks of the sampling primitives: E|w(t)|^2 = n t for Gaussian
// increments, and E<X, AX> = trace(A)/n for uniform sphere directions.
std::vector<BrownianCheck> brownian_unit_tests(const WalkConfig& cfg);

struct HistogramBin {
    double start_arclength = 0.0;
    long count = 0;
};

// Exit-point histogram over equal arclength bins.
std::vector<HistogramBin> exit_histogram(const Domain& domain, Vec2 x, int bins,
                                         const WalkConfig& cfg);

// Inverse CDF of the normalized radial Green density of the unit disk:
// solves x^2 (1 - 2 ln x) = u for x in [0, 1].
double green_radial_sample(double u01);

}  // namespace concavity
