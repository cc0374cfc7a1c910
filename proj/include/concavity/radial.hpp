#pragma once

#include <vector>

#include "concavity/geometry.hpp"
#include "concavity/nonlinearity.hpp"

namespace concavity {

// Radially symmetric solution of -Laplace u = f(u) on a ball of radius R
// in n dimensions with u(R) = 0, sampled on a uniform mesh over [0, R].
struct RadialSolution {
    int dim = 0;
    double radius = 0.0;
    std::vector<double> r;
    std::vector<double> values;
    double derivative_at_radius = 0.0;  // u'(R) <= 0

    // piecewise-linear evaluation; zero outside [0, R]
    double operator()(double rr) const;
};

// Fixed-point iteration on the radial integral form
//   u(r) = int_r^R s^{1-n} int_0^s t^{n-1} f(u(t)) dt ds,
// with the inner moment integrals evaluated exactly for piecewise-linear
// integrands. Throws on non-convergence (possible when sup f' R^2 / (2n)
// is not a contraction).
RadialSolution solve_radial(const Nonlinearity& f, double R, int n,
                            double tol = 1e-12, int mesh_nodes = 4096,
                            int max_iterations = 10000);

double radial_max(const RadialSolution& u);

// Expected-exit-time bound |Omega|^{2/n} / (n w_n^{2/n}) for Brownian motion
// started anywhere in a domain of the given measure (equality on balls).
double exit_time_bound(const GeometryStats& stats, int n);

}  // namespace concavity
