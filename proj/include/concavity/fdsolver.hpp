#pragma once

#include <memory>

#include "concavity/grid.hpp"
#include "concavity/nonlinearity.hpp"

namespace concavity {

// Sparse direct solve of -Laplace_h u = rhs with zero Dirichlet data.
// The factorization is built once per grid and may be reused across
// right-hand sides (the semilinear iteration does exactly that).
class LinearPoissonSolver {
  public:
    explicit LinearPoissonSolver(GridPtr grid);
    ~LinearPoissonSolver();
    LinearPoissonSolver(LinearPoissonSolver&&) noexcept;
    LinearPoissonSolver& operator=(LinearPoissonSolver&&) noexcept;

    // solves to residual |-Lap_h u - rhs|_inf <= 1e-10 |rhs|_inf
    Field solve(const Field& rhs) const;
    Field solve_constant(double value) const;

    const GridPtr& grid() const { return grid_; }

  private:
    struct Impl;
    GridPtr grid_;
    std::unique_ptr<Impl> impl_;
};

Field solve_linear_poisson(const GridPtr& grid, const Field& rhs);

// torsion function: -Laplace u = 1, u = 0 on the boundary
Field torsion_function(const GridPtr& grid);

struct SolveReport {
    Field u;
    int picard_iterations = 0;
    double final_update = 0.0;        // |u_k - u_{k-1}|_inf at termination
    double residual = 0.0;            // |Lap_h u + f(u)|_inf
    double contraction_bound = 0.0;   // sup f' * max (-Lap_h)^{-1} 1
    bool certified = false;           // contraction_bound < 1
};

// Fixed-point iteration u <- (-Lap_h)^{-1} f(u) starting from u = 0.
// When the contraction bound is >= 1 the iteration is damped (step 1/2)
// and the report is flagged as uncertified.
SolveReport solve_semilinear(const GridPtr& grid, const Nonlinearity& f,
                             double tol = 1e-10, int max_iterations = 10000);

}  // namespace concavity
