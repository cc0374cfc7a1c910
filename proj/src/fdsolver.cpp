#include "concavity/fdsolver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace concavity {

struct LinearPoissonSolver::Impl {
    Eigen::SparseMatrix<double> A;  // -Laplace_h (non-symmetric at cut cells)
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

LinearPoissonSolver::LinearPoissonSolver(GridPtr grid)
    : grid_(std::move(grid)), impl_(std::make_unique<Impl>()) {
    const Grid& g = *grid_;
    const auto n = static_cast<Eigen::Index>(g.size());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * g.size());
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (size_t i = 0; i < g.size(); ++i) {
        Grid::NodeRef nd = g.nodes[i];
        const Grid::Arms& a = g.arms[i];
        double diag = 2.0 * inv_h2 * (1.0 / (a.east * a.west) + 1.0 / (a.north * a.south));
        trips.emplace_back(i, i, diag);
        auto offdiag = [&](int ix, int iy, double coeff) {
            int32_t j = g.at(ix, iy);
            if (j >= 0) trips.emplace_back(i, j, -coeff);
        };
        offdiag(nd.ix + 1, nd.iy, 2.0 * inv_h2 / (a.east * (a.east + a.west)));
        offdiag(nd.ix - 1, nd.iy, 2.0 * inv_h2 / (a.west * (a.east + a.west)));
        offdiag(nd.ix, nd.iy + 1, 2.0 * inv_h2 / (a.north * (a.north + a.south)));
        offdiag(nd.ix, nd.iy - 1, 2.0 * inv_h2 / (a.south * (a.north + a.south)));
    }
    impl_->A.resize(n, n);
    impl_->A.setFromTriplets(trips.begin(), trips.end());
    impl_->A.makeCompressed();
    impl_->lu.compute(impl_->A);
    if (impl_->lu.info() != Eigen::Success)
        throw std::runtime_error("fdsolver.solve_linear_poisson: factorization failed");
}

LinearPoissonSolver::~LinearPoissonSolver() = default;
LinearPoissonSolver::LinearPoissonSolver(LinearPoissonSolver&&) noexcept = default;
LinearPoissonSolver& LinearPoissonSolver::operator=(LinearPoissonSolver&&) noexcept = default;

Field LinearPoissonSolver::solve(const Field& rhs) const {
    if (!rhs.grid || rhs.grid.get() != grid_.get())
        throw std::invalid_argument("fdsolver.solve_linear_poisson: rhs lives on a different grid");
    const auto n = static_cast<Eigen::Index>(grid_->size());
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.values.data(), n);
    double bnorm = b.lpNorm<Eigen::Infinity>();
    Field out(grid_, 0.0);
    if (bnorm == 0.0) return out;

    Eigen::VectorXd x = impl_->lu.solve(b);
    if (impl_->lu.info() != Eigen::Success)
        throw std::runtime_error("fdsolver.solve_linear_poisson: back substitution failed");
    // iterative refinement until the residual meets the contract
    double target = 1e-10 * bnorm;
    for (int pass = 0; pass < 6; ++pass) {
        Eigen::VectorXd r = b - impl_->A * x;
        if (r.lpNorm<Eigen::Infinity>() <= target) break;
        x += impl_->lu.solve(r);
        if (pass == 5)
            throw std::runtime_error(
                "fdsolver.solve_linear_poisson: residual contract not met after refinement");
    }
    Eigen::Map<Eigen::VectorXd>(out.values.data(), n) = x;
    return out;
}

Field LinearPoissonSolver::solve_constant(double value) const {
    Field rhs(grid_, value);
    return solve(rhs);
}

Field solve_linear_poisson(const GridPtr& grid, const Field& rhs) {
    return LinearPoissonSolver(grid).solve(rhs);
}

Field torsion_function(const GridPtr& grid) {
    return LinearPoissonSolver(grid).solve_constant(1.0);
}

SolveReport solve_semilinear(const GridPtr& grid, const Nonlinearity& f,
                             double tol, int max_iterations) {
    if (!(tol > 0.0))
        throw std::invalid_argument("fdsolver.solve_semilinear: tol must be positive");
    LinearPoissonSolver solver(grid);

    SolveReport report;
    Field torsion = solver.solve_constant(1.0);
    report.contraction_bound = f.sup_d1() * torsion.max();
    report.certified = report.contraction_bound < 1.0;
    const double beta = report.certified ? 1.0 : 0.5;

    Field u(grid, 0.0);
    Field fu(grid, 0.0);
    for (int k = 1; k <= max_iterations; ++k) {
        for (size_t i = 0; i < u.values.size(); ++i)
            fu.values[i] = f.eval(std::max(u.values[i], 0.0));
        Field w = solver.solve(fu);
        double update = 0.0;
        for (size_t i = 0; i < u.values.size(); ++i) {
            double next = (1.0 - beta) * u.values[i] + beta * w.values[i];
            update = std::max(update, std::abs(next - u.values[i]));
            u.values[i] = next;
        }
        if (!std::isfinite(update))
            throw std::runtime_error("fdsolver.solve_semilinear: iteration diverged");
        report.picard_iterations = k;
        report.final_update = update;
        if (update <= tol) {
            Field lap = apply_laplacian(u);
            double res = 0.0, scale = 0.0;
            for (size_t i = 0; i < u.values.size(); ++i) {
                double fv = f.eval(std::max(u.values[i], 0.0));
                res = std::max(res, std::abs(lap.values[i] + fv));
                scale = std::max(scale, std::abs(fv));
            }
            report.residual = res;
            if (res <= tol * (1.0 + scale) * 10.0 || update == 0.0) break;
            if (k == max_iterations) break;
        }
        if (k == max_iterations)
            throw std::runtime_error(
                "fdsolver.solve_semilinear: no convergence within iteration budget");
    }
    report.u = std::move(u);
    return report;
}

}  // namespace concavity
