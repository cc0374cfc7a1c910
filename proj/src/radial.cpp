#include "concavity/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "concavity/numerics.hpp"

namespace concavity {

double RadialSolution::operator()(double rr) const {
    if (rr <= 0.0) return values.front();
    if (rr >= radius) return 0.0;
    double step = radius / static_cast<double>(r.size() - 1);
    auto k = static_cast<size_t>(rr / step);
    k = std::min(k, r.size() - 2);
    double t = (rr - r[k]) / step;
    return (1.0 - t) * values[k] + t * values[k + 1];
}

namespace {

// int_{t0}^{t1} t^{n-1} (g0 + (g1-g0)(t-t0)/dt) dt, exact.
double cell_moment(double t0, double t1, int n, double g0, double g1) {
    double dt = t1 - t0;
    double m0 = (std::pow(t1, n) - std::pow(t0, n)) / n;          // int t^{n-1}
    double m1 = (std::pow(t1, n + 1) - std::pow(t0, n + 1)) / (n + 1) -
                t0 * m0;                                          // int t^{n-1}(t-t0)
    return g0 * m0 + (g1 - g0) / dt * m1;
}

}  // namespace

RadialSolution solve_radial(const Nonlinearity& f, double R, int n, double tol,
                            int mesh_nodes, int max_iterations) {
    if (!(R > 0.0))
        throw std::invalid_argument("radial.solve_radial: radius must be positive");
    if (n < 1)
        throw std::invalid_argument("radial.solve_radial: dimension must be >= 1");
    if (mesh_nodes < 16)
        throw std::invalid_argument("radial.solve_radial: mesh too coarse");

    const int m = mesh_nodes;
    const double dr = R / (m - 1);
    RadialSolution sol;
    sol.dim = n;
    sol.radius = R;
    sol.r.resize(m);
    for (int i = 0; i < m; ++i) sol.r[i] = dr * i;
    sol.values.assign(m, 0.0);

    std::vector<double> g(m), inner(m), flux(m), next(m);
    for (int iter = 1; iter <= max_iterations; ++iter) {
        for (int i = 0; i < m; ++i) g[i] = f.eval(std::max(sol.values[i], 0.0));
        // inner[i] = int_0^{r_i} t^{n-1} g dt (exact per linear cell)
        inner[0] = 0.0;
        for (int i = 1; i < m; ++i)
            inner[i] = inner[i - 1] + cell_moment(sol.r[i - 1], sol.r[i], n, g[i - 1], g[i]);
        // flux[i] = r_i^{1-n} inner[i]; near r=0 the integrand behaves like
        // g(0) r / n, which is the correct limit value 0 at the origin
        flux[0] = 0.0;
        for (int i = 1; i < m; ++i) flux[i] = std::pow(sol.r[i], 1 - n) * inner[i];
        // next[i] = int_{r_i}^R flux ds by trapezoid from the outside in
        next[m - 1] = 0.0;
        for (int i = m - 2; i >= 0; --i)
            next[i] = next[i + 1] + 0.5 * dr * (flux[i] + flux[i + 1]);

        double update = 0.0;
        for (int i = 0; i < m; ++i)
            update = std::max(update, std::abs(next[i] - sol.values[i]));
        sol.values.swap(next);
        if (!std::isfinite(update))
            throw std::runtime_error("radial.solve_radial: iteration diverged");
        if (update <= tol) {
            sol.derivative_at_radius = -std::pow(R, 1 - n) * inner[m - 1];
            return sol;
        }
    }
    throw std::runtime_error(
        "radial.solve_radial: no convergence within iteration budget "
        "(source slope too large for a contraction)");
}

double radial_max(const RadialSolution& u) {
    return *std::max_element(u.values.begin(), u.values.end());
}

double exit_time_bound(const GeometryStats& stats, int n) {
    if (n < 1)
        throw std::invalid_argument("radial.exit_time_bound: dimension must be >= 1");
    if (!(stats.area > 0.0))
        throw std::invalid_argument("radial.exit_time_bound: measure must be positive");
    double wn = numerics::unit_ball_volume(n);
    return std::pow(stats.area, 2.0 / n) / (n * std::pow(wn, 2.0 / n));
}

}  // namespace concavity
