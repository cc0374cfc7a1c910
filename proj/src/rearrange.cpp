#include "concavity/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace concavity {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// outer radius of annulus k (0-based): area of the first k+1 annuli is
// exactly (k+1) h^2
double annulus_edge(long k, double cell) {
    return std::sqrt(static_cast<double>(k + 1) * cell / kPi);
}

}  // namespace

double RearrangedProfile::outer_radius() const {
    return sorted.empty() ? 0.0
                          : annulus_edge(static_cast<long>(sorted.size()) - 1,
                                         cell_measure);
}

double RearrangedProfile::value_at(double r) const {
    if (sorted.empty() || r < 0.0) return 0.0;
    // annulus k covers pi r^2 in (k h^2, (k+1) h^2]
    auto k = static_cast<long>(std::floor(kPi * r * r / cell_measure));
    if (k >= static_cast<long>(sorted.size())) return 0.0;
    return sorted[static_cast<size_t>(k)];
}

double RearrangedProfile::measure_above(double t) const {
    // sorted is descending: first index with value <= t
    auto it = std::lower_bound(sorted.begin(), sorted.end(), t,
                               [](double v, double thr) { return v > thr; });
    return static_cast<double>(it - sorted.begin()) * cell_measure;
}

double RearrangedProfile::integral() const {
    double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    return total * cell_measure;
}

RearrangedProfile rearrange_field(const Field& u) {
    const Grid& g = *u.grid;
    RearrangedProfile prof;
    prof.cell_measure = g.h * g.h;
    prof.sorted = u.values;
    const double floor = -1e-12 * std::max(u.max_abs(), 1.0);
    for (double& v : prof.sorted) {
        if (v < floor)
            throw std::invalid_argument(
                "rearrange.rearrange_field: negative input values");
        if (v < 0.0) v = 0.0;  // roundoff-scale negatives from the solver
    }
    std::sort(prof.sorted.begin(), prof.sorted.end(), std::greater<double>());

    // conservative resampling: uniform radial cells fine enough that each
    // holds at most one source cell of area (outer cell area <= h^2)
    const auto n = static_cast<long>(prof.sorted.size());
    const double rmax = prof.outer_radius();
    long m = n <= 0 ? 1
                    : std::clamp<long>(
                          static_cast<long>(
                              std::ceil(2.0 * kPi * rmax * rmax /
                                        prof.cell_measure)),
                          64, 1 << 20);
    prof.radii.resize(static_cast<size_t>(m) + 1);
    prof.values.assign(static_cast<size_t>(m) + 1, 0.0);
    for (long j = 0; j <= m; ++j)
        prof.radii[static_cast<size_t>(j)] = rmax * static_cast<double>(j) /
                                             static_cast<double>(m);
    if (n > 0) {
        prof.values[0] = prof.sorted[0];
        // node j >= 1 carries the area-weighted mean of the step over
        // (radii[j-1], radii[j]]: sweep annuli once, splitting at cell edges
        long k = 0;  // current source annulus
        double inner2 = prof.radii[0] * prof.radii[0];
        for (long j = 1; j <= m; ++j) {
            const double outer2 = prof.radii[static_cast<size_t>(j)] *
                                  prof.radii[static_cast<size_t>(j)];
            double mass = 0.0;
            double lo2 = inner2;
            while (lo2 < outer2 && k < n) {
                double edge = annulus_edge(k, prof.cell_measure);
                double hi2 = std::min(edge * edge, outer2);
                if (hi2 > lo2) mass += prof.sorted[static_cast<size_t>(k)] *
                                       kPi * (hi2 - lo2);
                if (edge * edge <= outer2)
                    ++k;
                else
                    break;
                lo2 = hi2;
            }
            const double area = kPi * (outer2 - inner2);
            double mean = area > 0.0 ? mass / area : 0.0;
            // the exact profile is non-increasing; mass/area wobbles the
            // last bit when a cell sits inside a single source annulus
            mean = std::min(mean, prof.values[static_cast<size_t>(j) - 1]);
            prof.values[static_cast<size_t>(j)] = mean;
            inner2 = outer2;
        }
    }
    return prof;
}

namespace {

// Exact closed-form solve of -Δv = g on the ball of radius R (n = 2) for a
// step source g = g_k on annulus k of the rearranged profile.  With
// J(r) = ∫_0^r t g(t) dt,  v(r) = ∫_r^R J(s)/s ds, integrated per annulus:
// over [a,b] inside annulus j,  ∫ J/s ds = (J(r_{j-1}) - g_j r_{j-1}^2/2)
// ln(b/a) + g_j (b^2 - a^2)/4.
struct StepSourceSolve {
    std::vector<double> edge;    // r_k, k = 0..n-1
    std::vector<double> at_edge; // v(r_k)
    double v0 = 0.0;             // v(0)
    double radius = 0.0;
    double total_mass = 0.0;     // ∫ g dA
};

StepSourceSolve solve_step_source(const std::vector<double>& g, double cell,
                                  double radius) {
    const auto n = static_cast<long>(g.size());
    StepSourceSolve out;
    out.radius = radius;
    out.edge.resize(static_cast<size_t>(n));
    out.at_edge.assign(static_cast<size_t>(n), 0.0);
    std::vector<double> J(static_cast<size_t>(n));  // J at annulus outer edge
    double acc = 0.0;
    for (long k = 0; k < n; ++k) {
        out.edge[static_cast<size_t>(k)] = annulus_edge(k, cell);
        acc += g[static_cast<size_t>(k)] * cell / (2.0 * kPi);
        J[static_cast<size_t>(k)] = acc;
    }
    out.total_mass = acc * 2.0 * kPi;
    if (n == 0) return out;

    // outside-in accumulation of v at annulus edges
    double rn = out.edge[static_cast<size_t>(n) - 1];
    double v = acc * std::log(std::max(radius, rn) / rn);  // zero-source tail
    out.at_edge[static_cast<size_t>(n) - 1] = v;
    for (long k = n - 2; k >= 0; --k) {
        const double a = out.edge[static_cast<size_t>(k)];
        const double b = out.edge[static_cast<size_t>(k) + 1];
        const double gj = g[static_cast<size_t>(k) + 1];
        const double Ja = J[static_cast<size_t>(k)];
        v += (Ja - gj * a * a / 2.0) * std::log(b / a) +
             gj * (b * b - a * a) / 4.0;
        out.at_edge[static_cast<size_t>(k)] = v;
    }
    // segment (0, r_0] of annulus 0: J(s) = g_0 s^2 / 2, the log term vanishes
    out.v0 = v + g[0] * out.edge[0] * out.edge[0] / 4.0;
    return out;
}

RadialSolution to_radial_solution(const StepSourceSolve& s) {
    RadialSolution v;
    v.dim = 2;
    v.radius = s.radius;
    v.r.reserve(s.edge.size() + 2);
    v.values.reserve(s.edge.size() + 2);
    v.r.push_back(0.0);
    v.values.push_back(s.v0);
    for (size_t k = 0; k < s.edge.size(); ++k) {
        v.r.push_back(s.edge[k]);
        v.values.push_back(s.at_edge[k]);
    }
    if (!s.edge.empty() && s.radius > s.edge.back()) {
        v.r.push_back(s.radius);
        v.values.push_back(0.0);
    }
    v.derivative_at_radius =
        s.radius > 0.0 ? -s.total_mass / (2.0 * kPi * s.radius) : 0.0;
    return v;
}

}  // namespace

TalentiReport talenti_compare(const Domain& domain, const Nonlinearity& f,
                              double h) {
    GridPtr grid = build_grid(domain, h);
    SolveReport sol = solve_semilinear(grid, f);

    TalentiReport report;
    report.certified = sol.certified;
    report.u_star = rearrange_field(sol.u);
    report.max_u = report.u_star.sorted.empty() ? 0.0 : report.u_star.sorted[0];

    // monotone f commutes with descending sort: (f(u))* = f(u*)
    std::vector<double> source(report.u_star.sorted.size());
    for (size_t k = 0; k < source.size(); ++k)
        source[k] = f.eval(report.u_star.sorted[k], 0);

    // the ball must hold all of the source mass: cover both the continuum
    // equal-measure radius and the discrete step support
    const double r_cont = std::sqrt(domain.stats().area / kPi);
    const double radius = std::max(r_cont, report.u_star.outer_radius());
    StepSourceSolve v = solve_step_source(source, report.u_star.cell_measure,
                                          radius);
    report.v = to_radial_solution(v);
    report.max_v = v.v0;

    // v - u* on annulus k is minimized at the outer edge (v decreasing,
    // u* constant per annulus); include r = 0 for completeness
    double min_gap = v.v0 - report.max_u;
    for (size_t k = 0; k < v.at_edge.size(); ++k)
        min_gap = std::min(min_gap, v.at_edge[k] - report.u_star.sorted[k]);
    report.min_gap = min_gap;
    return report;
}

RearrangementExperiment rearrangement_experiment(const Domain& domain,
                                                 const Nonlinearity& f,
                                                 double h) {
    RearrangementExperiment exp;
    exp.condition = check_condition(f, domain.stats(), 2,
                                    TheoremCondition::Rearrangement);
    exp.exploratory = !exp.condition.passes;

    GridPtr grid = build_grid(domain, h);
    SolveReport sol = solve_semilinear(grid, f);
    exp.max_u = sol.u.max();

    const double r_star = std::sqrt(domain.stats().area / kPi);
    exp.psi = solve_radial(f, r_star, 2);
    exp.max_psi = radial_max(exp.psi);

    exp.tolerance = 5.0 * h * h + 1e-6;
    exp.pass = exp.max_u <= exp.max_psi + exp.tolerance;

    exp.u_star = rearrange_field(sol.u);
    double min_gap = exp.psi(0.0) - exp.max_u;
    const auto n = static_cast<long>(exp.u_star.sorted.size());
    for (long k = 0; k < n; ++k) {
        double edge = std::sqrt(static_cast<double>(k + 1) *
                                exp.u_star.cell_measure / kPi);
        min_gap = std::min(min_gap, exp.psi(edge) -
                                        exp.u_star.sorted[static_cast<size_t>(k)]);
    }
    exp.min_profile_gap = min_gap;
    return exp;
}

}  // namespace concavity
