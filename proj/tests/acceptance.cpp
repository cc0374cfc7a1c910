// Acceptance gate: one line per numbered criterion, PASS or FAIL, with the
// measured quantities the verdict was judged on. The process exits nonzero
// when any criterion fails unexpectedly.
//
// Criterion 10 asserts that sqrt(u) of the 2x1 ellipse torsion function is
// convex. It is not: the transform is concave there, with center Hessian
// diag(-sqrt(0.4)/4, -sqrt(0.4)), so the convexity check cannot pass at any
// resolution. The line reports the honest FAIL; the gate verifies that the
// failure is exactly that analytic outcome (and that the concave direction
// does hold) and then counts it as an expected failure rather than a defect
// of the implementation.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "concavity/analysis.hpp"
#include "concavity/fdsolver.hpp"
#include "concavity/geometry.hpp"
#include "concavity/grid.hpp"
#include "concavity/nonlinearity.hpp"
#include "concavity/numerics.hpp"
#include "concavity/radial.hpp"
#include "concavity/rearrange.hpp"
#include "concavity/stochastic.hpp"
#include "oracles.hpp"

using namespace concavity;

namespace {

std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    char buffer[2048];
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

struct Criterion {
    int id = 0;
    const char* name = "";
    bool pass = false;
    bool expected_fail = false;  // failed, and the failure was verified analytic
    std::string detail;
    double seconds = 0.0;
};

// Runs one criterion body, times it, and folds an optional wall-clock limit
// (part of the criterion, not bookkeeping) into the verdict.
template <typename Fn>
Criterion run(int id, const char* name, double limit_seconds, Fn&& body) {
    Criterion c;
    c.id = id;
    c.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.expected_fail = false;
        c.detail = fmt("exception: %s", e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0.0 && c.seconds > limit_seconds) {
        c.pass = false;
        c.detail += fmt("; runtime %.1f s exceeds the %.0f s budget", c.seconds, limit_seconds);
    }
    return c;
}

// The admissible-source instances exercised by the theorem suites: one per
// catalog kind, plus a second affine entry with the steepest slope that
// still clears every hypothesis threshold used below.
std::vector<Nonlinearity> catalog_instances() {
    return {Nonlinearity::constant(1.0),        Nonlinearity::affine(1.0, 0.3),
            Nonlinearity::affine(1.0, 1.0),     Nonlinearity::log_shift(1.0, 0.5),
            Nonlinearity::sqrt_shift(1.0, 0.5), Nonlinearity::saturating(1.0, 0.5)};
}

struct PdeSetup {
    std::optional<Domain> domain;
    GridPtr grid;
    Field u;
    HessianField hess;
};

PdeSetup solve_setup(const DomainSpec& spec, const Nonlinearity& f, double h) {
    PdeSetup s;
    s.domain.emplace(make_domain(spec));
    s.grid = build_grid(*s.domain, h);
    s.u = solve_semilinear(s.grid, f).u;
    s.hess = hessian_field(s.u);
    return s;
}

BoundaryJet make_boundary_jet(const Domain& domain, const Field& u, double h) {
    int m = static_cast<int>(std::ceil(domain.stats().boundary_length / h));
    return BoundaryJet(domain, boundary_hessian(u, m));
}

bool same_estimate(const Estimate& a, const Estimate& b) {
    return a.mean == b.mean && a.std_error == b.std_error && a.n_walks == b.n_walks;
}

// Estimates computed by criteria 5-7 under the default worker count, kept
// for the bit-identity comparison of criterion 12.
struct StoredEstimates {
    bool have_exit = false;
    Estimate disk_exit, rect_exit;
    bool have_representation = false;
    Estimate rep_occupation, rep_boundary, rep_total;
    bool have_occupation = false;
    Estimate occ_disk;
};

}  // namespace

int main() {
    // Worker counts are controlled explicitly where they matter (criterion
    // 12); clear any ambient override so default runs use the hardware count.
    unsetenv("CONCAVITY_LAB_WORKERS");

    std::vector<Criterion> results;
    StoredEstimates stored;

    // ---- 1: analytic disk torsion ------------------------------------
    results.push_back(run(1, "analytic disk torsion", 30.0, [&](Criterion& c) {
        const double h = 1.0 / 128.0;
        Domain disk = make_domain(DomainSpec::disk(1.0));
        GridPtr grid = build_grid(disk, h);
        Field u = torsion_function(grid);
        double sup = 0.0;
        for (size_t i = 0; i < grid->size(); ++i) {
            Vec2 p = grid->position(grid->nodes[i]);
            sup = std::max(sup, std::abs(u.values[i] - oracles::disk_torsion(norm(p))));
        }
        HessianField hess = hessian_field(u);
        double dev = 0.0;
        long deep = 0;
        for (size_t i = 0; i < grid->size(); ++i) {
            if (!hess.evaluable[i] || hess.has_model[i]) continue;  // centered stencils only
            ++deep;
            dev = std::max({dev, std::abs(hess.uxx[i] + 0.5), std::abs(hess.uyy[i] + 0.5),
                            std::abs(hess.uxy[i])});
        }
        const double hess_tol = 5.0 * h * h;
        c.pass = sup <= 1e-3 && dev <= hess_tol && deep > 0;
        c.detail = fmt("sup|u - (1-r^2)/4| = %.2e <= 1e-3; Hessian deviation from -I/2 over %ld "
                       "deep nodes = %.2e <= 5h^2 = %.2e",
                       sup, deep, dev, hess_tol);
    }));

    // ---- 2: triangle corner non-concavity ----------------------------
    results.push_back(run(2, "triangle corner non-concavity", 0.0, [&](Criterion& c) {
        const double h = 1.0 / 128.0;
        const double side = 1.0;
        Domain tri = make_domain(DomainSpec::equilateral_triangle(side));
        GridPtr grid = build_grid(tri, h);
        Field u = torsion_function(grid);
        HessianField hess = hessian_field(u);
        int m = static_cast<int>(std::ceil(tri.stats().boundary_length / h));
        ConcavityReport rep = concavity_report(u, hess, boundary_hessian(u, m));

        const double r3 = std::sqrt(3.0);
        const Vec2 vertices[3] = {{-0.5 * side, -side / (2.0 * r3)},
                                  {0.5 * side, -side / (2.0 * r3)},
                                  {0.0, side / r3}};
        double best[3] = {-1e300, -1e300, -1e300};
        for (size_t i = 0; i < grid->size(); ++i) {
            if (!hess.evaluable[i]) continue;
            Vec2 p = grid->position(grid->nodes[i]);
            for (int k = 0; k < 3; ++k)
                if (norm(p - vertices[k]) <= 0.05 * side)
                    best[k] = std::max(best[k], hess.lambda_max[i]);
        }
        bool witnesses = best[0] > 0.0 && best[1] > 0.0 && best[2] > 0.0;
        c.pass = !rep.boundary_nsd && witnesses;
        c.detail = fmt("boundary_nsd = %s (expected false); max lambda_max within 0.05 of each "
                       "vertex: %.3f, %.3f, %.3f (all > 0)",
                       rep.boundary_nsd ? "true" : "false", best[0], best[1], best[2]);
    }));

    // ---- 3: boundary-to-interior concavity implication ---------------
    results.push_back(run(3, "boundary-to-interior concavity implication", 300.0,
                          [&](Criterion& c) {
        const double h = 1.0 / 64.0;
        const DomainSpec shapes[4] = {DomainSpec::disk(1.0), DomainSpec::ellipse(2.0, 1.0),
                                      DomainSpec::rounded_rectangle(2.0, 1.0, 0.25),
                                      DomainSpec::stadium(2.0, 1.0)};
        int tested = 0, skipped = 0, substantive = 0, vacuous = 0;
        std::string counterexamples;
        for (const DomainSpec& spec : shapes) {
            Domain domain = make_domain(spec);
            GridPtr grid = build_grid(domain, h);
            for (const Nonlinearity& f : catalog_instances()) {
                ConditionReport cond = check_condition(f, domain.stats(), 2,
                                                       TheoremCondition::ConcavityPropagation);
                if (!cond.passes) {
                    ++skipped;
                    continue;
                }
                SolveReport sr = solve_semilinear(grid, f);
                ConcavityReport rep = concavity_report(sr.u);
                ++tested;
                if (!rep.boundary_nsd) {
                    ++vacuous;
                } else if (rep.interior_nsd) {
                    ++substantive;
                } else {
                    counterexamples += fmt(" [%s, %s]", shape_kind_name(spec.kind).c_str(),
                                           f.describe().c_str());
                }
            }
        }
        int violations = tested - substantive - vacuous;
        c.pass = tested > 0 && violations == 0;
        c.detail = fmt("%d domain/source pairs with the slope hypothesis (%d skipped); boundary "
                       "and interior NSD on %d, boundary indefinite (implication vacuous) on %d; "
                       "%d counterexamples%s",
                       tested, skipped, substantive, vacuous, violations,
                       counterexamples.c_str());
    }));

    // ---- 4: eccentric-domain Hessian decay ---------------------------
    results.push_back(run(4, "eccentric-domain Hessian decay", 0.0, [&](Criterion& c) {
        SweepResult sweep =
            eccentricity_sweep({2.0, 4.0, 6.0, 8.0}, 1.0 / 64.0, Nonlinearity::constant(1.0));
        c.pass = sweep.all_negative && sweep.slope < 0.0 && sweep.r_squared >= 0.95;
        std::string lambdas;
        for (const SweepRow& row : sweep.rows)
            lambdas += fmt(" %.3e", row.lambda_max_at_peak);
        c.detail = fmt("lambda_max at the peak:%s (all negative: %s); log|lambda_max| vs aspect "
                       "slope = %.3f (< 0), R^2 = %.4f (>= 0.95)",
                       lambdas.c_str(), sweep.all_negative ? "yes" : "no", sweep.slope,
                       sweep.r_squared);
    }));

    // ---- 5: expected exit-time ball bound ----------------------------
    results.push_back(run(5, "expected exit-time ball bound", 60.0, [&](Criterion& c) {
        WalkConfig cfg;
        cfg.n_walks = 100000;
        cfg.seed = 1;
        Domain disk = make_domain(DomainSpec::disk(1.0));
        Domain rect = make_domain(DomainSpec::rectangle(2.0, 1.0));
        stored.disk_exit = estimate_exit_time(disk, {0.0, 0.0}, cfg);
        stored.rect_exit = estimate_exit_time(rect, {0.0, 0.0}, cfg);
        stored.have_exit = true;
        double bound = exit_time_bound(rect.stats(), 2);  // |Omega|/(2 pi) = 1/pi
        bool disk_ok = std::abs(stored.disk_exit.mean - 0.5) <= 3.0 * stored.disk_exit.std_error;
        bool rect_ok = stored.rect_exit.mean <= bound + 3.0 * stored.rect_exit.std_error;
        bool bound_ok = std::abs(bound - 1.0 / M_PI) <= 1e-12;
        c.pass = disk_ok && rect_ok && bound_ok;
        c.detail = fmt("disk center: %.6f +- %.1e (target 0.5, off by %.1e <= 3 sigma); "
                       "rectangle center: %.6f +- %.1e <= 1/pi = %.6f + 3 sigma",
                       stored.disk_exit.mean, stored.disk_exit.std_error,
                       std::abs(stored.disk_exit.mean - 0.5), stored.rect_exit.mean,
                       stored.rect_exit.std_error, bound);
    }));

    // ---- 6: second-derivative walk representation --------------------
    results.push_back(run(6, "second-derivative walk representation", 0.0, [&](Criterion& c) {
        const double h = 1.0 / 128.0;
        const Nonlinearity f = Nonlinearity::affine(1.0, 0.3);
        WalkConfig cfg;
        cfg.n_walks = 100000;
        cfg.seed = 1;
        const Vec2 dirs[2] = {{1.0, 0.0}, {0.0, 1.0}};

        double zmax = 0.0;
        int checks = 0;
        auto run_domain = [&](const DomainSpec& spec, const std::vector<Vec2>& probes,
                              bool keep_first) {
            PdeSetup s = solve_setup(spec, f, h);
            BoundaryJet jet = make_boundary_jet(*s.domain, s.u, h);
            for (const Vec2& p : probes) {
                for (const Vec2& d : dirs) {
                    RepresentationCheck rc =
                        verify_representation(*s.domain, f, s.u, s.hess, jet, p, d, cfg);
                    zmax = std::max(zmax, std::abs(rc.z_score));
                    ++checks;
                    if (keep_first && p.x == 0.3 && d.x == 1.0) {
                        stored.rep_occupation = rc.rhs_occupation;
                        stored.rep_boundary = rc.rhs_boundary;
                        stored.rep_total = rc.rhs_total;
                        stored.have_representation = true;
                    }
                }
            }
        };
        run_domain(DomainSpec::disk(1.0), {{0.0, 0.0}, {0.3, 0.2}, {-0.5, 0.1}}, true);
        run_domain(DomainSpec::ellipse(2.0, 1.0), {{0.0, 0.0}, {0.8, 0.3}, {-1.0, -0.4}}, false);

        // degenerate source f = 1: the occupation term vanishes identically,
        // leaving the pure harmonic-measure identity for the second derivative.
        // On the disk that boundary integrand is the constant -1/2, so the
        // estimator has (up to roundoff) zero variance and a z-score would be
        // 0/0; the identity is checked directly with a roundoff floor instead.
        PdeSetup t = solve_setup(DomainSpec::disk(1.0), Nonlinearity::constant(1.0), h);
        BoundaryJet tjet = make_boundary_jet(*t.domain, t.u, h);
        RepresentationCheck rc0 = verify_representation(
            *t.domain, Nonlinearity::constant(1.0), t.u, t.hess, tjet, {0.3, 0.2}, {1.0, 0.0}, cfg);
        bool occupation_exact_zero =
            rc0.rhs_occupation.mean == 0.0 && rc0.rhs_occupation.std_error == 0.0;
        double degenerate_gap = std::abs(rc0.lhs - rc0.rhs_total.mean);
        bool identity_ok = degenerate_gap <= 3.0 * rc0.rhs_total.std_error + 1e-6;

        c.pass = zmax <= 3.0 && occupation_exact_zero && identity_ok;
        c.detail = fmt("%d probe/direction checks on disk and 2x1 ellipse, max |z| = %.2f <= 3; "
                       "degenerate f = 1: occupation term = %.1f +- %.1f exactly, "
                       "|lhs - rhs| = %.1e (boundary term is the constant -1/2)",
                       checks, zmax, rc0.rhs_occupation.mean, rc0.rhs_occupation.std_error,
                       degenerate_gap);
    }));

    // ---- 7: occupation/solution duality -------------------------------
    results.push_back(run(7, "occupation/solution duality", 0.0, [&](Criterion& c) {
        const double h = 1.0 / 64.0;
        const Nonlinearity f = Nonlinearity::affine(1.0, 0.3);
        WalkConfig cfg;
        cfg.n_walks = 100000;
        cfg.seed = 1;
        const double grid_tol = 5.0 * h * h;

        double worst = -1e300;  // worst gap minus its allowance
        int probes_checked = 0;
        auto run_domain = [&](const DomainSpec& spec, const std::vector<Vec2>& probes,
                              bool keep_first) {
            PdeSetup s = solve_setup(spec, f, h);
            Field fu(s.grid);
            for (size_t i = 0; i < s.grid->size(); ++i) fu.values[i] = f(s.u.values[i]);
            HessianField fu_hess = hessian_field(fu);
            FieldEvaluator ueval(s.u, s.hess);
            for (const Vec2& p : probes) {
                Estimate est = estimate_occupation(*s.domain, p, fu, fu_hess, cfg);
                bool ok = false;
                double u_at = ueval.value(p, &ok);
                double gap = std::abs(est.mean - u_at);
                double allowance = 3.0 * est.std_error + grid_tol;
                worst = std::max(worst, gap - allowance);
                if (!ok) worst = 1e300;
                ++probes_checked;
                if (keep_first && p.x == 0.3) {
                    stored.occ_disk = est;
                    stored.have_occupation = true;
                }
            }
        };
        run_domain(DomainSpec::disk(1.0),
                   {{0.0, 0.0}, {0.3, 0.2}, {-0.5, 0.1}, {0.6, -0.3}, {-0.2, -0.6}}, true);
        run_domain(DomainSpec::ellipse(2.0, 1.0),
                   {{0.0, 0.0}, {0.8, 0.3}, {-1.0, -0.4}, {1.3, 0.2}, {-0.5, 0.5}}, false);

        c.pass = probes_checked == 10 && worst <= 0.0;
        c.detail = fmt("%d probes on disk and 2x1 ellipse: max(|occupation - u(x)| - "
                       "(3 sigma + 5h^2)) = %.2e <= 0",
                       probes_checked, worst);
    }));

    // ---- 8: rearranged-source radial domination -----------------------
    results.push_back(run(8, "rearranged-source radial domination", 0.0, [&](Criterion& c) {
        const double h = 1.0 / 64.0;
        const double tol = 5.0 * h * h;
        const DomainSpec shapes[2] = {DomainSpec::rectangle(2.0, 1.0),
                                      DomainSpec::ellipse(2.0, 1.0)};
        const Nonlinearity sources[2] = {Nonlinearity::constant(1.0),
                                         Nonlinearity::affine(1.0, 0.3)};
        double min_gap = 1e300;
        std::string gaps;
        for (const DomainSpec& spec : shapes) {
            Domain domain = make_domain(spec);
            for (const Nonlinearity& f : sources) {
                TalentiReport rep = talenti_compare(domain, f, h);
                min_gap = std::min(min_gap, rep.min_gap);
                gaps += fmt(" [%s, %s: %.2e]", shape_kind_name(spec.kind).c_str(),
                            f.describe().c_str(), rep.min_gap);
            }
        }
        c.pass = min_gap >= -tol;
        c.detail = fmt("min(v - u*) per case:%s; overall %.2e >= -5h^2 = -%.2e", gaps.c_str(),
                       min_gap, tol);
    }));

    // ---- 9: equal-area ball maximum bound ------------------------------
    results.push_back(run(9, "equal-area ball maximum bound", 0.0, [&](Criterion& c) {
        const double h = 1.0 / 64.0;
        const double tol = 5.0 * h * h;
        const DomainSpec shapes[2] = {DomainSpec::ellipse(2.0, 1.0),
                                      DomainSpec::rounded_rectangle(4.0, 1.0, 0.25)};
        int tested = 0, skipped = 0, violations = 0;
        double worst_margin = 1e300;  // min of max_psi + tol - max_u
        for (const DomainSpec& spec : shapes) {
            Domain domain = make_domain(spec);
            for (const Nonlinearity& f : catalog_instances()) {
                ConditionReport cond =
                    check_condition(f, domain.stats(), 2, TheoremCondition::Rearrangement);
                if (!(cond.margin > 0.0)) {
                    ++skipped;
                    continue;
                }
                RearrangementExperiment ex = rearrangement_experiment(domain, f, h);
                ++tested;
                worst_margin = std::min(worst_margin, ex.max_psi + tol - ex.max_u);
                if (ex.exploratory || !ex.condition.passes || ex.max_u > ex.max_psi + tol)
                    ++violations;
            }
        }
        c.pass = tested > 0 && violations == 0;
        c.detail = fmt("%d domain/source pairs with positive slope margin (%d skipped): "
                       "max_u <= max_psi + 5h^2 in all, tightest margin %.3e; %d violations",
                       tested, skipped, worst_margin, violations);
    }));

    // ---- 10: sqrt-transform convexity (expected analytic failure) ------
    results.push_back(run(10, "sqrt-transform convexity on the ellipse", 0.0,
                          [&](Criterion& c) {
        const double h = 1.0 / 128.0;
        Domain ellipse = make_domain(DomainSpec::ellipse(2.0, 1.0));
        GridPtr grid = build_grid(ellipse, h);
        Field u = torsion_function(grid);
        ConcavityReport rep = transform_concavity(u, TransformSpec::sqrt());
        const double tau = rep.tolerances.interior;
        const double center_ref = -std::sqrt(0.4);  // exact lambda_min of D^2 sqrt(u) at 0
        bool concave_side = rep.max_lambda_interior <= tau;
        bool anchored = rep.min_lambda_interior > -0.70 && rep.min_lambda_interior < -0.55;

        c.pass = rep.interior_nsd;  // the convexity verdict, as stated
        if (!c.pass && concave_side && anchored && rep.interior_evaluated > 0)
            c.expected_fail = true;
        c.detail = fmt("min lambda(D^2 sqrt u) = %.4f < -tau = -%.4f on the %d-node set "
                       "{u >= 10 tau}: sqrt(u) is concave there, not convex -- its center "
                       "Hessian is diag(-sqrt(0.4)/4, -sqrt(0.4)) with lambda_min = %.4f, so "
                       "this check cannot pass at any resolution; the reverse (concavity) "
                       "direction holds: max lambda = %.4f <= tau",
                       rep.min_lambda_interior, tau, rep.interior_evaluated, center_ref,
                       rep.max_lambda_interior);
    }));

    // ---- 11: walk sampling primitives ----------------------------------
    results.push_back(run(11, "walk sampling primitives", 0.0, [&](Criterion& c) {
        WalkConfig cfg;
        cfg.n_walks = 100000;
        cfg.seed = 1;
        auto checks = brownian_unit_tests(cfg);
        bool moments_ok = !checks.empty();
        double zmax = 0.0;
        for (const BrownianCheck& chk : checks) {
            moments_ok = moments_ok && chk.pass;
            zmax = std::max(zmax, std::abs(chk.z));
        }

        Domain disk = make_domain(DomainSpec::disk(1.0));
        const Vec2 x{0.3, 0.0};
        const int bins = 36;
        auto hist = exit_histogram(disk, x, bins, cfg);
        long total = 0;
        for (const HistogramBin& b : hist) total += b.count;
        double chi2 = 0.0;
        const double perimeter = disk.stats().boundary_length;
        for (int k = 0; k < bins; ++k) {
            double t0 = hist[k].start_arclength;
            double t1 = (k + 1 < bins) ? hist[k + 1].start_arclength : perimeter;
            double expected = static_cast<double>(total) * oracles::poisson_arc_mass(x, t0, t1);
            chi2 += (hist[k].count - expected) * (hist[k].count - expected) / expected;
        }
        double p = numerics::chi_square_pvalue(chi2, bins - 1);

        c.pass = moments_ok && p > 0.001;
        c.detail = fmt("%zu moment identities, max |z| = %.2f <= 3; off-center exit histogram "
                       "vs the kernel over %d arcs: chi^2 = %.1f, p = %.3f > 0.001",
                       checks.size(), zmax, bins, chi2, p);
    }));

    // ---- 12: worker-count determinism -----------------------------------
    results.push_back(run(12, "worker-count determinism", 0.0, [&](Criterion& c) {
        if (!stored.have_exit || !stored.have_representation || !stored.have_occupation) {
            c.pass = false;
            c.detail = "prerequisite estimates from criteria 5-7 unavailable";
            return;
        }
        WalkConfig base;
        base.n_walks = 100000;
        base.seed = 1;

        Domain disk = make_domain(DomainSpec::disk(1.0));
        Domain rect = make_domain(DomainSpec::rectangle(2.0, 1.0));

        // identical setups to criteria 6 and 7 (deterministic solves)
        const Nonlinearity f = Nonlinearity::affine(1.0, 0.3);
        PdeSetup rep_setup = solve_setup(DomainSpec::disk(1.0), f, 1.0 / 128.0);
        BoundaryJet rep_jet = make_boundary_jet(*rep_setup.domain, rep_setup.u, 1.0 / 128.0);
        PdeSetup occ_setup = solve_setup(DomainSpec::disk(1.0), f, 1.0 / 64.0);
        Field fu(occ_setup.grid);
        for (size_t i = 0; i < occ_setup.grid->size(); ++i)
            fu.values[i] = f(occ_setup.u.values[i]);
        HessianField fu_hess = hessian_field(fu);

        bool identical = true;
        for (int workers : {1, 4}) {
            WalkConfig cfg = base;
            cfg.workers = workers;
            identical = identical &&
                        same_estimate(estimate_exit_time(disk, {0.0, 0.0}, cfg), stored.disk_exit);
            identical = identical &&
                        same_estimate(estimate_exit_time(rect, {0.0, 0.0}, cfg), stored.rect_exit);
            RepresentationCheck rc =
                verify_representation(*rep_setup.domain, f, rep_setup.u, rep_setup.hess, rep_jet,
                                      {0.3, 0.2}, {1.0, 0.0}, cfg);
            identical = identical && same_estimate(rc.rhs_occupation, stored.rep_occupation) &&
                        same_estimate(rc.rhs_boundary, stored.rep_boundary) &&
                        same_estimate(rc.rhs_total, stored.rep_total);
            identical = identical &&
                        same_estimate(estimate_occupation(*occ_setup.domain, {0.3, 0.2}, fu,
                                                          fu_hess, cfg),
                                      stored.occ_disk);
        }
        c.pass = identical;
        c.detail = fmt("exit-time (disk, rectangle), representation (disk probe), and occupation "
                       "(disk probe) estimates rerun with 1 and 4 workers: means and standard "
                       "errors %s the default-worker runs bit for bit",
                       identical ? "match" : "DO NOT match");
    }));

    // ---- report ----------------------------------------------------------
    int passed = 0, expected_failures = 0, unexpected_failures = 0;
    for (const Criterion& c : results) {
        std::printf("[%2d] %s  %s: %s (%.1f s)\n", c.id, c.pass ? "PASS" : "FAIL", c.name,
                    c.detail.c_str(), c.seconds);
        if (c.pass)
            ++passed;
        else if (c.expected_fail)
            ++expected_failures;
        else
            ++unexpected_failures;
    }
    std::printf("\n%d of %zu criteria pass; %d expected analytic failure(s); %d unexpected "
                "failure(s)\n",
                passed, results.size(), expected_failures, unexpected_failures);
    if (expected_failures > 0)
        std::printf("the sqrt-transform convexity line fails because the surface is concave, "
                    "not convex; the gate verified that outcome analytically\n");
    return unexpected_failures == 0 ? 0 : 1;
}
