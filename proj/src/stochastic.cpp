#include "concavity/stochastic.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace concavity {

double resolve_eps_shell(const Domain& domain, const WalkConfig& cfg) {
    double eps = cfg.eps_shell > 0.0 ? cfg.eps_shell
                                     : 1e-4 * domain.stats().diameter;
    if (!(eps > 0.0) || eps > domain.stats().inradius / 10.0)
        throw std::invalid_argument(
            "stochastic.walk_config: eps_shell must be in (0, inradius/10]");
    return eps;
}

int resolve_workers(const WalkConfig& cfg) {
    if (const char* env = std::getenv("CONCAVITY_LAB_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(std::min(v, 64L));
    }
    if (cfg.workers > 0) return cfg.workers;
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min<unsigned>(hw ? hw : 2, 8));
}

double green_radial_sample(double u01) {
    if (u01 <= 0.0) return 0.0;
    if (u01 >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        double cdf = mid * mid * (1.0 - 2.0 * std::log(mid));
        if (cdf < u01)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ExitResult wos_exit(const Domain& domain, Vec2 x, double eps_shell,
                    long max_steps, Xoshiro256pp& rng) {
    ExitResult res;
    Vec2 y = x;
    for (long step = 0; step < max_steps; ++step) {
        double d = -domain.sdf(y);
        if (d <= eps_shell) {
            res.ok = true;
            res.exit = domain.project_boundary(y);
            return res;
        }
        res.steps.push_back({y, d});
        y = y + d * rng.unit_vector();
    }
    return res;  // budget exhausted: caller discards
}

namespace {

constexpr long kBlock = 4096;

struct WalkOutcome {
    bool ok = false;
    std::array<double, 3> v{};
};

struct Reduced {
    std::array<double, 3> sum{};
    std::array<double, 3> sumsq{};
    long accepted = 0;
    long discarded = 0;
};

// Deterministic parallel map-reduce over walk indices: per-block partial
// sums in walk order, blocks reduced in index order at the end.  The result
// is bit-identical for any worker count.
Reduced run_walks(long n_walks, uint64_t seed, int workers,
                  const std::function<WalkOutcome(long, Xoshiro256pp&)>& walk) {
    if (n_walks <= 0)
        throw std::invalid_argument("stochastic.walk_config: n_walks must be positive");
    const long n_blocks = (n_walks + kBlock - 1) / kBlock;
    std::vector<Reduced> partial(static_cast<size_t>(n_blocks));

    std::atomic<long> cursor{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        try {
            for (;;) {
                long b = cursor.fetch_add(1);
                if (b >= n_blocks) return;
                Reduced& acc = partial[static_cast<size_t>(b)];
                const long begin = b * kBlock;
                const long end = std::min(begin + kBlock, n_walks);
                for (long w = begin; w < end; ++w) {
                    Xoshiro256pp rng(seed, static_cast<uint64_t>(w));
                    WalkOutcome out = walk(w, rng);
                    if (!out.ok) {
                        ++acc.discarded;
                        continue;
                    }
                    ++acc.accepted;
                    for (int k = 0; k < 3; ++k) {
                        acc.sum[k] += out.v[k];
                        acc.sumsq[k] += out.v[k] * out.v[k];
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    int nw = std::max(1, std::min(workers, static_cast<int>(n_blocks)));
    if (nw == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nw));
        for (int t = 0; t < nw; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    Reduced total;
    for (const Reduced& p : partial) {
        total.accepted += p.accepted;
        total.discarded += p.discarded;
        for (int k = 0; k < 3; ++k) {
            total.sum[k] += p.sum[k];
            total.sumsq[k] += p.sumsq[k];
        }
    }
    return total;
}

Estimate make_estimate(const Reduced& r, int k, uint64_t seed) {
    Estimate e;
    e.seed = seed;
    e.n_walks = r.accepted;
    if (r.accepted <= 0) return e;
    e.mean = r.sum[k] / static_cast<double>(r.accepted);
    if (r.accepted > 1) {
        double ss = r.sumsq[k] - r.sum[k] * r.sum[k] / static_cast<double>(r.accepted);
        double var = std::max(ss, 0.0) / static_cast<double>(r.accepted - 1);
        e.std_error = std::sqrt(var / static_cast<double>(r.accepted));
    }
    return e;
}

void enforce_discard_budget(const Reduced& r, long n_walks, const char* op) {
    double rate = static_cast<double>(r.discarded) / static_cast<double>(n_walks);
    if (rate > 0.01)
        throw std::runtime_error(std::string(op) +
                                 ": discarded-walk rate exceeds 1% budget");
}

}  // namespace

Estimate estimate_harmonic_integral(
    const Domain& domain, Vec2 x,
    const std::function<double(const BoundaryPoint&)>& g, const WalkConfig& cfg) {
    double eps = resolve_eps_shell(domain, cfg);
    if (!(domain.sdf(x) < -eps))
        throw std::invalid_argument(
            "stochastic.estimate_harmonic_integral: probe not interior beyond eps_shell");
    Reduced r = run_walks(cfg.n_walks, cfg.seed, resolve_workers(cfg),
                          [&](long, Xoshiro256pp& rng) {
                              WalkOutcome out;
                              ExitResult exit = wos_exit(domain, x, eps, cfg.max_steps, rng);
                              if (!exit.ok) return out;
                              out.ok = true;
                              out.v[0] = g(exit.exit);
                              return out;
                          });
    enforce_discard_budget(r, cfg.n_walks, "stochastic.estimate_harmonic_integral");
    return make_estimate(r, 0, cfg.seed);
}

Estimate estimate_exit_time(const Domain& domain, Vec2 x, const WalkConfig& cfg) {
    double eps = resolve_eps_shell(domain, cfg);
    if (!(domain.sdf(x) < -eps))
        throw std::invalid_argument(
            "stochastic.estimate_exit_time: probe not interior beyond eps_shell");
    Reduced r = run_walks(
        cfg.n_walks, cfg.seed, resolve_workers(cfg), [&](long, Xoshiro256pp& rng) {
            WalkOutcome out;
            Vec2 y = x;
            double time = 0.0;
            for (long step = 0; step < cfg.max_steps; ++step) {
                double d = -domain.sdf(y);
                if (d <= eps) {
                    out.ok = true;
                    out.v[0] = time;
                    return out;
                }
                time += 0.5 * d * d;  // exact conditional mean rho^2/n, n = 2
                y = y + d * rng.unit_vector();
            }
            return out;
        });
    enforce_discard_budget(r, cfg.n_walks, "stochastic.estimate_exit_time");
    return make_estimate(r, 0, cfg.seed);
}

Estimate estimate_occupation(const Domain& domain, Vec2 x,
                             const std::function<double(Vec2, bool*)>& F,
                             const WalkConfig& cfg) {
    double eps = resolve_eps_shell(domain, cfg);
    if (!(domain.sdf(x) < -eps))
        throw std::invalid_argument(
            "stochastic.estimate_occupation: probe not interior beyond eps_shell");
    Reduced r = run_walks(
        cfg.n_walks, cfg.seed, resolve_workers(cfg), [&](long, Xoshiro256pp& rng) {
            WalkOutcome out;
            Vec2 y = x;
            double acc = 0.0;
            for (long step = 0; step < cfg.max_steps; ++step) {
                double d = -domain.sdf(y);
                if (d <= eps) {
                    out.ok = true;
                    out.v[0] = acc;
                    return out;
                }
                double radius = d * green_radial_sample(rng.uniform());
                Vec2 xi = y + radius * rng.unit_vector();
                bool ok = true;
                double fval = F(xi, &ok);
                if (!ok) return out;  // discard
                acc += 0.25 * d * d * fval;
                y = y + d * rng.unit_vector();
            }
            return out;
        });
    enforce_discard_budget(r, cfg.n_walks, "stochastic.estimate_occupation");
    return make_estimate(r, 0, cfg.seed);
}

Estimate estimate_occupation(const Domain& domain, Vec2 x, const Field& F,
                             const HessianField& hess, const WalkConfig& cfg) {
    FieldEvaluator eval(F, hess);
    return estimate_occupation(
        domain, x,
        [&eval](Vec2 p, bool* ok) { return eval.value(p, ok); }, cfg);
}

RepresentationCheck verify_representation(const Domain& domain,
                                          const Nonlinearity& f, const Field& u,
                                          const HessianField& hess,
                                          const BoundaryJet& boundary, Vec2 x,
                                          Vec2 direction, const WalkConfig& cfg) {
    double eps = resolve_eps_shell(domain, cfg);
    if (!(domain.sdf(x) < -eps))
        throw std::invalid_argument(
            "stochastic.verify_representation: probe not interior beyond eps_shell");
    Vec2 dir = normalized(direction);
    if (norm(dir) == 0.0)
        throw std::invalid_argument(
            "stochastic.verify_representation: direction must be non-zero");

    FieldEvaluator eval(u, hess);
    FieldEvaluator::Jet probe = eval.jet(x);
    if (!probe.ok)
        throw std::invalid_argument(
            "stochastic.verify_representation: Hessian not evaluable at the probe");

    RepresentationCheck check;
    check.probe = x;
    check.direction = dir;
    check.lhs = dir.x * dir.x * probe.uxx + 2.0 * dir.x * dir.y * probe.uxy +
                dir.y * dir.y * probe.uyy;

    // occupation term and boundary term share one walk stream
    Reduced r = run_walks(
        cfg.n_walks, cfg.seed, resolve_workers(cfg), [&](long, Xoshiro256pp& rng) {
            WalkOutcome out;
            Vec2 y = x;
            double occ = 0.0;
            for (long step = 0; step < cfg.max_steps; ++step) {
                double d = -domain.sdf(y);
                if (d <= eps) {
                    BoundaryPoint bp = domain.project_boundary(y);
                    bool ok = true;
                    double bval = boundary.second_derivative(bp.arclength, dir, &ok);
                    if (!ok) return out;  // discard: boundary fit missing here
                    out.ok = true;
                    out.v[0] = occ;
                    out.v[1] = bval;
                    out.v[2] = occ + bval;
                    return out;
                }
                double radius = d * green_radial_sample(rng.uniform());
                Vec2 xi = y + radius * rng.unit_vector();
                FieldEvaluator::Jet jet = eval.jet(xi);
                if (!jet.ok) return out;  // discard: field not evaluable
                double uval = std::max(jet.value, 0.0);
                double dn = dot(jet.grad, dir);
                double dnn = dir.x * dir.x * jet.uxx + 2.0 * dir.x * dir.y * jet.uxy +
                             dir.y * dir.y * jet.uyy;
                occ += 0.25 * d * d *
                       (f.eval(uval, 2) * dn * dn + f.eval(uval, 1) * dnn);
                y = y + d * rng.unit_vector();
            }
            return out;  // budget exhausted: discard
        });
    enforce_discard_budget(r, cfg.n_walks, "stochastic.verify_representation");
    check.rhs_occupation = make_estimate(r, 0, cfg.seed);
    check.rhs_boundary = make_estimate(r, 1, cfg.seed);
    check.rhs_total = make_estimate(r, 2, cfg.seed);
    check.discard_rate =
        static_cast<double>(r.discarded) / static_cast<double>(cfg.n_walks);
    double diff = check.lhs - check.rhs_total.mean;
    double se = check.rhs_total.std_error;
    check.z_score = diff == 0.0 ? 0.0 : diff / std::max(se, 1e-300);
    return check;
}

std::vector<BrownianCheck> brownian_unit_tests(const WalkConfig& cfg) {
    std::vector<BrownianCheck> checks;
    auto add_check = [&](const std::string& name, double target,
                         const std::function<double(Xoshiro256pp&)>& sample) {
        Reduced r = run_walks(cfg.n_walks, cfg.seed, resolve_workers(cfg),
                              [&](long, Xoshiro256pp& rng) {
                                  WalkOutcome out;
                                  out.ok = true;
                                  out.v[0] = sample(rng);
                                  return out;
                              });
        Estimate e = make_estimate(r, 0, cfg.seed);
        BrownianCheck c;
        c.name = name;
        c.estimate = e.mean;
        c.std_error = e.std_error;
        c.target = target;
        double diff = e.mean - target;
        c.z = diff == 0.0 ? 0.0 : diff / std::max(e.std_error, 1e-300);
        c.pass = std::abs(c.z) <= 3.0;
        checks.push_back(c);
    };

    for (double t : {0.1, 1.0}) {
        add_check("gaussian_increment_norm_t=" + std::to_string(t), 2.0 * t,
                  [t](Xoshiro256pp& rng) {
                      double g1 = rng.normal(), g2 = rng.normal();
                      return t * (g1 * g1 + g2 * g2);
                  });
    }
    struct MatCase {
        const char* name;
        double axx, axy, ayy;
    };
    const MatCase mats[] = {{"sphere_quadratic_diag(1,-1)", 1.0, 0.0, -1.0},
                            {"sphere_quadratic_identity", 1.0, 0.0, 1.0},
                            {"sphere_quadratic_generic", 0.7, 0.2, -0.3}};
    for (const MatCase& m : mats) {
        add_check(m.name, 0.5 * (m.axx + m.ayy), [m](Xoshiro256pp& rng) {
            Vec2 xdir = rng.unit_vector();
            return m.axx * xdir.x * xdir.x + 2.0 * m.axy * xdir.x * xdir.y +
                   m.ayy * xdir.y * xdir.y;
        });
    }
    return checks;
}

std::vector<HistogramBin> exit_histogram(const Domain& domain, Vec2 x, int bins,
                                         const WalkConfig& cfg) {
    if (bins < 1)
        throw std::invalid_argument("stochastic.exit_histogram: bins must be >= 1");
    double eps = resolve_eps_shell(domain, cfg);
    if (!(domain.sdf(x) < -eps))
        throw std::invalid_argument(
            "stochastic.exit_histogram: probe not interior beyond eps_shell");
    const double per = domain.stats().boundary_length;
    std::vector<HistogramBin> hist(static_cast<size_t>(bins));
    for (int b = 0; b < bins; ++b) hist[b].start_arclength = per * b / bins;

    long discarded = 0;
    for (long w = 0; w < cfg.n_walks; ++w) {
        Xoshiro256pp rng(cfg.seed, static_cast<uint64_t>(w));
        ExitResult exit = wos_exit(domain, x, eps, cfg.max_steps, rng);
        if (!exit.ok) {
            ++discarded;
            continue;
        }
        auto b = static_cast<long>(exit.exit.arclength / per * bins);
        b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
        ++hist[static_cast<size_t>(b)].count;
    }
    if (static_cast<double>(discarded) / static_cast<double>(cfg.n_walks) > 0.01)
        throw std::runtime_error("stochastic.exit_histogram: discarded-walk rate exceeds 1% budget");
    return hist;
}

}  // namespace concavity
