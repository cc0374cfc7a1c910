#include "concavity/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "concavity/fdsolver.hpp"
#include "concavity/numerics.hpp"

namespace concavity {

namespace {

void symmetric_eigenvalues(double uxx, double uxy, double uyy, double& lmin,
                           double& lmax) {
    double mean = 0.5 * (uxx + uyy);
    double disc = std::hypot(0.5 * (uxx - uyy), uxy);
    lmin = mean - disc;
    lmax = mean + disc;
}

struct QuadraticFit {
    bool ok = false;
    // coefficients of 1, X, Y, X^2, XY, Y^2 in coordinates scaled by 1/h
    std::array<double, 6> beta{};
};

QuadraticFit fit_quadratic(const std::vector<Vec2>& pts,
                           const std::vector<double>& vals, Vec2 center, double h) {
    QuadraticFit res;
    if (pts.size() < 6) return res;
    Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
    for (size_t i = 0; i < pts.size(); ++i) {
        double X = (pts[i].x - center.x) / h;
        double Y = (pts[i].y - center.y) / h;
        Eigen::Matrix<double, 6, 1> phi;
        phi << 1.0, X, Y, X * X, X * Y, Y * Y;
        M.noalias() += phi * phi.transpose();
        rhs.noalias() += vals[i] * phi;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(M);
    double emin = es.eigenvalues()(0), emax = es.eigenvalues()(5);
    if (!(emin > 0.0) || emax / emin > 1e8) return res;  // ill-conditioned: reject
    Eigen::Matrix<double, 6, 1> beta =
        es.eigenvectors() *
        ((es.eigenvectors().transpose() * rhs).array() / es.eigenvalues().array())
            .matrix();
    for (int k = 0; k < 6; ++k) res.beta[k] = beta(k);
    res.ok = true;
    return res;
}

struct CubicFit {
    bool ok = false;
    // coefficients of 1, X, Y, X^2, XY, Y^2, X^3, X^2Y, XY^2, Y^3 (coords
    // scaled by 1/h)
    std::array<double, 10> beta{};
};

// One-sided quadratic fits recover second derivatives only to O(h); a cubic
// basis absorbs the leading odd term and restores O(h^2) at the cloud edge.
CubicFit fit_cubic(const std::vector<Vec2>& pts, const std::vector<double>& vals,
                   Vec2 center, double h) {
    CubicFit res;
    if (pts.size() < 14) return res;
    Eigen::MatrixXd A(pts.size(), 10);
    Eigen::VectorXd b(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        double X = (pts[i].x - center.x) / h;
        double Y = (pts[i].y - center.y) / h;
        A(i, 0) = 1.0;
        A(i, 1) = X;
        A(i, 2) = Y;
        A(i, 3) = X * X;
        A(i, 4) = X * Y;
        A(i, 5) = Y * Y;
        A(i, 6) = X * X * X;
        A(i, 7) = X * X * Y;
        A(i, 8) = X * Y * Y;
        A(i, 9) = Y * Y * Y;
        b(i) = vals[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-7);
    if (qr.rank() < 10) return res;
    Eigen::VectorXd beta = qr.solve(b);
    if (!beta.allFinite()) return res;
    for (int k = 0; k < 10; ++k) res.beta[k] = beta(k);
    res.ok = true;
    return res;
}

// Interior values plus boundary-crossing zeros within radius 3h of `center`.
void gather_cloud(const Field& u, Vec2 center, int cx, int cy,
                  std::vector<Vec2>& pts, std::vector<double>& vals) {
    const Grid& g = *u.grid;
    const double rad = 3.0 * g.h * (1.0 + 1e-12);
    pts.clear();
    vals.clear();
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int iy = cy - 3; iy <= cy + 3; ++iy) {
        for (int ix = cx - 3; ix <= cx + 3; ++ix) {
            int32_t j = g.at(ix, iy);
            if (j < 0) continue;
            Vec2 p = g.position(ix, iy);
            if (norm(p - center) > rad) continue;
            pts.push_back(p);
            vals.push_back(u.values[j]);
            const Grid::Arms& a = g.arms[j];
            const double th[4] = {a.east, a.west, a.north, a.south};
            for (int k = 0; k < 4; ++k) {
                if (g.at(ix + dx[k], iy + dy[k]) >= 0) continue;  // interior arm
                Vec2 q = p + (th[k] * g.h) * Vec2{double(dx[k]), double(dy[k])};
                if (norm(q - center) <= rad) {
                    pts.push_back(q);
                    vals.push_back(0.0);
                }
            }
        }
    }
}

struct PeakFit {
    Vec2 location;
    double value = 0.0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
};

// Quadratic refinement of the discrete argmax: fit over the 3x3 patch and
// move to the stationary point (clamped to the patch).
PeakFit locate_peak(const Field& u, const HessianField& hess) {
    const Grid& g = *u.grid;
    size_t best = 0;
    for (size_t i = 1; i < u.values.size(); ++i)
        if (u.values[i] > u.values[best]) best = i;
    Grid::NodeRef n = g.nodes[best];
    Vec2 center = g.position(n);

    PeakFit peak;
    peak.location = center;
    peak.value = u.values[best];
    if (hess.evaluable[best]) {
        symmetric_eigenvalues(hess.uxx[best], hess.uxy[best], hess.uyy[best],
                              peak.lambda_min, peak.lambda_max);
    }

    std::vector<Vec2> pts;
    std::vector<double> vals;
    for (int iy = n.iy - 1; iy <= n.iy + 1; ++iy)
        for (int ix = n.ix - 1; ix <= n.ix + 1; ++ix) {
            int32_t j = g.at(ix, iy);
            if (j < 0) continue;
            pts.push_back(g.position(ix, iy));
            vals.push_back(u.values[j]);
        }
    QuadraticFit fit = fit_quadratic(pts, vals, center, g.h);
    if (!fit.ok) return peak;
    const auto& b = fit.beta;
    double det = 4.0 * b[3] * b[5] - b[4] * b[4];
    if (std::abs(det) < 1e-14) return peak;
    double X = (-2.0 * b[5] * b[1] + b[4] * b[2]) / det;
    double Y = (b[4] * b[1] - 2.0 * b[3] * b[2]) / det;
    if (std::hypot(X, Y) > 1.5) return peak;
    peak.location = center + Vec2{g.h * X, g.h * Y};
    peak.value = b[0] + b[1] * X + b[2] * Y + b[3] * X * X + b[4] * X * Y +
                 b[5] * Y * Y;
    double h2 = g.h * g.h;
    symmetric_eigenvalues(2.0 * b[3] / h2, b[4] / h2, 2.0 * b[5] / h2,
                          peak.lambda_min, peak.lambda_max);
    return peak;
}

}  // namespace

HessianField hessian_field(const Field& u) {
    if (!u.grid) throw std::invalid_argument("analysis.hessian_field: field has no grid");
    const Grid& g = *u.grid;
    const double h = g.h;
    const size_t n = g.size();

    HessianField out;
    out.grid = u.grid;
    out.ux.assign(n, 0.0);
    out.uy.assign(n, 0.0);
    out.uxx.assign(n, 0.0);
    out.uxy.assign(n, 0.0);
    out.uyy.assign(n, 0.0);
    out.lambda_min.assign(n, 0.0);
    out.lambda_max.assign(n, 0.0);
    out.evaluable.assign(n, 0);
    out.has_model.assign(n, 0);
    out.model.resize(n);

    std::vector<Vec2> pts;
    std::vector<double> vals;
    for (size_t i = 0; i < n; ++i) {
        Grid::NodeRef nd = g.nodes[i];
        auto id = [&](int dx, int dy) { return g.at(nd.ix + dx, nd.iy + dy); };
        bool deep = true;
        for (int dy = -1; dy <= 1 && deep; ++dy)
            for (int dx = -1; dx <= 1 && deep; ++dx)
                if (id(dx, dy) < 0) deep = false;
        if (deep) {
            double up = u.values[i];
            double ue = u.values[id(1, 0)], uw = u.values[id(-1, 0)];
            double un = u.values[id(0, 1)], us = u.values[id(0, -1)];
            double une = u.values[id(1, 1)], unw = u.values[id(-1, 1)];
            double use = u.values[id(1, -1)], usw = u.values[id(-1, -1)];
            out.ux[i] = (ue - uw) / (2.0 * h);
            out.uy[i] = (un - us) / (2.0 * h);
            out.uxx[i] = (ue - 2.0 * up + uw) / (h * h);
            out.uyy[i] = (un - 2.0 * up + us) / (h * h);
            out.uxy[i] = (une - unw - use + usw) / (4.0 * h * h);
            out.evaluable[i] = 1;
        } else {
            Vec2 center = g.position(nd);
            gather_cloud(u, center, nd.ix, nd.iy, pts, vals);
            QuadraticFit fit = fit_quadratic(pts, vals, center, h);
            if (!fit.ok) {
                ++out.rejected;
                continue;
            }
            const auto& b = fit.beta;
            out.ux[i] = b[1] / h;
            out.uy[i] = b[2] / h;
            out.uxx[i] = 2.0 * b[3] / (h * h);
            out.uxy[i] = b[4] / (h * h);
            out.uyy[i] = 2.0 * b[5] / (h * h);
            out.evaluable[i] = 1;
            out.has_model[i] = 1;
            out.model[i] = b;
        }
        symmetric_eigenvalues(out.uxx[i], out.uxy[i], out.uyy[i],
                              out.lambda_min[i], out.lambda_max[i]);
    }
    return out;
}

std::vector<BoundaryHessianSample> boundary_hessian(const Field& u, int m) {
    if (!u.grid) throw std::invalid_argument("analysis.boundary_hessian: field has no grid");
    if (m < 8) throw std::invalid_argument("analysis.boundary_hessian: need m >= 8");
    const Grid& g = *u.grid;
    const Domain& dom = g.domain;
    const double h = g.h;
    const double per = dom.stats().boundary_length;

    std::vector<BoundaryHessianSample> out(m);
    std::vector<Vec2> pts;
    std::vector<double> vals;
    for (int k = 0; k < m; ++k) {
        double s = per * k / m;
        BoundaryPoint bp = dom.boundary_point(s);
        BoundaryHessianSample& smp = out[k];
        smp.arclength = s;
        smp.point = bp.point;
        smp.inward_normal = bp.inward_normal;

        // cloud: boundary arc through the sample (pins the Dirichlet zero)
        // plus interior nodes from the lattice window around it
        auto gather = [&](int reach) {
            pts.clear();
            vals.clear();
            for (int j = -reach; j <= reach; ++j) {
                BoundaryPoint q = dom.boundary_point(s + j * h);
                pts.push_back(q.point);
                vals.push_back(0.0);
            }
            int cx = static_cast<int>(std::floor((bp.point.x - g.origin.x) / h));
            int cy = static_cast<int>(std::floor((bp.point.y - g.origin.y) / h));
            const double rad = reach * h * (1.0 + 1e-12);
            for (int iy = cy - reach; iy <= cy + reach + 1; ++iy)
                for (int ix = cx - reach; ix <= cx + reach + 1; ++ix) {
                    int32_t j = g.at(ix, iy);
                    if (j < 0) continue;
                    Vec2 p = g.position(ix, iy);
                    if (norm(p - bp.point) > rad) continue;
                    pts.push_back(p);
                    vals.push_back(u.values[j]);
                }
        };

        std::array<double, 6> b{};
        gather(4);
        CubicFit cubic = fit_cubic(pts, vals, bp.point, h);
        if (cubic.ok) {
            std::copy(cubic.beta.begin(), cubic.beta.begin() + 6, b.begin());
        } else {
            gather(3);
            QuadraticFit quad = fit_quadratic(pts, vals, bp.point, h);
            if (!quad.ok) continue;
            b = quad.beta;
        }
        smp.evaluable = true;
        smp.ux = b[1] / h;
        smp.uy = b[2] / h;
        smp.uxx = 2.0 * b[3] / (h * h);
        smp.uxy = b[4] / (h * h);
        smp.uyy = 2.0 * b[5] / (h * h);
        symmetric_eigenvalues(smp.uxx, smp.uxy, smp.uyy, smp.lambda_min,
                              smp.lambda_max);
        Vec2 nrm = bp.inward_normal;
        Vec2 tan = perp_left(nrm);
        smp.normal_second = nrm.x * nrm.x * smp.uxx + 2.0 * nrm.x * nrm.y * smp.uxy +
                            nrm.y * nrm.y * smp.uyy;
        smp.tangent_second = tan.x * tan.x * smp.uxx + 2.0 * tan.x * tan.y * smp.uxy +
                             tan.y * tan.y * smp.uyy;
    }
    return out;
}

Tolerances default_tolerances(const Field& u) {
    // source magnitude recovered from the field itself
    double scale = apply_laplacian(u).max_abs();
    if (scale == 0.0) scale = 1.0;
    return {5.0 * u.grid->h * scale, 20.0 * u.grid->h * scale};
}

ConcavityReport concavity_report(const Field& u, const HessianField& hess,
                                 const std::vector<BoundaryHessianSample>& bdy,
                                 std::optional<Tolerances> tol) {
    if (!u.grid) throw std::invalid_argument("analysis.concavity_report: field has no grid");
    ConcavityReport rep;
    rep.tolerances = tol ? *tol : default_tolerances(u);

    const Grid& g = *u.grid;
    double max_li = -1e300, min_li = 1e300;
    Vec2 witness{}, min_witness{};
    int evaluated = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        if (!hess.evaluable[i]) continue;
        ++evaluated;
        if (hess.lambda_max[i] > max_li) {
            max_li = hess.lambda_max[i];
            witness = g.position(g.nodes[i]);
        }
        if (hess.lambda_min[i] < min_li) {
            min_li = hess.lambda_min[i];
            min_witness = g.position(g.nodes[i]);
        }
    }
    rep.interior_evaluated = evaluated;
    rep.interior_rejected = hess.rejected;
    rep.max_lambda_interior = max_li;
    rep.argmax_interior = witness;
    rep.min_lambda_interior = min_li;
    rep.argmin_interior = min_witness;
    rep.interior_nsd = evaluated > 0 && max_li <= rep.tolerances.interior;

    double max_lb = -1e300;
    double warc = 0.0;
    int beval = 0, brej = 0;
    for (const auto& s : bdy) {
        if (!s.evaluable) {
            ++brej;
            continue;
        }
        ++beval;
        if (s.lambda_max > max_lb) {
            max_lb = s.lambda_max;
            warc = s.arclength;
        }
    }
    rep.boundary_evaluated = beval;
    rep.boundary_rejected = brej;
    rep.max_lambda_boundary = max_lb;
    rep.argmax_boundary_arclength = warc;
    rep.boundary_nsd = beval > 0 && max_lb <= rep.tolerances.boundary;
    rep.boundary_strictly_negative = beval > 0 && max_lb < -rep.tolerances.boundary;

    PeakFit peak = locate_peak(u, hess);
    rep.peak = peak.location;
    rep.peak_value = peak.value;
    rep.lambda_max_at_peak = peak.lambda_max;
    return rep;
}

ConcavityReport concavity_report(const Field& u, std::optional<Tolerances> tol) {
    HessianField hess = hessian_field(u);
    const double per = u.grid->domain.stats().boundary_length;
    int m = std::max(64, static_cast<int>(std::ceil(per / u.grid->h)));
    return concavity_report(u, hess, boundary_hessian(u, m), tol);
}

std::string TransformSpec::name() const {
    switch (kind) {
        case Kind::Sqrt: return "sqrt";
        case Kind::Log: return "log";
        case Kind::Power: return "power(" + std::to_string(alpha) + ")";
    }
    return "unknown";
}

ConcavityReport transform_concavity(const Field& u, TransformSpec transform,
                                    std::optional<Tolerances> tol) {
    if (!u.grid) throw std::invalid_argument("analysis.transform_concavity: field has no grid");
    Tolerances tols = tol ? *tol : default_tolerances(u);
    // sqrt/log/power(<1) derivatives blow up as u -> 0; restrict evaluation
    const bool singular_at_zero =
        transform.kind != TransformSpec::Kind::Power || transform.alpha < 1.0;
    const double floor = singular_at_zero ? 10.0 * tols.interior : -1e300;

    Field gfield(u.grid, 0.0);
    for (size_t i = 0; i < u.values.size(); ++i) {
        double v = u.values[i];
        if (v <= 0.0 && v >= floor)
            throw std::invalid_argument(
                "analysis.transform_concavity: non-positive value in evaluation set");
        double safe = std::max(v, 1e-300);
        switch (transform.kind) {
            case TransformSpec::Kind::Sqrt: gfield.values[i] = std::sqrt(safe); break;
            case TransformSpec::Kind::Log: gfield.values[i] = std::log(safe); break;
            case TransformSpec::Kind::Power:
                gfield.values[i] =
                    transform.alpha == 1.0 ? v : std::pow(safe, transform.alpha);
                break;
        }
    }

    HessianField hess = hessian_field(gfield);
    ConcavityReport rep;
    rep.tolerances = tols;
    rep.boundary_checked = false;
    rep.transform = transform.name();
    rep.verdict_kind =
        transform.kind == TransformSpec::Kind::Sqrt ? "convexity" : "concavity";

    const Grid& g = *u.grid;
    double max_l = -1e300, min_l = 1e300;
    Vec2 argmax{}, argmin{};
    int evaluated = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        if (!hess.evaluable[i] || u.values[i] < floor) continue;
        ++evaluated;
        if (hess.lambda_max[i] > max_l) {
            max_l = hess.lambda_max[i];
            argmax = g.position(g.nodes[i]);
        }
        if (hess.lambda_min[i] < min_l) {
            min_l = hess.lambda_min[i];
            argmin = g.position(g.nodes[i]);
        }
    }
    rep.interior_evaluated = evaluated;
    rep.interior_rejected = hess.rejected;
    rep.max_lambda_interior = max_l;
    rep.argmax_interior = argmax;
    rep.min_lambda_interior = min_l;
    rep.argmin_interior = argmin;
    if (rep.verdict_kind == "convexity")
        rep.interior_nsd = evaluated > 0 && min_l >= -tols.interior;
    else
        rep.interior_nsd = evaluated > 0 && max_l <= tols.interior;

    PeakFit peak = locate_peak(gfield, hess);
    rep.peak = peak.location;
    rep.peak_value = peak.value;
    rep.lambda_max_at_peak = peak.lambda_max;
    return rep;
}

SweepResult eccentricity_sweep(const std::vector<double>& aspects, double h,
                               const Nonlinearity& f, int workers) {
    if (aspects.empty())
        throw std::invalid_argument("analysis.eccentricity_sweep: empty aspect list");
    for (double a : aspects)
        if (!(a >= 1.0))
            throw std::invalid_argument("analysis.eccentricity_sweep: aspects must be >= 1");

    SweepResult result;
    result.rows.resize(aspects.size());
    std::atomic<size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= aspects.size()) return;
            try {
                DomainSpec spec = DomainSpec::rounded_rectangle(aspects[i], 1.0, 0.25);
                Domain dom = make_domain(spec);
                GridPtr grid = build_grid(dom, h);
                SolveReport solved = solve_semilinear(grid, f);
                HessianField hess = hessian_field(solved.u);
                PeakFit peak = locate_peak(solved.u, hess);
                SweepRow row;
                row.aspect = aspects[i];
                row.lambda_max_at_peak = peak.lambda_max;
                row.log_abs_lambda_max = std::log(std::abs(peak.lambda_max));
                row.peak_value = peak.value;
                result.rows[i] = row;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    size_t nw = workers > 0 ? static_cast<size_t>(workers)
                            : std::min<size_t>(aspects.size(), hw ? hw : 2);
    nw = std::max<size_t>(1, std::min(nw, aspects.size()));
    if (nw == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nw; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::sort(result.rows.begin(), result.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.aspect < b.aspect; });
    result.all_negative = std::all_of(
        result.rows.begin(), result.rows.end(),
        [](const SweepRow& r) { return r.lambda_max_at_peak < 0.0; });
    if (result.all_negative && result.rows.size() >= 2) {
        std::vector<double> xs, ys;
        for (const auto& r : result.rows) {
            xs.push_back(r.aspect);
            ys.push_back(r.log_abs_lambda_max);
        }
        numerics::LinearFit fit = numerics::fit_line(xs, ys);
        result.slope = fit.slope;
        result.intercept = fit.intercept;
        result.r_squared = fit.r_squared;
    }
    return result;
}

FieldEvaluator::FieldEvaluator(const Field& u, const HessianField& hess)
    : u_(u), hess_(hess) {
    if (!u.grid || u.grid.get() != hess.grid.get())
        throw std::invalid_argument("analysis.field_evaluator: field/hessian grid mismatch");
}

FieldEvaluator::Jet FieldEvaluator::jet(Vec2 p) const {
    const Grid& g = *u_.grid;
    const double h = g.h;
    Jet out;
    double fx = (p.x - g.origin.x) / h;
    double fy = (p.y - g.origin.y) / h;
    int ix0 = static_cast<int>(std::floor(fx));
    int iy0 = static_cast<int>(std::floor(fy));
    double tx = fx - ix0, ty = fy - iy0;

    int32_t c00 = g.at(ix0, iy0), c10 = g.at(ix0 + 1, iy0);
    int32_t c01 = g.at(ix0, iy0 + 1), c11 = g.at(ix0 + 1, iy0 + 1);
    bool full = c00 >= 0 && c10 >= 0 && c01 >= 0 && c11 >= 0 &&
                hess_.evaluable[c00] && hess_.evaluable[c10] &&
                hess_.evaluable[c01] && hess_.evaluable[c11];
    if (full) {
        auto blend = [&](const std::vector<double>& q) {
            return (1.0 - tx) * (1.0 - ty) * q[c00] + tx * (1.0 - ty) * q[c10] +
                   (1.0 - tx) * ty * q[c01] + tx * ty * q[c11];
        };
        out.ok = true;
        out.value = blend(u_.values);
        out.grad = {blend(hess_.ux), blend(hess_.uy)};
        out.uxx = blend(hess_.uxx);
        out.uxy = blend(hess_.uxy);
        out.uyy = blend(hess_.uyy);
        return out;
    }

    // fallback: nearest evaluable corner provides a local quadratic model
    int32_t best = -1;
    double best_d = 1e300;
    const int32_t corners[4] = {c00, c10, c01, c11};
    for (int32_t c : corners) {
        if (c < 0 || !hess_.evaluable[c]) continue;
        double d = norm(p - g.position(g.nodes[c]));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (best < 0) return out;

    Vec2 base = g.position(g.nodes[best]);
    double X = (p.x - base.x) / h, Y = (p.y - base.y) / h;
    if (hess_.has_model[best]) {
        const auto& b = hess_.model[best];
        out.value = b[0] + b[1] * X + b[2] * Y + b[3] * X * X + b[4] * X * Y +
                    b[5] * Y * Y;
        out.grad = {(b[1] + 2.0 * b[3] * X + b[4] * Y) / h,
                    (b[2] + b[4] * X + 2.0 * b[5] * Y) / h};
        out.uxx = 2.0 * b[3] / (h * h);
        out.uxy = b[4] / (h * h);
        out.uyy = 2.0 * b[5] / (h * h);
    } else {
        // second-order Taylor step from the stored derivatives
        Vec2 d{p.x - base.x, p.y - base.y};
        out.value = u_.values[best] + hess_.ux[best] * d.x + hess_.uy[best] * d.y +
                    0.5 * (hess_.uxx[best] * d.x * d.x +
                           2.0 * hess_.uxy[best] * d.x * d.y +
                           hess_.uyy[best] * d.y * d.y);
        out.grad = {hess_.ux[best] + hess_.uxx[best] * d.x + hess_.uxy[best] * d.y,
                    hess_.uy[best] + hess_.uxy[best] * d.x + hess_.uyy[best] * d.y};
        out.uxx = hess_.uxx[best];
        out.uxy = hess_.uxy[best];
        out.uyy = hess_.uyy[best];
    }
    out.ok = true;
    return out;
}

double FieldEvaluator::value(Vec2 p, bool* ok) const {
    Jet j = jet(p);
    if (ok) *ok = j.ok;
    return j.value;
}

BoundaryJet::BoundaryJet(const Domain& domain,
                         std::vector<BoundaryHessianSample> samples)
    : perimeter_(domain.stats().boundary_length), samples_(std::move(samples)) {
    if (samples_.size() < 2)
        throw std::invalid_argument("analysis.boundary_jet: need >= 2 samples");
}

double BoundaryJet::second_derivative(double arclength, Vec2 dir, bool* ok) const {
    const size_t m = samples_.size();
    double s = std::fmod(arclength, perimeter_);
    if (s < 0.0) s += perimeter_;
    double pos = s * m / perimeter_;
    size_t k = std::min(static_cast<size_t>(pos), m - 1);
    size_t k1 = (k + 1) % m;
    double t = pos - k;
    if (!samples_[k].evaluable || !samples_[k1].evaluable) {
        if (ok) *ok = false;
        return 0.0;
    }
    double uxx = (1.0 - t) * samples_[k].uxx + t * samples_[k1].uxx;
    double uxy = (1.0 - t) * samples_[k].uxy + t * samples_[k1].uxy;
    double uyy = (1.0 - t) * samples_[k].uyy + t * samples_[k1].uyy;
    if (ok) *ok = true;
    return dir.x * dir.x * uxx + 2.0 * dir.x * dir.y * uxy + dir.y * dir.y * uyy;
}

}  // namespace concavity
