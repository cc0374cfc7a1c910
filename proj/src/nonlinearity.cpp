#include "concavity/nonlinearity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "concavity/numerics.hpp"

namespace concavity {

std::string source_kind_name(SourceKind kind) {
    switch (kind) {
        case SourceKind::Constant: return "constant";
        case SourceKind::Affine: return "affine";
        case SourceKind::LogShift: return "log-shift";
        case SourceKind::SqrtShift: return "sqrt-shift";
        case SourceKind::Saturating: return "saturating";
    }
    return "unknown";
}

Nonlinearity::Nonlinearity(SourceKind kind, double c, double a)
    : kind_(kind), c_(c), a_(a) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("nonlinearity.make: offset c must be positive");
    if (!(a >= 0.0) || !std::isfinite(a))
        throw std::invalid_argument("nonlinearity.make: slope a must be non-negative");
}

Nonlinearity Nonlinearity::constant(double c) { return {SourceKind::Constant, c, 0.0}; }
Nonlinearity Nonlinearity::affine(double c, double a) { return {SourceKind::Affine, c, a}; }
Nonlinearity Nonlinearity::log_shift(double c, double a) { return {SourceKind::LogShift, c, a}; }
Nonlinearity Nonlinearity::sqrt_shift(double c, double a) { return {SourceKind::SqrtShift, c, a}; }
Nonlinearity Nonlinearity::saturating(double c, double a) { return {SourceKind::Saturating, c, a}; }

Nonlinearity Nonlinearity::make(SourceKind kind, double c, double a) {
    if (kind == SourceKind::Constant) return constant(c);
    return {kind, c, a};
}

double Nonlinearity::eval(double t, int order) const {
    if (!(t >= 0.0))
        throw std::invalid_argument("nonlinearity.eval: argument must be >= 0");
    if (order < 0 || order > 2)
        throw std::invalid_argument("nonlinearity.eval: order must be 0, 1 or 2");
    switch (kind_) {
        case SourceKind::Constant:
            return order == 0 ? c_ : 0.0;
        case SourceKind::Affine:
            if (order == 0) return c_ + a_ * t;
            return order == 1 ? a_ : 0.0;
        case SourceKind::LogShift:
            if (order == 0) return c_ + a_ * std::log1p(t);
            if (order == 1) return a_ / (1.0 + t);
            return -a_ / ((1.0 + t) * (1.0 + t));
        case SourceKind::SqrtShift:
            if (order == 0) return c_ + a_ * (std::sqrt(1.0 + t) - 1.0);
            if (order == 1) return 0.5 * a_ / std::sqrt(1.0 + t);
            return -0.25 * a_ / std::pow(1.0 + t, 1.5);
        case SourceKind::Saturating:
            if (order == 0) return c_ + a_ * t / (1.0 + t);
            if (order == 1) return a_ / ((1.0 + t) * (1.0 + t));
            return -2.0 * a_ / std::pow(1.0 + t, 3.0);
    }
    throw std::logic_error("nonlinearity.eval: unreachable");
}

std::string Nonlinearity::describe() const {
    std::ostringstream os;
    os << source_kind_name(kind_) << "(c=" << c_;
    if (kind_ != SourceKind::Constant) os << ", a=" << a_;
    os << ")";
    return os.str();
}

ConditionReport check_condition(const Nonlinearity& f, const GeometryStats& stats,
                                int n, TheoremCondition which) {
    if (n < 1)
        throw std::invalid_argument("nonlinearity.check_condition: dimension must be >= 1");
    if (!(stats.area > 0.0))
        throw std::invalid_argument("nonlinearity.check_condition: domain measure must be positive");

    ConditionReport report;
    report.condition = which;
    double wn = numerics::unit_ball_volume(n);
    report.threshold =
        2.0 * n * std::pow(wn, 2.0 / n) / std::pow(stats.area, 2.0 / n);

    if (!f.is_positive()) report.violated.push_back("positive");
    if (!f.is_monotone()) report.violated.push_back("monotone");
    if (which == TheoremCondition::ConcavityPropagation && !f.is_concave())
        report.violated.push_back("concave");

    if (which == TheoremCondition::ConcavityPropagation) {
        report.tested_value = f.d1_at_0();
        report.margin = report.threshold - report.tested_value;
        report.passes = report.violated.empty() && report.tested_value <= report.threshold;
    } else {
        report.tested_value = f.sup_d1();
        report.margin = report.threshold - report.tested_value;
        // the comparison theorem needs sup f' strictly below the threshold
        report.passes = report.violated.empty() && report.tested_value < report.threshold;
    }
    return report;
}

}  // namespace concavity
