#pragma once

#include <string>
#include <vector>

#include "concavity/geometry.hpp"

namespace concavity {

enum class SourceKind { Constant, Affine, LogShift, SqrtShift, Saturating };

std::string source_kind_name(SourceKind kind);

// Catalog of admissible sources f for -Laplace(u) = f(u). Every entry is
// positive, non-decreasing and concave on t >= 0 for the accepted parameter
// ranges (c > 0, a >= 0), with analytic first and second derivatives.
class Nonlinearity {
  public:
    static Nonlinearity constant(double c);
    static Nonlinearity affine(double c, double a);        // c + a t
    static Nonlinearity log_shift(double c, double a);     // c + a log(1 + t)
    static Nonlinearity sqrt_shift(double c, double a);    // c + a (sqrt(1 + t) - 1)
    static Nonlinearity saturating(double c, double a);    // c + a t / (1 + t)
    static Nonlinearity make(SourceKind kind, double c, double a);

    // value (order 0), first (order 1) or second (order 2) derivative at t >= 0
    double eval(double t, int order = 0) const;
    double operator()(double t) const { return eval(t, 0); }

    SourceKind kind() const { return kind_; }
    double c() const { return c_; }
    double a() const { return a_; }

    double value_at_0() const { return eval(0.0, 0); }
    double d1_at_0() const { return eval(0.0, 1); }
    // supremum of f' over t >= 0 (attained at 0 for concave entries)
    double sup_d1() const { return d1_at_0(); }

    bool is_positive() const { return true; }
    bool is_monotone() const { return true; }
    bool is_concave() const { return true; }

    std::string describe() const;

  private:
    Nonlinearity(SourceKind kind, double c, double a);

    SourceKind kind_;
    double c_;
    double a_;
};

enum class TheoremCondition { ConcavityPropagation, Rearrangement };

struct ConditionReport {
    TheoremCondition condition;
    bool passes = false;
    double tested_value = 0.0;  // f'(0) or sup f'
    double threshold = 0.0;     // 2 n w_n^{2/n} / |Omega|^{2/n}
    double margin = 0.0;        // threshold - tested_value
    std::vector<std::string> violated;  // names of failed structural flags
};

// Checks the hypotheses of the concavity-propagation theorem (strict slope
// bound at zero: f'(0) <= threshold) or of the rearrangement comparison
// (sup f' strictly below threshold), for the n-dimensional threshold
// 2 n w_n^{2/n} / |Omega|^{2/n}.
ConditionReport check_condition(const Nonlinearity& f, const GeometryStats& stats,
                                int n, TheoremCondition which);

}  // namespace concavity
