#pragma once

#include <functional>
#include <vector>

namespace concavity::numerics {

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

// Fixed 5-point Gauss-Legendre rule on [a, b]; exact for polynomials of
// degree <= 9, near machine precision for smooth integrands on short cells.
double gauss5(const std::function<double(double)>& f, double a, double b);

// Root of a continuous monotone f on a bracketing interval [lo, hi]
// (f(lo) and f(hi) of opposite sign or zero). Plain bisection, driven to
// floating-point resolution of the bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              int max_iter = 200);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper-tail p-value of a chi-square statistic with dof degrees of freedom.
double chi_square_pvalue(double stat, int dof);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least-squares line through (x_i, y_i).
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace concavity::numerics
