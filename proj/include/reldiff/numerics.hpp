#pragma once

#include <functional>
#include <span>
#include <vector>

namespace reldiff {

// adaptive Simpson integration of f over [a, b]
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-11, int max_depth = 40);

// trapezoid rule over a tabulated function; grid must be increasing
double integrate_trapezoid(std::span<const double> x, std::span<const double> y);

// cumulative trapezoid, same length as the inputs, starts at 0
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> y);

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

// regularized lower incomplete gamma P(a, x)
double gamma_p(double a, double x);

// chi-square CDF and quantile (dof > 0)
double chi_square_cdf(double x, double dof);
double chi_square_quantile(double prob, double dof);

}  // namespace reldiff
