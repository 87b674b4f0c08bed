#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gribov {

// ln(n!) for n >= 0. Table for small n, Stirling series above.
double log_factorial(long n);

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]; nodes ascending.
const QuadratureRule& gauss_legendre(std::size_t n);

// Composite rule on [a, b]: `panels` equal panels, `order` nodes each.
QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order);

// Integral of f over [a, b] by recursive bisection of a 20-point rule
// until the halves agree with the whole; the absolute budget rel_tol * |first estimate|
// is halved at each level.
double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-14);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// Slope of log|v| against log(index). Zero entries are skipped.
double fit_power_exponent(std::span<const double> index, std::span<const double> value);

} // namespace gribov
