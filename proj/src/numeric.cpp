#include "gribov/numeric.hpp"

#include "gribov/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace gribov {

namespace {

constexpr long kTableSize = 256;

const std::array<double, kTableSize>& factorial_table() {
    static const std::array<double, kTableSize> table = [] {
        std::array<double, kTableSize> t{};
        for (long k = 0; k < kTableSize; ++k) t[k] = std::lgamma(static_cast<double>(k) + 1.0);
        return t;
    }();
    return table;
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double whole,
                     double abs_tol, int depth) {
    const auto& rule = gauss_legendre(20);
    auto panel = [&](double lo, double hi) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        CompensatedSum s;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
        return half * s.value();
    };
    const double m = 0.5 * (a + b);
    const double left = panel(a, m), right = panel(m, b);
    const double both = left + right;
    // the 8 eps floor stops refinement once the halves agree to rounding
    const double err = std::abs(both - whole);
    if (depth >= 30 || err <= abs_tol ||
        err <= 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right)) ||
        err <= 1e-300)
        return both;
    return adaptive_step(f, a, m, left, 0.5 * abs_tol, depth + 1) +
           adaptive_step(f, m, b, right, 0.5 * abs_tol, depth + 1);
}

} // namespace

double log_factorial(long n) {
    if (n < 0) throw DomainError("log_factorial of negative argument");
    if (n < kTableSize) return factorial_table()[static_cast<std::size_t>(n)];
    const double x = static_cast<double>(n);
    const double inv = 1.0 / x, inv2 = inv * inv;
    const double series =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x) + series;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

const QuadratureRule& gauss_legendre(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
    if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;

    auto rule = std::make_unique<QuadratureRule>();
    rule->nodes.resize(n);
    rule->weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16) break;
        }
        // refresh derivative at the final node
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule->nodes[i] = -x;
        rule->nodes[n - 1 - i] = x;
        rule->weights[i] = w;
        rule->weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
    auto& ref = *rule;
    cache.emplace(n, std::move(rule));
    return ref;
}

QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order) {
    if (panels == 0) throw DomainError("composite rule needs at least one panel");
    const auto& base = gauss_legendre(order);
    QuadratureRule out;
    out.nodes.reserve(panels * order);
    out.weights.reserve(panels * order);
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        const double half = 0.5 * width, mid = lo + half;
        for (std::size_t i = 0; i < order; ++i) {
            out.nodes.push_back(mid + half * base.nodes[i]);
            out.weights.push_back(half * base.weights[i]);
        }
    }
    return out;
}

double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double rel_tol) {
    if (a == b) return 0.0;
    const auto& rule = gauss_legendre(20);
    const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    const double whole = half * s.value();
    return adaptive_step(f, a, b, whole, rel_tol * std::abs(whole), 0);
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw DomainError("least squares needs at least two paired samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("least squares with constant abscissa");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            ssr += r * r;
        }
        const double s2 = ssr / static_cast<double>(n - 2);
        fit.slope_stderr = std::sqrt(s2 / sxx);
        fit.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
    }
    return fit;
}

double fit_power_exponent(std::span<const double> index, std::span<const double> value) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < index.size() && i < value.size(); ++i) {
        if (value[i] == 0.0 || index[i] <= 0.0) continue;
        lx.push_back(std::log(index[i]));
        ly.push_back(std::log(std::abs(value[i])));
    }
    return least_squares(lx, ly).slope;
}

} // namespace gribov
