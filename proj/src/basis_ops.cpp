#include "gribov/basis_ops.hpp"

#include "gribov/errors.hpp"
#include "gribov/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace gribov {

namespace {

void require_basis(const CoefficientVector& v, Basis b, const char* op) {
    if (v.basis() != b)
        throw DomainError(std::string(op) + ": input is in the wrong basis");
}

// Output buffer covering [lo, hi).
struct Accumulator {
    std::size_t lo, hi;
    std::vector<cplx> data;
    Accumulator(std::size_t lo_, std::size_t hi_)
        : lo(lo_), hi(std::max(lo_, hi_)), data(hi - lo, cplx(0.0)) {}
    void add(std::size_t index, cplx value) { data[index - lo] += value; }
    CoefficientVector finish(Basis b) { return CoefficientVector(b, lo, std::move(data)); }
};

} // namespace

CoefficientVector::CoefficientVector(Basis basis, std::size_t start, std::vector<cplx> entries)
    : basis_(basis), start_(start), entries_(std::move(entries)) {
    for (const auto& z : entries_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw DomainError("coefficient vector has a non-finite entry");
}

CoefficientVector CoefficientVector::unit(Basis basis, std::size_t index, cplx value) {
    return CoefficientVector(basis, index, {value});
}

cplx CoefficientVector::operator[](std::size_t index) const {
    if (index < start_ || index >= end()) return 0.0;
    return entries_[index - start_];
}

double CoefficientVector::norm_squared() const {
    CompensatedSum s;
    for (const auto& z : entries_) s.add(std::norm(z));
    return s.value();
}

bool CoefficientVector::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](cplx z) { return z == 0.0; });
}

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b) {
    if (a.size() == 0) return b;
    if (b.size() == 0) return a;
    if (a.basis() != b.basis()) throw DomainError("adding vectors from different bases");
    Accumulator acc(std::min(a.start(), b.start()), std::max(a.end(), b.end()));
    for (std::size_t k = a.start(); k < a.end(); ++k) acc.add(k, a[k]);
    for (std::size_t k = b.start(); k < b.end(); ++k) acc.add(k, b[k]);
    return acc.finish(a.basis());
}

CoefficientVector operator*(cplx s, const CoefficientVector& v) {
    std::vector<cplx> out(v.entries().begin(), v.entries().end());
    for (auto& z : out) z *= s;
    return CoefficientVector(v.basis(), v.start(), std::move(out));
}

double max_abs_difference(const CoefficientVector& a, const CoefficientVector& b) {
    const std::size_t lo = std::min(a.start(), b.start());
    const std::size_t hi = std::max(a.end(), b.end());
    double worst = 0.0;
    for (std::size_t k = lo; k < hi; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

double gribov_b(std::size_t k) {
    const double x = static_cast<double>(k);
    return x * std::sqrt(x + 1.0);
}

double heun_log_weight(int p, int m, long k) {
    return 0.5 * (log_factorial(k) + log_factorial(k + m)) - log_factorial(k - p);
}

namespace {

// sqrt(k!(k+m)!)/(k-p)! as k!/(k-p)! * sqrt((k+m)!/k!); the log form loses a few ulps
// per unit of magnitude, so it is only the fallback for huge p, m.
double heun_weight(int p, int m, long k) {
    if (p + m <= 64) {
        double falling = 1.0, rising = 1.0;
        for (long j = k - p + 1; j <= k; ++j) falling *= static_cast<double>(j);
        for (long j = k + 1; j <= k + m; ++j) rising *= static_cast<double>(j);
        const double w = falling * std::sqrt(rising);
        if (std::isfinite(w) && w > 0.0) return w;
    }
    return std::exp(heun_log_weight(p, m, k));
}

} // namespace

CoefficientVector ladder_down(const CoefficientVector& v) {
    require_basis(v, Basis::e, "ladder_down");
    if (v.end() <= 1) return CoefficientVector(Basis::e, 0, {});
    Accumulator acc(v.start() == 0 ? 0 : v.start() - 1, v.end() - 1);
    for (std::size_t n = std::max<std::size_t>(v.start(), 1); n < v.end(); ++n)
        acc.add(n - 1, std::sqrt(static_cast<double>(n)) * v[n]);
    return acc.finish(Basis::e);
}

CoefficientVector ladder_up(const CoefficientVector& v) {
    require_basis(v, Basis::e, "ladder_up");
    Accumulator acc(v.start() + 1, v.end() + 1);
    for (std::size_t n = v.start(); n < v.end(); ++n)
        acc.add(n + 1, std::sqrt(static_cast<double>(n) + 1.0) * v[n]);
    return acc.finish(Basis::e);
}

CoefficientVector gribov_apply(const OperatorParams& params, const CoefficientVector& v) {
    require_basis(v, Basis::e, "gribov_apply");
    if (v.size() == 0) return v;
    if (v.start() < 1) throw DomainError("gribov_apply acts on B_0: start index must be >= 1");
    const cplx il(0.0, params.lambda);
    Accumulator acc(std::max<std::size_t>(1, v.start() - 1), v.end() + 1);
    for (std::size_t n = v.start(); n < v.end(); ++n) {
        const cplx c = v[n];
        acc.add(n, params.mu * static_cast<double>(n) * c);
        acc.add(n + 1, il * gribov_b(n) * c);
        if (n >= 2) acc.add(n - 1, il * gribov_b(n - 1) * c);
    }
    return acc.finish(Basis::e);
}

CoefficientVector heun_pm_apply(const OperatorParams& params, const CoefficientVector& v) {
    require_basis(v, Basis::e, "heun_pm_apply");
    if (params.p < 1 || params.m < 1) throw DomainError("heun_pm_apply needs p, m >= 1");
    const std::size_t p = static_cast<std::size_t>(params.p);
    const std::size_t m = static_cast<std::size_t>(params.m);
    if (v.size() == 0) return v;
    Accumulator acc(v.start() >= m ? v.start() - m : 0, v.end() + m);
    for (std::size_t k = std::max(v.start(), p); k < v.end(); ++k) {
        const cplx c = v[k];
        if (c == 0.0) continue;
        const long kl = static_cast<long>(k);
        acc.add(k + m, heun_weight(params.p, params.m, kl) * c);
        if (k >= p + m)
            acc.add(k - m, heun_weight(params.p, params.m, kl - params.m) * c);
    }
    return acc.finish(Basis::e);
}

CoefficientVector shift_apply(const OperatorParams& params, const CoefficientVector& v) {
    require_basis(v, Basis::e, "shift_apply");
    if (params.p < 1 || params.m < 1) throw DomainError("shift_apply needs p, m >= 1");
    if (v.end() <= 1) return CoefficientVector(Basis::e, 0, {});
    Accumulator acc(v.start() == 0 ? 0 : v.start() - 1, v.end() - 1);
    for (std::size_t k = std::max<std::size_t>(v.start(), 1); k < v.end(); ++k) {
        const long j = static_cast<long>(k) - 1;
        if (j - params.m < 0 || j - params.p < 0) continue;
        const double lw =
            0.5 * (log_factorial(j) + log_factorial(j - params.m)) - log_factorial(j - params.p);
        acc.add(k - 1, std::exp(lw) * v[k]);
    }
    return acc.finish(Basis::e);
}

CoefficientVector imaginary_axis_apply(double lambda, const CoefficientVector& v) {
    require_basis(v, Basis::u, "imaginary_axis_apply");
    if (v.size() == 0) return v;
    Accumulator acc(std::max<std::size_t>(1, v.start() == 0 ? 0 : v.start() - 1), v.end() + 1);
    for (std::size_t k = std::max<std::size_t>(v.start(), 1); k < v.end(); ++k) {
        const cplx c = lambda * v[k];
        acc.add(k + 1, gribov_b(k) * c);
        if (k >= 2) acc.add(k - 1, -gribov_b(k - 1) * c);
    }
    return acc.finish(Basis::u);
}

} // namespace gribov
