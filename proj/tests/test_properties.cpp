// Randomized property checks with fixed seeds.

#include "gribov/basis_ops.hpp"
#include "gribov/deficiency.hpp"
#include "gribov/inverse_op.hpp"
#include "gribov/jacobi.hpp"
#include "gribov/ortho_poly.hpp"

#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

using namespace gribov;

namespace {

std::mt19937_64 rng(20240917);

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

CoefficientVector random_vector(Basis basis, std::size_t start, std::size_t len) {
    std::vector<cplx> v(len);
    for (auto& c : v) c = cplx(uniform(-1, 1), uniform(-1, 1));
    return CoefficientVector(basis, start, v);
}

cplx inner(const CoefficientVector& a, const CoefficientVector& b) {
    cplx s = 0.0;
    for (std::size_t k = std::min(a.start(), b.start()); k < std::max(a.end(), b.end()); ++k)
        s += a[k] * std::conj(b[k]);
    return s;
}

} // namespace

TEST_CASE("A* is the adjoint of A") {
    for (int t = 0; t < 50; ++t) {
        auto u = random_vector(Basis::e, std::size_t(uniform(0, 10)), 20);
        auto v = random_vector(Basis::e, std::size_t(uniform(0, 10)), 20);
        CHECK(std::abs(inner(ladder_down(u), v) - inner(u, ladder_up(v))) <= 1e-12);
    }
}

TEST_CASE("H^{p,m} is symmetric on random vectors") {
    for (int t = 0; t < 50; ++t) {
        int p = 1 + int(uniform(0, 3)), m = 1 + int(uniform(0, 3));
        OperatorParams par{0.0, 1.0, p, m};
        auto u = random_vector(Basis::e, std::size_t(p), 25);
        auto v = random_vector(Basis::e, std::size_t(p), 25);
        cplx a = inner(heun_pm_apply(par, u), v), b = inner(u, heun_pm_apply(par, v));
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("the Gribov operator splits into mu N plus i lambda times a real symmetric part") {
    for (int t = 0; t < 30; ++t) {
        double mu = uniform(0, 3), lam = uniform(0.1, 3);
        auto u = random_vector(Basis::e, 1, 30);
        auto whole = gribov_apply({mu, lam}, u);
        auto diag = gribov_apply({mu, 0.0}, u);
        auto off = gribov_apply({0.0, lam}, u);
        CHECK(max_abs_difference(whole, diag + off) <= 1e-12 * 1e4);
        // i lambda S with S real symmetric: <off u, v> = -<u, off v>
        auto v = random_vector(Basis::e, 1, 30);
        CHECK(std::abs(inner(off, v) + inner(u, gribov_apply({0.0, lam}, v))) <= 1e-9);
    }
}

TEST_CASE("truncated spectra: trace identity and homogeneity at random parameters") {
    for (int t = 0; t < 12; ++t) {
        double mu = uniform(1.0, 4.0), lam = uniform(0.3, 1.0);
        std::size_t n = 2 + std::size_t(uniform(0, 30));
        auto r = truncated_spectrum({mu, lam, n});
        cplx sum = std::accumulate(r.eigenvalues.begin(), r.eigenvalues.end(), cplx(0.0));
        CHECK(std::abs(sum - mu * n * (n + 1) / 2.0) <= 1e-9 * mu * n * n);
        double s = uniform(0.5, 4.0);
        auto q = truncated_spectrum({mu * s, lam * s, n});
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(q.eigenvalues[i] - s * r.eigenvalues[i]) <= 1e-9 * s * std::abs(r.eigenvalues[i]));
    }
}

TEST_CASE("Wronskian holds at random complex points") {
    for (int t = 0; t < 200; ++t) {
        cplx x(uniform(-3, 3), uniform(-3, 3));
        std::size_t n = 1 + std::size_t(uniform(0, 60));
        CHECK(wronskian_residual(n, x) <= 1e-9);
    }
}

TEST_CASE("phi satisfies phi' = u phi - 1") {
    for (int t = 0; t < 100; ++t) {
        double u = uniform(0.01, 8.0), h = 1e-5;
        double d = (phi_tail(u + h) - phi_tail(u - h)) / (2 * h);
        CHECK(std::abs(d - (u * phi_tail(u) - 1.0)) <= 1e-6);
    }
}

TEST_CASE("eigenvector solves the recurrence at random xi") {
    for (int t = 0; t < 20; ++t) {
        cplx xi(uniform(-4, 4), uniform(-4, 4));
        auto s = eigenvector_at(xi, 200);
        for (std::size_t n = 2; n < 199; ++n) {
            cplx lhs = gribov_b(n - 1) * s.values[n - 2] + gribov_b(n) * s.values[n];
            CHECK(std::abs(lhs - xi * s.values[n - 1]) <= 1e-9 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("quadrature and recurrence agree on random real u-combinations") {
    std::vector<double> ys{0.0, 0.4, 1.1, 2.3, 3.0};
    for (int t = 0; t < 5; ++t) {
        std::vector<cplx> c(6);
        for (auto& x : c) x = uniform(-1, 1);
        CoefficientVector v(Basis::u, 2, c);
        auto q = apply_quadrature({0.0, 1.0}, [&](double s) { return evaluate_u_series(v, s).real(); }, ys);
        auto r = apply_recurrence(1.0, v, ys);
        for (std::size_t i = 0; i < ys.size(); ++i) CHECK(std::abs(q[i] - r.samples[i].real()) <= 1e-7);
    }
}

TEST_CASE("kernel is positive and depends on y only through min(y, s)") {
    for (int t = 0; t < 300; ++t) {
        KernelSpec k{uniform(0, 3), uniform(0.2, 3)};
        double y = uniform(0.01, 8), s = uniform(0.01, 8);
        CHECK(kernel_eval(k, y, s) > 0.0);
        if (y > s) CHECK(kernel_eval(k, y, s) == kernel_eval(k, s + uniform(0, 3), s));
    }
}
