#include "gribov/errors.hpp"
#include "gribov/inverse_op.hpp"
#include "gribov/jacobi.hpp"
#include "gribov/ortho_poly.hpp"

#include "doctest.h"

#include <cmath>

using namespace gribov;

namespace {

// Composite Simpson on [a, b], for oracles only.
template <class F>
double simpson(F f, double a, double b, int n = 4000) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

} // namespace

TEST_CASE("kernel values") {
    KernelSpec k0{0.0, 1.0};
    CHECK(kernel_eval(k0, 0.0, 2.0) == 0.0);
    double inner = 0.0, term = 1.0;
    for (int n = 0; n < 30; ++n) {
        inner += term / (2 * n + 1);
        term /= 2.0 * (n + 1);
    }
    CHECK(kernel_eval(k0, 1.0, 2.0) == doctest::Approx(0.5 * std::exp(-2.0) * inner).epsilon(1e-12));
    CHECK(kernel_eval(k0, 3.0, 1.5) == kernel_eval(k0, 5.0, 1.5));

    KernelSpec k1{1.0, 2.0};
    double c = 0.5, y = 1.3, s = 2.1;
    double oracle = std::exp(-s * s / 2 - c * s) / (2.0 * s) *
                    simpson([&](double u) { return std::exp(u * u / 2 + c * u); }, 0.0, y);
    CHECK(kernel_eval(k1, y, s) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("scaled incomplete integral against quadrature") {
    for (double c : {0.0, 0.5, 3.0})
        for (double x : {0.1, 1.0, 4.0, 9.0}) {
            double oracle = simpson([&](double u) { return std::exp(u * u / 2 + c * u - x * x / 2 - c * x); }, 0.0, x);
            CHECK(scaled_incomplete_integral(c, x) == doctest::Approx(oracle).epsilon(1e-9));
        }
    // large x: ~ 1/(x + c)
    CHECK(scaled_incomplete_integral(1.0, 200.0) * 201.0 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("kernel spec validation") {
    CHECK_THROWS_AS(validate(KernelSpec{0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(validate(KernelSpec{-1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(KernelSpec{0.0, 1.0, 3.0}), DomainError);
}

TEST_CASE("quadrature application") {
    std::vector<double> ys{0.5, 1.0, 2.0};
    auto zero = apply_quadrature({0.0, 1.0}, [](double) { return 0.0; }, ys);
    for (double v : zero) CHECK(v == 0.0);
    auto u2 = apply_quadrature({0.0, 1.0}, [](double s) { return u_sample(2, s); }, std::vector<double>{1.0});
    CHECK(std::abs(u2[0] - 1.0 / std::sqrt(2.0)) <= 1e-8);

    std::vector<double> grid;
    for (int i = 0; i < 12; ++i) grid.push_back(0.25 * i);
    auto q = apply_quadrature({0.0, 1.0}, [](double s) { return u_sample(3, s); }, grid);
    auto r = apply_recurrence(1.0, CoefficientVector::unit(Basis::u, 3), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(q[i] - r.samples[i].real()) <= 1e-7);
}

TEST_CASE("recurrence application") {
    double lam = 2.0;
    auto r2 = apply_recurrence(lam, CoefficientVector::unit(Basis::u, 2), {});
    CHECK(std::abs(r2.polynomial[1] - 1.0 / (lam * std::sqrt(2.0))) <= 1e-15);
    CHECK(r2.v1_coefficient == cplx(0.0));

    auto r3 = apply_recurrence(lam, CoefficientVector::unit(Basis::u, 3), {});
    CHECK(std::abs(r3.polynomial[2] - 1.0 / (2.0 * lam * std::sqrt(3.0))) <= 1e-15);
    CHECK(std::abs(r3.v1_coefficient - 1.0 / std::sqrt(6.0)) <= 1e-15);

    auto r5 = apply_recurrence(1.0, CoefficientVector::unit(Basis::u, 5), {});
    CHECK(std::abs(r5.v1_coefficient - (1.0 / std::sqrt(6.0)) * (3.0 / std::sqrt(20.0))) <= 1e-15);
    CHECK_THROWS_AS(apply_recurrence(1.0, CoefficientVector::unit(Basis::e, 2), {}), DomainError);
}

TEST_CASE("v1") {
    CHECK(v1_eval(1.0, 0.0) == 0.0);
    double h = 1e-4;
    CHECK(std::abs((v1_eval(1.0, 1.0 + h) - v1_eval(1.0, 1.0 - h)) / (2 * h) - phi_tail(1.0)) <= 1e-6);
    CHECK(v1_eval(2.0, 1.5) == doctest::Approx(v1_eval(1.0, 1.5) / 2.0).epsilon(1e-14));

    auto v = v1_series(1.0, 2000);
    CHECK(std::abs(v[1] - std::sqrt(M_PI / 2.0)) <= 1e-14);
    CHECK(std::abs(v[2] + 1.0 / std::sqrt(2.0)) <= 1e-14);
    CHECK(std::abs(evaluate_u_series(v, 1.0).real() - v1_eval(1.0, 1.0)) <= 1e-8);
    auto v3 = v1_series(3.0, 50);
    CHECK(std::abs(v3[1] - std::sqrt(M_PI / 2.0) / 3.0) <= 1e-14);
    CHECK_THROWS_AS(v1_series(1.0, 2001), DomainError);
}

TEST_CASE("ledger") {
    auto L = ledger_build(1.0, 50);
    auto P1 = L.polynomial_part(1);
    CHECK(std::abs(P1[1] - 1.0 / std::sqrt(2.0)) <= 1e-15);
    CHECK(L.p[1] == doctest::Approx(0.5));
    CHECK(L.alpha[4] == 0.0);
    CHECK(L.alpha[5] == doctest::Approx(L.B[2] * L.B[4]));
    CHECK(L.B[2] == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK_THROWS_AS(L.polynomial_part(51), DomainError);
}

TEST_CASE("right-inverse residual") {
    CHECK(right_inverse_residual(1.0, 2) <= 1e-15);
    CHECK(right_inverse_residual(1.0, 200) <= 1e-10);
    CHECK(std::abs(right_inverse_residual(0.1, 200) - right_inverse_residual(10.0, 200)) <= 1e-12);
}

TEST_CASE("finite-rank error") {
    auto full = finite_rank_error(1.0, 400, 400);
    CHECK(full.empirical == 0.0);
    auto a = finite_rank_error(1.0, 50, 1000);
    CHECK(a.empirical <= a.bound);
    auto b = finite_rank_error(1.0, 100, 1000);
    auto c = finite_rank_error(1.0, 200, 1000);
    CHECK(b.bound < a.bound);
    CHECK(c.bound / b.bound == doctest::Approx(std::pow(2.0, -0.25)).epsilon(0.03));
}

TEST_CASE("Nystrom Perron root") {
    auto r = nystrom_perron({1.0, 1.0, 12.0, 400});
    CHECK(r.min_kernel_entry >= 0.0);
    std::vector<double> mus{1.0};
    double matrix = sigma0_curve(1.0, mus, 1024)[0].sigma0.real();
    CHECK(std::abs(r.sigma0 - matrix) <= 1e-3 * matrix);
    auto s = nystrom_perron({3.0, 2.0, 12.0, 400});
    auto t = nystrom_perron({1.5, 1.0, 12.0, 400});
    CHECK(std::abs(s.sigma0 - 2.0 * t.sigma0) <= 1e-6 * s.sigma0);
    CHECK_THROWS_AS(nystrom_perron({0.0, 1.0}), DomainError);
}

TEST_CASE("Hilbert-Schmidt norm") {
    double a = hs_norm_estimate({1.0, 1.0, 10.0, 400});
    double b = hs_norm_estimate({1.0, 1.0, 10.0, 800});
    CHECK(std::abs(a - b) <= 1e-4 * a);
    CHECK(a == doctest::Approx(0.797044).epsilon(1e-5));  // independent dblquad value
    double half = hs_norm_estimate({0.5, 1.0, 12.0, 400});
    double quarter = hs_norm_estimate({0.25, 1.0, 12.0, 400});
    CHECK(a < half);
    CHECK(half < quarter);
    CHECK(hs_norm_estimate({2.0, 2.0, 12.0, 400}) == doctest::Approx(a / 2.0).epsilon(1e-8));
}

TEST_CASE("Stirling sandwich") {
    auto s = stirling_sandwich_check(10000);
    CHECK(s.min_upper_margin >= 0.0);
    CHECK(s.upper_margin_100 > 0.0);
    CHECK(s.upper_margin_100 < 1.0);
    CHECK(s.lower_margin_100 > 0.0);
    CHECK(s.lower_margin_100 < 1.0);
    CHECK(s.b_scaled_min >= 0.5);
    CHECK(s.b_scaled_max <= 1.5);
}
