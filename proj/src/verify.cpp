#include "gribov/verify.hpp"

#include "gribov/basis_ops.hpp"
#include "gribov/cli.hpp"
#include "gribov/deficiency.hpp"
#include "gribov/errors.hpp"
#include "gribov/inverse_op.hpp"
#include "gribov/jacobi.hpp"
#include "gribov/numeric.hpp"
#include "gribov/ortho_poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace gribov {

namespace {

using Probe = std::function<InvariantCheck()>;

InvariantCheck at_most(std::string module, std::string name, double measured, double threshold,
                       std::string detail = {}) {
    return {std::move(module), std::move(name), measured <= threshold, measured, threshold,
            std::move(detail)};
}

InvariantCheck holds(std::string module, std::string name, bool ok, std::string detail = {}) {
    return {std::move(module), std::move(name), ok, ok ? 0.0 : 1.0, 0.0, std::move(detail)};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// basis_ops

InvariantCheck commutation() {
    double worst = 0.0;
    for (std::size_t n = 0; n <= 50; ++n) {
        auto e = CoefficientVector::unit(Basis::e, n);
        auto c = ladder_down(ladder_up(e)) + cplx(-1.0) * ladder_up(ladder_down(e));
        worst = std::max(worst, max_abs_difference(c, e));
    }
    return at_most("basis_ops", "canonical commutator [A, A*] = I", worst, 1e-12);
}

InvariantCheck gribov_vs_heun() {
    double worst = 0.0;
    for (std::size_t n = 1; n <= 50; ++n) {
        auto e = CoefficientVector::unit(Basis::e, n);
        auto g = cplx(0.0, -1.0) * gribov_apply({0.0, 1.0, 1, 1}, e);
        auto h = heun_pm_apply({0.0, 1.0, 1, 1}, e);
        worst = std::max(worst, max_abs_difference(g, h));
    }
    return at_most("basis_ops", "gribov_apply / i equals H^{1,1} on B_0", worst, 1e-12);
}

InvariantCheck heun_symmetry() {
    double worst = 0.0;
    for (int p : {1, 2}) {
        for (int m : {1, 2, 3}) {
            OperatorParams par{0.0, 1.0, p, m};
            std::size_t N = 40;
            for (std::size_t j = std::size_t(p); j <= N; ++j) {
                auto hj = heun_pm_apply(par, CoefficientVector::unit(Basis::e, j));
                for (std::size_t k = std::size_t(p); k <= N; ++k) {
                    auto hk = heun_pm_apply(par, CoefficientVector::unit(Basis::e, k));
                    cplx a = hj[k], b = hk[j];
                    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
                }
            }
        }
    }
    return at_most("basis_ops", "H^{p,m} matrix symmetric on indices p..N", worst, 1e-12);
}

InvariantCheck linearity() {
    std::vector<cplx> a(12), b(12);
    for (std::size_t i = 0; i < 12; ++i) {
        a[i] = cplx(std::sin(1.0 + i), std::cos(2.0 * i));
        b[i] = cplx(std::cos(0.5 * i), -std::sin(3.0 + i));
    }
    CoefficientVector u(Basis::e, 1, a), v(Basis::e, 3, b);
    cplx al(0.7, -1.3), be(-2.1, 0.4);
    OperatorParams par{1.5, 0.8, 2, 3};
    double worst = 0.0;
    std::vector<std::function<CoefficientVector(const CoefficientVector&)>> ops = {
        [](const CoefficientVector& x) { return ladder_down(x); },
        [](const CoefficientVector& x) { return ladder_up(x); },
        [&](const CoefficientVector& x) { return gribov_apply(par, x); },
        [&](const CoefficientVector& x) { return heun_pm_apply(par, x); },
        [&](const CoefficientVector& x) { return shift_apply(par, x); }};
    for (auto& op : ops) {
        auto lhs = op(al * u + be * v);
        auto rhs = al * op(u) + be * op(v);
        double scale = 1.0;
        for (const cplx& c : lhs.entries()) scale = std::max(scale, std::abs(c));
        worst = std::max(worst, max_abs_difference(lhs, rhs) / scale);
    }
    return at_most("basis_ops", "operators are linear", worst, 1e-13);
}

// jacobi

InvariantCheck trace_det() {
    double worst = 0.0;
    for (auto [mu, lam] : {std::pair{1.0, 1.0}, {3.0, 1.0}, {0.5, 1.0}, {2.0, 3.0}})
        for (std::size_t n : {2, 5, 16, 32, 64}) {
            ScalarJacobiSpec s{mu, lam, n};
            SpectrumResult r = truncated_spectrum(s);
            cplx sum = std::accumulate(r.eigenvalues.begin(), r.eigenvalues.end(), cplx(0.0));
            double trace = mu * double(n) * double(n + 1) / 2.0;
            worst = std::max(worst, rel(sum, trace));
            // det(T) = p_n(0); prod of roots in log form to dodge overflow
            CharPolyValue p0 = charpoly_eval(s, 0.0);
            cplx log_prod = 0.0;
            for (const cplx& z : r.eigenvalues) log_prod += std::log(z);
            cplx ratio = std::exp(log_prod - std::log(p0.value) - p0.log_scale);
            worst = std::max(worst, std::abs(ratio - 1.0));
        }
    return at_most("jacobi", "root sum = trace and root product = det, n <= 64", worst, 1e-8);
}

InvariantCheck residual_bound() {
    double worst = 0.0;
    for (std::size_t n : {8, 32, 64, 128}) {
        SpectrumResult r = truncated_spectrum({1.0, 1.0, n});
        for (double x : r.residuals) worst = std::max(worst, x);
    }
    return at_most("jacobi", "every reported root has scaled residual <= tol", worst, kDefaultSpectrumTol);
}

InvariantCheck homogeneity() {
    double worst = 0.0;
    for (double lam : {2.0, 3.0, 0.5})
        for (std::size_t n : {4, 16, 32}) {
            double mu = 1.5 * lam;
            auto a = truncated_spectrum({mu, lam, n});
            auto b = truncated_spectrum({mu / lam, 1.0, n});
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(a.eigenvalues[i] - lam * b.eigenvalues[i]) /
                                            std::abs(lam * b.eigenvalues[i]));
        }
    return at_most("jacobi", "spectrum(mu, lambda) = lambda spectrum(mu/lambda, 1)", worst, 1e-10);
}

InvariantCheck conjugate_pairs() {
    double worst = 0.0;
    for (auto [mu, lam] : {std::pair{1.0, 1.0}, {0.5, 1.0}, {0.1, 1.0}})
        for (std::size_t n : {2, 9, 32, 64}) {
            auto r = truncated_spectrum({mu, lam, n});
            for (const cplx& z : r.eigenvalues) {
                double best = std::numeric_limits<double>::infinity();
                for (const cplx& w : r.eigenvalues) best = std::min(best, std::abs(w - std::conj(z)));
                worst = std::max(worst, best / std::max(1.0, std::abs(z)));
            }
        }
    return at_most("jacobi", "non-real roots come in conjugate pairs, n <= 64", worst, 1e-10);
}

InvariantCheck log_concave() {
    std::size_t bad = 0;
    for (std::uint64_t k = 1; k <= 10000; ++k)
        if (!gribov_b_log_concave(k)) ++bad;
    return at_most("jacobi", "b_{k-1} b_{k+1} <= b_k^2, k <= 10^4 (integer arithmetic)", double(bad), 0.0);
}

InvariantCheck norm_onset() {
    std::string detail;
    bool ok = true;
    for (auto [p, m] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 3}}) {
        BlockNormOnset o = block_norm_onset({p, m, 200});
        detail += "(" + std::to_string(p) + "," + std::to_string(m) + "): exact ";
        detail += o.exact_from ? std::to_string(*o.exact_from) : std::string("none");
        detail += ", simplified ";
        detail += o.simplified_from ? std::to_string(*o.simplified_from) : std::string("none");
        detail += "; ";
        ok = ok && o.simplified_from.has_value();
        if (m == 1) ok = ok && o.exact_from.has_value();
    }
    return holds("jacobi", "block norm inequality onset: exact norms for m = 1, simplified form for all m", ok,
                 detail);
}

// ortho_poly

InvariantCheck parity() {
    double worst = 0.0;
    for (std::size_t n = 1; n <= 60; ++n)
        for (double x : {0.5, 1.0, 2.0, 5.0}) {
            cplx a = first_second_eval(n, x).P, b = first_second_eval(n, -x).P;
            double sign = (n % 2 == 1) ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(b - sign * a) / std::max(1.0, std::abs(a)));
        }
    return at_most("ortho_poly", "P_n(-x) = (-1)^{n-1} P_n(x), n <= 60", worst, 1e-10);
}

std::vector<cplx> complex_grid() {
    std::vector<cplx> g;
    for (int i = 0; i < 20; ++i) {
        double r = 0.25 + 0.25 * (i % 5);
        g.push_back(std::polar(r * (1 + i / 5), 0.3 + 2.0 * M_PI * i / 20.0));
    }
    return g;
}

InvariantCheck wronskian() {
    double worst = 0.0;
    for (const cplx& x : complex_grid())
        for (std::size_t n = 1; n <= 60; ++n) worst = std::max(worst, wronskian_residual(n, x));
    return at_most("ortho_poly", "b_n (P_n Q_{n+1} - P_{n+1} Q_n) = 1 on a 20-point grid, n <= 60", worst, 1e-9);
}

InvariantCheck recurrence() {
    double worst = 0.0;
    for (double x : {0.5, 1.0, 2.0, 5.0})
        for (std::size_t n = 2; n <= 60; ++n) worst = std::max(worst, recurrence_residual(n, x));
    return at_most("ortho_poly", "first-kind polynomials solve the canonical recurrence", worst, 1e-10);
}

InvariantCheck phi_shape() {
    bool ok = true;
    double prev = phi_tail(0.0);
    for (int i = 1; i <= 400; ++i) {
        double u = 0.05 * i, f = phi_tail(u);
        ok = ok && f > 0.0 && f < prev;
        if (u >= 1.0) ok = ok && u * f < 1.0 && 1.0 < (u + 1.0 / u) * f;
        prev = f;
    }
    return holds("ortho_poly", "phi decreasing, positive, u phi < 1 < (u + 1/u) phi", ok);
}

InvariantCheck integer_families() {
    bool ok = true;
    for (int n = 0; n <= 30; ++n) {
        KoubaPair k = kouba_polys(n);
        for (const BigInt& c : k.P.coeffs) ok = ok && c >= 0;
        PlasmaResult p = plasma_polys(std::min(n, 20));
        const auto& pc = p.P.coeffs;
        for (std::size_t d = 0; d < pc.size(); ++d) {
            ok = ok && pc[d] >= 0;
            if ((int(d) - p.P.n) % 2 != 0) ok = ok && pc[d] == 0;
        }
    }
    return holds("ortho_poly", "Kouba P_n and plasma P_n have nonnegative integer coefficients, plasma parity", ok);
}

// deficiency

InvariantCheck zeta_alpha() {
    double worst = 0.0;
    for (double a : {0.5, 1.5, 2.0, 3.0}) {
        auto c = classify_series([a](std::size_t n) { return std::pow(double(n), -a); }, 1000, 10000);
        worst = std::max(worst, std::abs(c.alpha_estimate - a));
    }
    return at_most("deficiency", "Raabe fit recovers alpha of 1/n^alpha", worst, 0.05);
}

InvariantCheck seed_linearity() {
    double worst = 0.0;
    for (cplx xi : {cplx(0.0), cplx(1.0), cplx(2.0, 3.0), cplx(0.0, -5.0)})
        for (cplx c : {cplx(2.0), cplx(-0.5), cplx(0.0, 1.0)}) {
            auto a = eigenvector_at(xi, 2000, c), b = eigenvector_at(xi, 2000);
            for (std::size_t i = 0; i < a.values.size(); ++i)
                worst = std::max(worst, std::abs(a.values[i] - c * b.values[i]));
        }
    return at_most("deficiency", "eigenvector is linear in the seed (exact)", worst, 0.0);
}

InvariantCheck m1_reduces() {
    auto s = scalar_zero_solutions(1000);
    auto k = km_block_test(1, 1, 500);
    bool ok = s.report.verdict == Determinacy::completely_indeterminate &&
              k.report.verdict == Determinacy::completely_indeterminate && s.report.n_plus == 1 &&
              k.report.n_plus == 1 && s.report.n_minus == 1 && k.report.n_minus == 1;
    double worst = 0.0;
    for (std::size_t k2 = 1; k2 <= 200; ++k2)
        worst = std::max(worst, std::abs(std::exp(block_log_entry({1, 1, 200}, k2, 0)) - gribov_b(k2)) / gribov_b(k2));
    return holds("deficiency", "m = 1 block test agrees with the scalar case", ok && worst <= 1e-12);
}

InvariantCheck inverse_b() {
    auto c = classify_series([](std::size_t n) { return 1.0 / gribov_b(n); }, 1000, 10000);
    CompensatedSum s;
    for (std::size_t n = 1; n <= 100000; ++n) s.add(1.0 / gribov_b(n));
    bool ok = c.verdict == SeriesVerdict::convergent && std::abs(c.alpha_estimate - 1.5) <= 0.05 &&
              s.value() < 2.7;
    return holds("deficiency", "sum 1/b_n converges (alpha 3/2) and stays below 2.7",
                 ok, "alpha " + std::to_string(c.alpha_estimate) + ", partial sum " + std::to_string(s.value()));
}

InvariantCheck decay_bound() {
    bool ok = true;
    for (cplx xi : {cplx(0.0), cplx(1.0), cplx(2.0, 3.0), cplx(0.0, -5.0)}) {
        auto t = eigenvector_at(xi, 5000);
        ok = ok && std::isfinite(t.bound_constant) && t.bound_index >= 10 && t.bound_index < 5000 / 2;
    }
    return holds("deficiency", "sup |u_n| sqrt(n) ln n is attained well inside [10, 5000]", ok);
}

// inverse_op

InvariantCheck right_inverse() {
    return at_most("inverse_op", "H K u_n = u_n for n <= 200", right_inverse_residual(1.0, 200), 1e-10);
}

InvariantCheck representation() {
    std::vector<double> ys;
    for (int i = 0; i <= 30; ++i) ys.push_back(0.1 * i);
    KernelSpec spec{0.0, 1.0, 12.0, 400};
    double worst = 0.0;
    for (std::size_t n = 2; n <= 10; ++n) {
        auto q = apply_quadrature(spec, [n](double s) { return u_sample(n, s); }, ys);
        auto r = apply_recurrence(1.0, CoefficientVector::unit(Basis::u, n), ys);
        for (std::size_t i = 0; i < ys.size(); ++i) worst = std::max(worst, std::abs(q[i] - r.samples[i].real()));
    }
    return at_most("inverse_op", "quadrature and recurrence agree on u_2..u_10, y in [0, 3]", worst, 1e-7);
}

InvariantCheck ledger_orthogonality() {
    InverseLedger L = ledger_build(1.0, 200);
    bool ok = true;
    for (std::size_t n = 3; n <= 200; ++n) {
        auto P = L.polynomial_part(n - 2);
        ok = ok && P.end() <= n - 1 && P[n] == 0.0;
    }
    return holds("inverse_op", "P_{n-2} has no u_n component", ok);
}

InvariantCheck pn_norm() {
    InverseLedger L = ledger_build(1.0, 200);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 200; ++n)
        worst = std::max(worst, std::abs(L.polynomial_part(n).norm_squared() - L.p[n]) / L.p[n]);
    return at_most("inverse_op", "||P_n||^2 from coefficients equals p_n", worst, 1e-12);
}

InvariantCheck kernel_positive() {
    bool ok = true;
    for (double mu : {0.0, 1.0})
        for (int i = 1; i <= 100; ++i)
            for (int j = 1; j <= 100; ++j) ok = ok && kernel_eval({mu, 1.0, 12.0, 400}, 0.1 * i, 0.1 * j) > 0.0;
    return holds("inverse_op", "kernel positive on a 100 x 100 grid", ok);
}

InvariantCheck v1_square_summable() {
    auto v = v1_series(1.0, 2000);
    auto terms = [&](std::size_t n) { return std::norm(v[2 * n + 1]) + std::norm(v[2 * n + 2]); };
    auto c = classify_series(terms, 200, 1998);
    return holds("inverse_op", "sum gamma_n^2 + delta_n^2 converges", c.verdict == SeriesVerdict::convergent,
                 "alpha " + std::to_string(c.alpha_estimate));
}

// cli

InvariantCheck determinism() {
    auto once = [](std::vector<const char*> args) {
        std::ostringstream out, err;
        cli_main(int(args.size()), args.data(), out, err);
        return out.str();
    };
    bool ok = true;
    for (auto args : {std::vector<const char*>{"gribov", "eigvec", "--xi-re", "2", "--xi-im", "3", "--n", "300"},
                      std::vector<const char*>{"gribov", "spectrum", "--mu", "1", "--lambda", "1", "--n", "40"},
                      std::vector<const char*>{"gribov", "sigma0", "--mu", "1", "--method", "nystrom", "--nodes", "128"}}) {
        std::string a = once(args), b = once(args);
        ok = ok && !a.empty() && a == b;
    }
    return holds("cli", "identical invocations give byte-identical output", ok);
}

} // namespace

std::vector<InvariantCheck> run_invariant_suite() {
    std::vector<std::pair<const char*, Probe>> probes = {
        {"basis_ops", commutation},       {"basis_ops", gribov_vs_heun},
        {"basis_ops", heun_symmetry},     {"basis_ops", linearity},
        {"jacobi", trace_det},            {"jacobi", residual_bound},
        {"jacobi", homogeneity},          {"jacobi", conjugate_pairs},
        {"jacobi", log_concave},          {"jacobi", norm_onset},
        {"ortho_poly", parity},           {"ortho_poly", wronskian},
        {"ortho_poly", recurrence},       {"ortho_poly", phi_shape},
        {"ortho_poly", integer_families}, {"deficiency", zeta_alpha},
        {"deficiency", seed_linearity},   {"deficiency", m1_reduces},
        {"deficiency", inverse_b},        {"deficiency", decay_bound},
        {"inverse_op", right_inverse},    {"inverse_op", representation},
        {"inverse_op", ledger_orthogonality}, {"inverse_op", pn_norm},
        {"inverse_op", kernel_positive},  {"inverse_op", v1_square_summable},
        {"cli", determinism}};
    std::vector<InvariantCheck> out;
    for (auto& [module, probe] : probes) {
        try {
            out.push_back(probe());
        } catch (const Error& e) {
            out.push_back({module, "error", false, 1.0, 0.0, e.code() + ": " + e.what()});
        }
    }
    return out;
}

} // namespace gribov
