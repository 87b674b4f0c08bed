#include "gribov/inverse_op.hpp"

#include "gribov/errors.hpp"
#include "gribov/numeric.hpp"
#include "gribov/ortho_poly.hpp"
#include "gribov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace gribov {

namespace {

constexpr double kLogInvEps16 = 36.841361487904734;  // ln 1e16
constexpr std::size_t kNystromPanels = 4;
constexpr std::size_t kPowerIterationCap = 100000;

double phi_exp(double c, double x) { return 0.5 * x * x + c * x; }

double kernel_c(double mu, double lambda) {
    if (!std::isfinite(mu) || !std::isfinite(lambda)) throw DomainError("mu and lambda must be finite");
    if (!(lambda > 0.0)) throw DomainError("kernel needs lambda > 0");
    if (mu < 0.0) throw DomainError("kernel needs mu >= 0");
    return mu / lambda;
}

std::size_t nystrom_order(std::size_t node_count) {
    return (node_count + kNystromPanels - 1) / kNystromPanels;
}

// int_0^y E(s) e^{phi(s) - phi(y)} / s ds; the part below y - W is below e^{-25} relative.
double lower_row_integral(double c, double y, bool squared) {
    if (y <= 0.0) return 0.0;
    double a = y + c;
    double budget = squared ? 50.0 : 25.0;
    double scale = squared ? 2.0 : 1.0;
    // exponent scale*(phi(s) - phi(y)) = -scale * t (a - t/2) with t = y - s
    double w = y;
    if (a * a > 2.0 * budget / scale) w = std::min(y, a - std::sqrt(a * a - 2.0 * budget / scale));
    // integrate in t so the exponent carries no cancellation at large y
    auto f = [&](double t) {
        double s = y - t;
        if (s <= 0.0) return 1.0;
        double e = scaled_incomplete_integral(c, s) / s;
        double g = std::exp(-scale * t * (a - 0.5 * t));
        return squared ? e * e * g : e * g;
    };
    return adaptive_gauss_legendre(f, 0.0, w, 1e-13);
}

} // namespace

void validate(const KernelSpec& spec) {
    double c = kernel_c(spec.mu, spec.lambda);
    if (!(spec.L > 0.0) || !std::isfinite(spec.L)) throw DomainError("L must be positive");
    if (phi_exp(c, spec.L) < kLogInvEps16)
        throw DomainError("L too small: e^{-L^2/2 - cL} must fall below 1e-16");
    if (spec.node_count == 0) throw DomainError("node_count must be positive");
}

double scaled_incomplete_integral(double c, double x) {
    if (x < 0.0 || !std::isfinite(x)) throw DomainError("x must be finite and >= 0");
    if (x == 0.0) return 0.0;
    double a = x + c;
    if (a >= 25.0 && x * (0.5 * x + c) >= 45.0) {
        // int_0^inf e^{-a t + t^2/2} dt ~ sum (2k-1)!! / a^{2k+1}
        double term = 1.0 / a, sum = term;
        double inv_a2 = 1.0 / (a * a);
        for (int k = 1; k < 200; ++k) {
            double next = term * double(2 * k - 1) * inv_a2;
            if (next >= term) break;
            term = next;
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return sum;
    }
    // e^{phi(u)} = sum a_k u^k, (k+1) a_{k+1} = c a_k + a_{k-1}; s_k = a_k x^k.
    CompensatedSum sum;
    double s_prev = 0.0, s = 1.0;
    sum.add(s);
    double k_min = x * (x + c) + 2.0;
    double last = 1.0;
    for (std::size_t k = 0; k < 100000; ++k) {
        double next = (c * x * s + x * x * s_prev) / double(k + 1);
        s_prev = s;
        s = next;
        double term = s / double(k + 2);
        sum.add(term);
        // odd terms vanish when c = 0, so test two in a row
        if (double(k) > k_min && term + last < 1e-18 * sum.value()) break;
        last = term;
    }
    return x * sum.value() * std::exp(-phi_exp(c, x));
}

double kernel_eval(const KernelSpec& spec, double y, double s) {
    double c = kernel_c(spec.mu, spec.lambda);
    if (y < 0.0 || s < 0.0) throw DomainError("kernel arguments must be >= 0");
    if (s == 0.0 || y == 0.0) return 0.0;
    double m = std::min(y, s);
    return scaled_incomplete_integral(c, m) * std::exp(phi_exp(c, m) - phi_exp(c, s)) /
           (spec.lambda * s);
}

double u_sample(std::size_t k, double y) {
    if (y == 0.0) return k == 0 ? 1.0 : 0.0;
    double mag = std::exp(double(k) * std::log(std::abs(y)) - 0.5 * log_factorial(long(k)));
    return (y < 0.0 && k % 2 == 1) ? -mag : mag;
}

cplx evaluate_u_series(const CoefficientVector& v, double y) {
    CompensatedSum re, im;
    for (std::size_t k = v.start(); k < v.end(); ++k) {
        cplx c = v[k];
        if (c == 0.0) continue;
        double u = u_sample(k, y);
        re.add(c.real() * u);
        im.add(c.imag() * u);
    }
    return {re.value(), im.value()};
}

std::vector<double> apply_quadrature(const KernelSpec& spec, const std::function<double(double)>& psi,
                                     std::span<const double> y_grid) {
    validate(spec);
    double c = spec.mu / spec.lambda;
    for (double y : y_grid)
        if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("y must be finite and >= 0");
    std::vector<double> out(y_grid.size(), 0.0);
    parallel_for(y_grid.size(), [&](std::size_t i) {
        double y = y_grid[i];
        if (y == 0.0) return;
        auto outer = composite_gauss_legendre(0.0, y, std::max<std::size_t>(2, std::size_t(std::ceil(2.0 * y))), 20);
        CompensatedSum total;
        for (std::size_t a = 0; a < outer.nodes.size(); ++a) {
            double u = outer.nodes[a];
            // e^{phi(u) - phi(s)} falls below e^{-45} past u + w
            double b = u + c;
            double w = std::min(spec.L, -b + std::sqrt(b * b + 90.0));
            auto inner = composite_gauss_legendre(u, u + w, 8, 20);
            CompensatedSum in;
            for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
                double s = inner.nodes[j];
                double g = std::exp(-(s - u) * (0.5 * (s + u) + c));
                in.add(inner.weights[j] * g * psi(s) / s);
            }
            total.add(outer.weights[a] * in.value());
        }
        out[i] = total.value() / spec.lambda;
    });
    return out;
}

InverseLedger ledger_build(double lambda, std::size_t N) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("lambda must be finite and nonzero");
    if (N < 1) throw DomainError("ledger needs N >= 1");
    InverseLedger L;
    L.lambda = lambda;
    L.N = N;
    L.A.assign(N + 1, 0.0);
    L.B.assign(N + 1, 0.0);
    L.alpha.assign(N + 1, 0.0);
    L.p.assign(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        double dn = double(n);
        L.A[n] = 1.0 / (lambda * dn * std::sqrt(dn + 1.0));
        L.B[n] = (dn - 1.0) / std::sqrt(dn * (dn + 1.0));
    }
    // K u_{n+1} = B_n K u_{n-1} + A_n u_n, K u_1 = v1
    L.alpha[1] = 1.0;
    for (std::size_t n = 3; n <= N; ++n) L.alpha[n] = L.B[n - 1] * L.alpha[n - 2];
    for (std::size_t n = 1; n <= N; ++n)
        L.p[n] = L.A[n] * L.A[n] + (n >= 2 ? L.B[n] * L.B[n] * L.p[n - 2] : 0.0);
    return L;
}

CoefficientVector InverseLedger::polynomial_part(std::size_t n) const {
    if (n > N) throw DomainError("polynomial_part index beyond ledger size");
    if (n == 0) return CoefficientVector(Basis::u, 1, {});
    std::vector<cplx> entries(n, 0.0);
    double prod = 1.0;
    for (std::size_t k = n;; k -= 2) {
        entries[k - 1] = A[k] * prod;
        if (k <= 2) break;
        prod *= B[k];
    }
    return CoefficientVector(Basis::u, 1, std::move(entries));
}

namespace {

// Coefficients of sum_j S_j P_j (j = 1..N-1): A_k T_k with T_k = S_k + B_{k+2} T_{k+2}.
std::vector<cplx> combine_parts(const InverseLedger& L, const std::vector<cplx>& S) {
    std::size_t top = S.size();  // S[j] for j < top
    std::vector<cplx> T(top + 2, 0.0), out(top, 0.0);
    for (std::size_t k = top; k-- > 1;) {
        T[k] = S[k] + (k + 2 < top ? L.B[k + 2] * T[k + 2] : cplx(0.0));
        out[k] = L.A[k] * T[k];
    }
    return out;
}

} // namespace

RecurrenceResult apply_recurrence(double lambda, const CoefficientVector& v,
                                  std::span<const double> y_grid) {
    if (v.basis() != Basis::u) throw DomainError("apply_recurrence needs a u-basis vector");
    if (v.start() < 1) throw DomainError("apply_recurrence needs start >= 1");
    std::size_t N = std::max<std::size_t>(v.end(), 2);
    InverseLedger L = ledger_build(lambda, N);
    // K u_n = P_{n-1} + alpha_n v1
    std::vector<cplx> S(N, 0.0);
    cplx a = 0.0;
    for (std::size_t n = v.start(); n < v.end(); ++n) {
        if (n >= 2) S[n - 1] = v[n];
        a += v[n] * L.alpha[n];
    }
    std::vector<cplx> poly = combine_parts(L, S);
    RecurrenceResult r;
    r.polynomial = CoefficientVector(Basis::u, 1, std::vector<cplx>(poly.begin() + 1, poly.end()));
    r.v1_coefficient = a;
    r.samples.resize(y_grid.size());
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        double y = y_grid[i];
        if (!(y >= 0.0)) throw DomainError("y must be >= 0");
        r.samples[i] = evaluate_u_series(r.polynomial, y) + (a == 0.0 ? cplx(0.0) : a * v1_eval(lambda, y));
    }
    return r;
}

double v1_eval(double lambda, double y) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("lambda must be finite and nonzero");
    if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("v1_eval needs finite y >= 0");
    if (y == 0.0) return 0.0;
    return adaptive_gauss_legendre(phi_tail, 0.0, y, 1e-14) / lambda;
}

CoefficientVector v1_series(double lambda, std::size_t n_max) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("lambda must be finite and nonzero");
    if (n_max > 2000) throw DomainError("v1_series needs n_max <= 2000");
    const double ln2 = std::log(2.0);
    const double log_front = 0.5 * std::log(M_PI / 2.0);
    std::vector<cplx> e(2 * n_max, 0.0);
    for (std::size_t n = 0; n < n_max; ++n) {
        double dn = double(n);
        long ln_ = long(n);
        double lg = log_front + 0.5 * log_factorial(2 * ln_) - dn * ln2 - log_factorial(ln_) -
                    0.5 * std::log(2.0 * dn + 1.0);
        double ld = dn * ln2 + log_factorial(ln_) -
                    0.5 * (ln2 + std::log(dn + 1.0) + log_factorial(2 * ln_ + 1));
        e[2 * n] = std::exp(lg) / lambda;
        e[2 * n + 1] = -std::exp(ld) / lambda;
    }
    return CoefficientVector(Basis::u, 1, std::move(e));
}

double right_inverse_residual(double lambda, std::size_t N) {
    if (N < 2) throw DomainError("right_inverse_residual needs N >= 2");
    InverseLedger L = ledger_build(lambda, N);
    double worst = 0.0;
    for (std::size_t n = 2; n <= N; ++n) {
        CoefficientVector h = imaginary_axis_apply(lambda, L.polynomial_part(n - 1));
        // H v1 = u_1
        h = h + CoefficientVector::unit(Basis::u, 1, L.alpha[n]);
        h = h + CoefficientVector::unit(Basis::u, n, -1.0);
        worst = std::max(worst, std::sqrt(h.norm_squared()));
    }
    return worst;
}

FiniteRankError finite_rank_error(double lambda, std::size_t m, std::size_t N) {
    if (m < 4 || m > N) throw DomainError("finite_rank_error needs 4 <= m <= N");
    if (N < 16) throw DomainError("finite_rank_error needs N >= 16");
    InverseLedger L = ledger_build(lambda, N);

    // tail of p_j beyond N from a power-law fit over the upper half
    std::vector<double> lx, ly;
    for (std::size_t j = N / 2; j < N; ++j) {
        lx.push_back(std::log(double(j)));
        ly.push_back(std::log(L.p[j]));
    }
    LinearFit fit = least_squares(lx, ly);
    FiniteRankError out;
    out.tail_exponent = fit.slope;
    if (!(fit.slope < -1.0)) throw DomainError("p_n tail does not decay fast enough to complete");
    double amp = std::exp(fit.intercept);
    double tail = amp * std::pow(double(N) - 0.5, fit.slope + 1.0) / (-fit.slope - 1.0);
    CompensatedSum s;
    for (std::size_t j = m; j < N; ++j) s.add(L.p[j]);
    s.add(tail);
    out.bound = std::sqrt(s.value());

    // (K - K_m) u = sum_{n > m} c_n P_{n-1}
    double worst = 0.0;
    for (unsigned t = 0; t < 32; ++t) {
        std::minstd_rand rng(20240601u + t);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> c(N + 1, 0.0);
        double nrm = 0.0;
        for (std::size_t n = 1; n <= N; ++n) {
            c[n] = dist(rng);
            nrm += c[n] * c[n];
        }
        nrm = std::sqrt(nrm);
        std::vector<cplx> S(N, 0.0);
        for (std::size_t n = m + 1; n <= N; ++n) S[n - 1] = c[n] / nrm;
        std::vector<cplx> r = combine_parts(L, S);
        double e = 0.0;
        for (const cplx& x : r) e += std::norm(x);
        worst = std::max(worst, std::sqrt(e));
    }
    out.empirical = worst;
    return out;
}

PerronResult nystrom_perron(const KernelSpec& spec) {
    validate(spec);
    if (!(spec.mu > 0.0)) throw DomainError("nystrom_perron needs mu > 0");
    if (spec.node_count < 64) throw DomainError("nystrom_perron needs node_count >= 64");
    double c = spec.mu / spec.lambda;
    QuadratureRule q = composite_gauss_legendre(0.0, spec.L, kNystromPanels, nystrom_order(spec.node_count));
    const std::vector<double>& x = q.nodes;
    const std::vector<double>& w = q.weights;
    std::size_t n = x.size();
    std::vector<double> E(n), row(n);
    parallel_for(n, [&](std::size_t i) {
        E[i] = scaled_incomplete_integral(c, x[i]);
        row[i] = (lower_row_integral(c, x[i], false) + E[i] * std::log(spec.L / x[i])) / spec.lambda;
    });

    // G(y, s) = E(m) e^{phi(m) - phi(y)} / (lambda s), m = min(y, s)
    std::vector<double> M(n * n);
    parallel_for(n, [&](std::size_t i) {
        CompensatedSum off;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            std::size_t k = x[j] < x[i] ? j : i;
            double t = x[i] - x[k];
            double g = E[k] * std::exp(-t * (x[i] + c - 0.5 * t)) / (spec.lambda * x[j]);
            M[i * n + j] = w[j] * g;
            off.add(M[i * n + j]);
        }
        M[i * n + i] = row[i] - off.value();
    });

    PerronResult out;
    out.min_kernel_entry = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out.min_kernel_entry = std::min(out.min_kernel_entry, M[i * n + j]);

    std::vector<double> v(n, 1.0 / std::sqrt(double(n))), mv(n);
    double prev = 0.0;
    for (std::size_t it = 1; it <= kPowerIterationCap; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* r = &M[i * n];
            for (std::size_t j = 0; j < n; ++j) acc += r[j] * v[j];
            mv[i] = acc;
        }
        double vv = 0.0, vmv = 0.0, mm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            vv += v[i] * v[i];
            vmv += v[i] * mv[i];
            mm += mv[i] * mv[i];
        }
        double rq = vmv / vv;
        double s = 1.0 / std::sqrt(mm);
        for (std::size_t i = 0; i < n; ++i) v[i] = mv[i] * s;
        if (it > 1 && std::abs(rq - prev) <= 1e-12 * std::abs(rq)) {
            out.rho = rq;
            out.sigma0 = 1.0 / rq;
            out.iterations = it;
            return out;
        }
        prev = rq;
    }
    throw NoConvergence("power iteration did not settle within " + std::to_string(kPowerIterationCap) +
                        " iterations");
}

double hs_norm_estimate(const KernelSpec& spec) {
    validate(spec);
    if (!(spec.mu > 0.0)) throw DomainError("hs_norm_estimate needs mu > 0");
    double c = spec.mu / spec.lambda;
    // h(y) = int_0^inf G(y, s)^2 ds; the s > y part is E(y)^2 / (lambda^2 y)
    auto h = [&](double y) {
        double e = scaled_incomplete_integral(c, y);
        return (lower_row_integral(c, y, true) + e * e / y) / (spec.lambda * spec.lambda);
    };
    QuadratureRule q = composite_gauss_legendre(0.0, spec.L, kNystromPanels, nystrom_order(spec.node_count));
    // y > L through y = L/t
    QuadratureRule t = composite_gauss_legendre(0.0, 1.0, 1, 40);
    std::vector<double> part(q.nodes.size() + t.nodes.size());
    parallel_for(part.size(), [&](std::size_t i) {
        if (i < q.nodes.size()) {
            part[i] = q.weights[i] * h(q.nodes[i]);
        } else {
            std::size_t k = i - q.nodes.size();
            double tk = t.nodes[k];
            part[i] = t.weights[k] * h(spec.L / tk) * spec.L / (tk * tk);
        }
    });
    CompensatedSum s;
    for (double v : part) s.add(v);
    return std::sqrt(s.value());
}

StirlingReport stirling_sandwich_check(std::size_t N) {
    if (N < 1 || N > 10000) throw DomainError("stirling_sandwich_check needs 1 <= N <= 10^4");
    const double log_sqrt_2pi = 0.5 * std::log(2.0 * M_PI);
    const double ln2 = std::log(2.0);
    StirlingReport r;
    r.N = N;
    r.min_upper_margin = r.min_lower_margin = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= N; ++n) {
        double dn = double(n), ln_n = std::log(dn);
        double lf = log_factorial(long(n));
        double core = dn * ln_n - dn + 0.5 * ln_n;
        double upper = 1.0 + core - lf;
        double lower = lf - (log_sqrt_2pi + core);
        if (upper < 0.0)
            throw BoundViolation("n! <= e n^n e^{-n} sqrt(n) fails at n = " + std::to_string(n));
        if (lower < 0.0)
            throw BoundViolation("n! >= sqrt(2 pi) n^n e^{-n} sqrt(n) fails at n = " + std::to_string(n));
        r.min_upper_margin = std::min(r.min_upper_margin, upper);
        r.min_lower_margin = std::min(r.min_lower_margin, lower);
        if (n == 100) {
            r.upper_margin_100 = upper;
            r.lower_margin_100 = lower;
        }
    }
    if (N >= 100) {
        r.b_scaled_min = std::numeric_limits<double>::infinity();
        for (std::size_t n = 100; n <= N; ++n) {
            double dn = double(n);
            double ld = dn * ln2 + log_factorial(long(n)) -
                        0.5 * (ln2 + std::log(dn + 1.0) + log_factorial(2 * long(n) + 1));
            double v = std::exp(ld + 0.75 * std::log(dn));
            r.b_scaled_min = std::min(r.b_scaled_min, v);
            r.b_scaled_max = std::max(r.b_scaled_max, v);
        }
        if (r.b_scaled_min < 0.5 || r.b_scaled_max > 1.5)
            throw BoundViolation("b_n n^{3/4} leaves [0.5, 1.5]");
    }
    return r;
}

} // namespace gribov
