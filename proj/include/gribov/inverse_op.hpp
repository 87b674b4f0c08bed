#pragma once

#include "gribov/basis_ops.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gribov {

// Kernel N(y, s) = e^{-s^2/2 - cs}/(lambda s) * int_0^{min(y,s)} e^{u^2/2 + cu} du, c = mu/lambda.
// Needs lambda != 0 and mu/lambda >= 0. L must make e^{-L^2/2 - cL} < 1e-16.
struct KernelSpec {
    double mu = 0.0;
    double lambda = 1.0;
    double L = 12.0;
    std::size_t node_count = 400;
};

void validate(const KernelSpec& spec);

// e^{-phi(x)} int_0^x e^{phi(u)} du with phi(u) = u^2/2 + c u; bounded, ~1/(x + c) at infinity.
double scaled_incomplete_integral(double c, double x);

double kernel_eval(const KernelSpec& spec, double y, double s);

// u_k(y) = y^k / sqrt(k!)
double u_sample(std::size_t k, double y);

// K psi at each y by the swapped-order double integral
// int_0^y e^{phi(u)} int_u^inf e^{-phi(s)} psi(s)/(lambda s) ds du.
std::vector<double> apply_quadrature(const KernelSpec& spec, const std::function<double(double)>& psi,
                                     std::span<const double> y_grid);

struct RecurrenceResult {
    CoefficientVector polynomial;  // u-basis part
    cplx v1_coefficient = 0.0;
    std::vector<cplx> samples;
};

// K_{0,lambda} v = polynomial + v1_coefficient * v1, v in the u-basis with start >= 1.
RecurrenceResult apply_recurrence(double lambda, const CoefficientVector& v,
                                  std::span<const double> y_grid);

// v1(y) = (1/lambda) int_0^y phi(u) du, phi the Mills-type ratio of ortho_poly.
double v1_eval(double lambda, double y);

// u-basis coefficients of v1: u_{2n+1} gets gamma_n > 0, u_{2n+2} gets delta_n < 0, n < n_max.
CoefficientVector v1_series(double lambda, std::size_t n_max);

// sum_k v_k u_k(y), each u_k(y) formed in log domain.
cplx evaluate_u_series(const CoefficientVector& v, double y);

// Entries indexed by n (slot 0 unused).
struct InverseLedger {
    double lambda = 1.0;
    std::size_t N = 0;
    std::vector<double> A;      // 1/(lambda n sqrt(n+1))
    std::vector<double> B;      // (n-1)/sqrt(n(n+1))
    std::vector<double> alpha;  // v1 coefficient of K u_n
    std::vector<double> p;      // ||P_n||^2 by p_n = B_n^2 p_{n-2} + A_n^2

    // P_n = B_n P_{n-2} + A_n u_n, built on demand (n <= N).
    CoefficientVector polynomial_part(std::size_t n) const;
};

InverseLedger ledger_build(double lambda, std::size_t N);

// max over n in [2, N] of ||H_lambda K u_n - u_n||.
double right_inverse_residual(double lambda, std::size_t N);

struct FiniteRankError {
    double bound = 0.0;
    double empirical = 0.0;
    double tail_exponent = 0.0;  // fitted exponent of p_n used to complete the sum
};

// Test vectors: minstd_rand seeded with 20240601 + t (t = 0..31), entries uniform on [-1, 1]
// over u_1..u_N, normalized.
FiniteRankError finite_rank_error(double lambda, std::size_t m, std::size_t N);

struct PerronResult {
    double rho = 0.0;
    double sigma0 = 0.0;
    std::size_t iterations = 0;
    double min_kernel_entry = 0.0;  // smallest off-diagonal discretized entry
};

// Power iteration on the Nystrom matrix of K in the coordinates where the weight becomes
// Lebesgue measure, with the kink on the diagonal subtracted out. Nodes: 4 Gauss-Legendre
// panels on [0, L], node_count rounded up to a multiple of 4. mu > 0, node_count >= 64.
PerronResult nystrom_perron(const KernelSpec& spec);

// Hilbert-Schmidt norm of K on L^2(e^{-x^2 - 2cx} dx). mu > 0.
double hs_norm_estimate(const KernelSpec& spec);

struct StirlingReport {
    std::size_t N = 0;
    double min_upper_margin = 0.0;  // 1 + n ln n - n + ln(n)/2 - ln n!
    double min_lower_margin = 0.0;  // ln n! - (ln sqrt(2 pi) + n ln n - n + ln(n)/2)
    double upper_margin_100 = 0.0;
    double lower_margin_100 = 0.0;
    double b_scaled_min = 0.0;      // min of |delta_n| n^{3/4} (lambda = 1) over [100, N]
    double b_scaled_max = 0.0;
};

// Throws BoundViolation if a bound fails. N <= 10^4.
StirlingReport stirling_sandwich_check(std::size_t N);

} // namespace gribov
