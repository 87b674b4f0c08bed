#pragma once

#include "gribov/basis_ops.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gribov {

// n x n truncation: diagonal mu k, off-diagonal i lambda b_k (k = 1..n).
struct ScalarJacobiSpec {
    double mu = 0.0;
    double lambda = 0.0;
    std::size_t n = 1;
};

inline constexpr double kDefaultSpectrumTol = 1e-10;
inline constexpr std::size_t kMaxTruncation = 4096;

struct CharPolyValue {
    cplx value;       // p_n(x) * exp(-log_scale)
    cplx derivative;  // p_n'(x) * exp(-log_scale)
    double log_scale = 0.0;
    double magnitude = 0.0;  // same recurrence with absolute values; bounds |value|
    double rounding_bound = 0.0;  // running bound on the accumulated rounding error in value

    double scaled_residual() const { return magnitude > 0.0 ? std::abs(value) / magnitude : 0.0; }
};

// det(T_n - x I) by p_k = (mu k - x) p_{k-1} + lambda^2 b_{k-1}^2 p_{k-2}, rescaled by
// powers of two whenever the running magnitude leaves [2^-100, 2^100].
CharPolyValue charpoly_eval(const ScalarJacobiSpec& spec, cplx x);

struct SpectrumResult {
    std::size_t n = 0;
    double mu = 0.0;
    double lambda = 0.0;
    std::vector<cplx> eigenvalues;  // sorted by (real, imag)
    std::vector<double> residuals;
    // false for roots frozen inside the evaluation noise (ill-conditioned; position
    // only known to the size of the last Newton step)
    std::vector<bool> resolved;
};

// All roots by Aberth-Ehrlich with Gauss-Seidel sweeps. Throws NonConvergence.
SpectrumResult truncated_spectrum(const ScalarJacobiSpec& spec, double tol = kDefaultSpectrumTol);

struct Sigma0Point {
    double mu = 0.0;
    cplx sigma0;
    double residual = 0.0;
};

// sigma0 = resolved root of minimal real part.
std::vector<Sigma0Point> sigma0_curve(double lambda, std::span<const double> mu_grid, std::size_t n,
                                      double tol = kDefaultSpectrumTol);

// b_{k-1} b_{k+1} <= b_k^2, checked in integer arithmetic (k <= 10^6).
bool gribov_b_log_concave(std::uint64_t k);

// Block tridiagonal form of H^{p,m} on B_p. Block i (1-based) is diagonal with
// entries beta_k = sqrt(k!(k+m)!)/(k-p)! for k = p + (i-1)m + r, r = 0..m-1.
struct BlockJacobiSpec {
    int p = 1;
    int m = 1;
    std::size_t blocks = 50;
};

std::size_t block_first_index(const BlockJacobiSpec& spec, std::size_t i);
double block_log_entry(const BlockJacobiSpec& spec, std::size_t i, int r);

struct BlockEntries {
    std::vector<double> entries;
    double norm = 0.0;      // max entry
    double inv_norm = 0.0;  // 1 / min entry
};

BlockEntries block_entries(const BlockJacobiSpec& spec, std::size_t i);

// First block index from which ||B_{i-1}|| ||B_{i+1}|| <= 1/||B_i^-1||^2 holds up to
// spec.blocks - 1 (exact norms), and the same with ||B_i||^2 on the right.
struct BlockNormOnset {
    std::optional<std::size_t> exact_from;
    std::optional<std::size_t> simplified_from;
};

BlockNormOnset block_norm_onset(const BlockJacobiSpec& spec);

} // namespace gribov
