#pragma once

#include "gribov/basis_ops.hpp"
#include "gribov/jacobi.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gribov {

enum class SeriesVerdict { convergent, divergent, indeterminate };

struct SeriesClassification {
    double alpha_estimate = 0.0;
    double alpha_stderr = 0.0;
    SeriesVerdict verdict = SeriesVerdict::indeterminate;
};

std::string to_string(SeriesVerdict v);

// Raabe-Duhamel: fits n (1 - a_{n+1}/a_n) = alpha + beta/n over [n_min, n_max].
// alpha_stderr combines the fit error with the drift between the lower- and
// upper-half fits, floored at 1e-3, so 1/n reports indeterminate.
// Needs n_max >= 4 n_min; throws NonPositiveTerm.
SeriesClassification classify_series(const std::function<double(std::size_t)>& terms,
                                     std::size_t n_min, std::size_t n_max);

// Same, from ln a_n; for terms below the double range.
SeriesClassification classify_log_series(const std::function<double(std::size_t)>& log_terms,
                                         std::size_t n_min, std::size_t n_max);

enum class Determinacy { completely_indeterminate, not_indeterminate, inconclusive };

std::string to_string(Determinacy d);

struct DeficiencyReport {
    int p = 1;
    int m = 1;
    double criterion = 0.0;  // p + m/2
    double tail_even = 0.0;
    double tail_odd = 0.0;
    double decay_fit = 0.0;  // exponent of the squared solution norms, slower chain
    Determinacy verdict = Determinacy::inconclusive;
    std::optional<int> n_plus;  // set only when completely indeterminate
    std::optional<int> n_minus;
};

// values[k] holds the solution at index k + 1.
struct SolutionTail {
    std::vector<cplx> values;
    std::vector<double> partial_l2;
    double bound_constant = 0.0;   // max |u_n| sqrt(n) ln n over n in [10, N]
    std::size_t bound_index = 0;   // where that max is attained
};

struct ScalarZeroSolutions {
    SolutionTail P;  // first kind at z = 0 (odd indices)
    SolutionTail Q;  // second kind at z = 0 (even indices)
    SeriesClassification P_series;
    SeriesClassification Q_series;
    DeficiencyReport report;
};

// N >= 100. Products of b-ratios in log domain.
ScalarZeroSolutions scalar_zero_solutions(std::size_t N);

// u_1 = seed, u_2 = seed xi / sqrt 2, b_{n-1} u_{n-1} + b_n u_{n+1} = xi u_n. N >= 10.
// Throws OverflowError when |u_n| > 1e300.
SolutionTail eigenvector_at(cplx xi, std::size_t N, cplx seed = 1.0);

struct HellingerReport {
    double radius = 0.0;
    std::size_t N = 0;
    std::size_t n_end = 0;
    std::size_t grid_size = 0;
    std::size_t points = 0;
    double sup_first = 0.0;   // sup over grid of sum_{N < n <= n_end} |P_n(z)|^2
    double sup_second = 0.0;  // same for Q_n
};

// Grid: z = 0 plus rings |z| = radius/2 and radius with grid_size angles each.
// n_end = 0 means 8 N.
HellingerReport hellinger_disc_check(double radius, std::size_t N, std::size_t grid_size,
                                     std::size_t n_end = 0);

struct KmBlockReport {
    DeficiencyReport report;
    SeriesClassification odd_series;   // chain from phi_1
    SeriesClassification even_series;  // chain from phi_2
    double decay_odd = 0.0;
    double decay_even = 0.0;
    std::vector<double> odd_norms_sq;   // ||phi_{2j+1}||^2, j = 0, 1, ...
    std::vector<double> even_norms_sq;  // ||phi_{2j+2}||^2
    double inverse_norm_sum = 0.0;      // sum_{i <= J} 1/||B_i||
    SeriesClassification inverse_norm_series;
    BlockNormOnset norm_onset;
};

// Zero-energy solutions of the block recurrence of H^{p,m}, p, m >= 1, J >= 50.
KmBlockReport km_block_test(int p, int m, std::size_t J);

} // namespace gribov
