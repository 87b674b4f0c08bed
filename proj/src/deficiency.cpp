#include "gribov/deficiency.hpp"

#include "gribov/errors.hpp"
#include "gribov/numeric.hpp"
#include "gribov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gribov {

std::string to_string(SeriesVerdict v) {
    switch (v) {
    case SeriesVerdict::convergent: return "convergent";
    case SeriesVerdict::divergent: return "divergent";
    case SeriesVerdict::indeterminate: break;
    }
    return "indeterminate";
}

std::string to_string(Determinacy d) {
    switch (d) {
    case Determinacy::completely_indeterminate: return "completely_indeterminate";
    case Determinacy::not_indeterminate: return "not_indeterminate";
    case Determinacy::inconclusive: break;
    }
    return "inconclusive";
}

namespace {

constexpr double kAlphaStderrFloor = 1e-3;

// Fit n * gap(n) = alpha + beta / n, where gap(n) = 1 - a_{n+1}/a_n.
double raabe_intercept(const std::vector<double>& inv_n, const std::vector<double>& y,
                       std::size_t from, std::size_t to, double* stderr_out) {
    std::span<const double> xs(inv_n.data() + from, to - from);
    std::span<const double> ys(y.data() + from, to - from);
    LinearFit fit = least_squares(xs, ys);
    if (stderr_out) *stderr_out = fit.intercept_stderr;
    return fit.intercept;
}

SeriesClassification classify_gaps(const std::function<double(std::size_t)>& gap,
                                   std::size_t n_min, std::size_t n_max) {
    if (n_min < 1 || n_max < 4 * n_min)
        throw DomainError("classify_series needs 1 <= n_min and n_max >= 4 n_min");
    std::size_t count = n_max - n_min + 1;
    std::vector<double> inv_n(count), y(count);
    for (std::size_t i = 0; i < count; ++i) {
        double n = double(n_min + i);
        inv_n[i] = 1.0 / n;
        y[i] = n * gap(n_min + i);
        if (!std::isfinite(y[i])) throw DomainError("non-finite ratio in series");
    }
    double se = 0.0;
    double alpha = raabe_intercept(inv_n, y, 0, count, &se);
    // drift between the lower and upper halves (split at the geometric midpoint)
    auto mid_n = std::size_t(std::sqrt(double(n_min) * double(n_max)));
    std::size_t mid = std::clamp<std::size_t>(mid_n - n_min, 3, count - 3);
    double lo = raabe_intercept(inv_n, y, 0, mid + 1, nullptr);
    double hi = raabe_intercept(inv_n, y, mid, count, nullptr);
    double drift = std::isfinite(lo - hi) ? lo - hi : 0.0;

    SeriesClassification out;
    out.alpha_estimate = alpha;
    out.alpha_stderr = std::max(kAlphaStderrFloor, std::hypot(se, drift));
    if (alpha - 2.0 * out.alpha_stderr > 1.0)
        out.verdict = SeriesVerdict::convergent;
    else if (alpha + 2.0 * out.alpha_stderr < 1.0)
        out.verdict = SeriesVerdict::divergent;
    else
        out.verdict = SeriesVerdict::indeterminate;
    return out;
}

double log_b(std::size_t k) { return std::log(double(k)) + 0.5 * std::log(double(k + 1)); }

// Exponent of squared norms against chain index over the upper half.
double upper_half_exponent(const std::vector<double>& norms_sq, std::size_t first_index) {
    std::size_t n = norms_sq.size();
    std::size_t from = n / 2;
    std::vector<double> idx, val;
    for (std::size_t i = std::max<std::size_t>(from, 1); i < n; ++i) {
        idx.push_back(double(first_index + i));
        val.push_back(norms_sq[i]);
    }
    if (idx.size() < 2) return 0.0;
    return fit_power_exponent(idx, val);
}

void finish_tail(SolutionTail& t) {
    CompensatedSum s;
    t.partial_l2.resize(t.values.size());
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        s.add(std::norm(t.values[i]));
        t.partial_l2[i] = s.value();
    }
    t.bound_constant = 0.0;
    t.bound_index = 0;
    for (std::size_t n = 10; n <= t.values.size(); ++n) {
        double w = std::abs(t.values[n - 1]) * std::sqrt(double(n)) * std::log(double(n));
        if (w > t.bound_constant) {
            t.bound_constant = w;
            t.bound_index = n;
        }
    }
}

Determinacy decide(const SeriesClassification& a, const SeriesClassification& b, double criterion) {
    if (a.verdict == SeriesVerdict::convergent && b.verdict == SeriesVerdict::convergent &&
        criterion > 1.0)
        return Determinacy::completely_indeterminate;
    if (a.verdict == SeriesVerdict::divergent || b.verdict == SeriesVerdict::divergent)
        return Determinacy::not_indeterminate;
    return Determinacy::inconclusive;
}

// Classifies a chain stored as ln a_j, j = 0..size-1.
SeriesClassification classify_chain(const std::vector<double>& log_terms) {
    std::size_t n_max = log_terms.size() - 2;
    std::size_t n_min = std::max<std::size_t>(1, n_max / 8);
    return classify_log_series([&](std::size_t j) { return log_terms[j]; }, n_min, n_max);
}

} // namespace

SeriesClassification classify_series(const std::function<double(std::size_t)>& terms,
                                     std::size_t n_min, std::size_t n_max) {
    if (n_min < 1 || n_max < 4 * n_min)
        throw DomainError("classify_series needs 1 <= n_min and n_max >= 4 n_min");
    std::vector<double> a(n_max - n_min + 2);
    for (std::size_t n = n_min; n <= n_max + 1; ++n) {
        double v = terms(n);
        if (!(v > 0.0) || !std::isfinite(v))
            throw NonPositiveTerm(n, "term " + std::to_string(n) + " is not a positive real");
        a[n - n_min] = v;
    }
    return classify_gaps(
        [&](std::size_t n) {
            double an = a[n - n_min];
            return (an - a[n + 1 - n_min]) / an;
        },
        n_min, n_max);
}

SeriesClassification classify_log_series(const std::function<double(std::size_t)>& log_terms,
                                         std::size_t n_min, std::size_t n_max) {
    if (n_min < 1 || n_max < 4 * n_min)
        throw DomainError("classify_series needs 1 <= n_min and n_max >= 4 n_min");
    std::vector<double> l(n_max - n_min + 2);
    for (std::size_t n = n_min; n <= n_max + 1; ++n) {
        double v = log_terms(n);
        if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
            throw NonPositiveTerm(n, "term " + std::to_string(n) + " is not a positive real");
        l[n - n_min] = v;
    }
    return classify_gaps(
        [&](std::size_t n) { return -std::expm1(l[n + 1 - n_min] - l[n - n_min]); }, n_min,
        n_max);
}

ScalarZeroSolutions scalar_zero_solutions(std::size_t N) {
    if (N < 100) throw DomainError("scalar_zero_solutions needs N >= 100");
    ScalarZeroSolutions out;
    out.P.values.assign(N, 0.0);
    out.Q.values.assign(N, 0.0);

    // P_{2k+1} = (-1)^k prod_{j<=k} b_{2j-1}/b_{2j}
    std::vector<double> logP{0.0};
    for (std::size_t n = 1; n <= N; n += 2) {
        std::size_t k = (n - 1) / 2;
        if (k > 0) logP.push_back(logP.back() + log_b(n - 2) - log_b(n - 1));
        double mag = std::exp(logP[k]);
        out.P.values[n - 1] = (k % 2 == 0) ? mag : -mag;
    }
    // Q_{2k} = (-1)^{k-1} (1/b_1) prod_{j<k} b_{2j}/b_{2j+1}
    std::vector<double> logQ{-log_b(1)};
    for (std::size_t n = 2; n <= N; n += 2) {
        std::size_t k = n / 2;
        if (k > 1) logQ.push_back(logQ.back() + log_b(n - 2) - log_b(n - 1));
        double mag = std::exp(logQ[k - 1]);
        out.Q.values[n - 1] = (k % 2 == 1) ? mag : -mag;
    }
    finish_tail(out.P);
    finish_tail(out.Q);

    // series over the chain index, terms |.|^2
    std::vector<double> logP2(logP.size()), logQ2(logQ.size());
    std::vector<double> P2(logP.size()), Q2(logQ.size());
    for (std::size_t i = 0; i < logP.size(); ++i) {
        logP2[i] = 2.0 * logP[i];
        P2[i] = std::exp(logP2[i]);
    }
    for (std::size_t i = 0; i < logQ.size(); ++i) {
        logQ2[i] = 2.0 * logQ[i];
        Q2[i] = std::exp(logQ2[i]);
    }
    out.P_series = classify_chain(logP2);
    out.Q_series = classify_chain(logQ2);

    DeficiencyReport& r = out.report;
    r.p = 1;
    r.m = 1;
    r.criterion = 1.5;
    r.tail_odd = out.P.partial_l2.back();
    r.tail_even = out.Q.partial_l2.back();
    r.decay_fit = std::max(upper_half_exponent(P2, 0), upper_half_exponent(Q2, 1));
    r.verdict = decide(out.P_series, out.Q_series, r.criterion);
    if (r.verdict == Determinacy::completely_indeterminate) r.n_plus = r.n_minus = 1;
    return out;
}

SolutionTail eigenvector_at(cplx xi, std::size_t N, cplx seed) {
    if (N < 10) throw DomainError("eigenvector_at needs N >= 10");
    if (!std::isfinite(xi.real()) || !std::isfinite(xi.imag()))
        throw DomainError("xi must be finite");
    SolutionTail t;
    t.values.resize(N);
    t.values[0] = seed;
    t.values[1] = seed * xi / std::sqrt(2.0);
    for (std::size_t n = 2; n < N; ++n) {
        cplx next = (xi * t.values[n - 1] - gribov_b(n - 1) * t.values[n - 2]) / gribov_b(n);
        if (!(std::abs(next) <= 1e300))
            throw OverflowError("|u_" + std::to_string(n + 1) + "| exceeds 1e300");
        t.values[n] = next;
    }
    finish_tail(t);
    return t;
}

HellingerReport hellinger_disc_check(double radius, std::size_t N, std::size_t grid_size,
                                     std::size_t n_end) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw DomainError("radius must be >= 0");
    if (N < 2) throw DomainError("hellinger_disc_check needs N >= 2");
    if (n_end == 0) n_end = 8 * N;
    if (n_end <= N) throw DomainError("n_end must exceed N");
    if (radius > 0.0 && grid_size == 0) throw DomainError("grid_size must be positive");

    std::vector<cplx> points{0.0};
    if (radius > 0.0) {
        for (double r : {0.5 * radius, radius})
            for (std::size_t j = 0; j < grid_size; ++j)
                points.push_back(std::polar(r, 2.0 * M_PI * double(j) / double(grid_size)));
    }

    std::vector<double> tail_p(points.size()), tail_q(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        cplx z = points[i];
        // columns: first kind (1, z/b_1), second kind (0, 1/b_1)
        cplx p0 = 1.0, p1 = z / gribov_b(1);
        cplx q0 = 0.0, q1 = 1.0 / gribov_b(1);
        CompensatedSum sp, sq;
        for (std::size_t n = 2; n < n_end; ++n) {
            double bl = gribov_b(n - 1), bn = gribov_b(n);
            cplx p2 = (z * p1 - bl * p0) / bn;
            cplx q2 = (z * q1 - bl * q0) / bn;
            p0 = p1;
            p1 = p2;
            q0 = q1;
            q1 = q2;
            if (n + 1 > N) {
                sp.add(std::norm(p1));
                sq.add(std::norm(q1));
            }
        }
        tail_p[i] = sp.value();
        tail_q[i] = sq.value();
    });

    HellingerReport rep;
    rep.radius = radius;
    rep.N = N;
    rep.n_end = n_end;
    rep.grid_size = grid_size;
    rep.points = points.size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        rep.sup_first = std::max(rep.sup_first, tail_p[i]);
        rep.sup_second = std::max(rep.sup_second, tail_q[i]);
    }
    return rep;
}

KmBlockReport km_block_test(int p, int m, std::size_t J) {
    if (p < 1 || m < 1) throw DomainError("km_block_test needs p, m >= 1");
    if (J < 50) throw DomainError("km_block_test needs J >= 50");
    BlockJacobiSpec spec{p, m, J};

    std::vector<std::vector<double>> le(J + 1);
    for (std::size_t i = 1; i <= J; ++i) {
        le[i].resize(std::size_t(m));
        for (int r = 0; r < m; ++r) le[i][std::size_t(r)] = block_log_entry(spec, i, r);
    }

    // phi_{2j+1+eps} = (-1)^j B_{2j+eps}^-1 B_{2j-1+eps} ... phi_{1+eps}, per coordinate.
    // Norm of the matrix product is its largest coordinate.
    auto chain = [&](std::size_t eps) {
        std::vector<double> acc(std::size_t(m), 0.0);
        std::vector<double> log_sq{0.0};
        for (std::size_t j = 1; 2 * j + eps <= J; ++j) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < acc.size(); ++r) {
                acc[r] += le[2 * j - 1 + eps][r] - le[2 * j + eps][r];
                best = std::max(best, acc[r]);
            }
            log_sq.push_back(2.0 * best);
        }
        return log_sq;
    };

    KmBlockReport out;
    std::vector<double> log_odd = chain(0), log_even = chain(1);
    CompensatedSum so, se;
    for (double l : log_odd) {
        out.odd_norms_sq.push_back(std::exp(l));
        so.add(out.odd_norms_sq.back());
    }
    for (double l : log_even) {
        out.even_norms_sq.push_back(std::exp(l));
        se.add(out.even_norms_sq.back());
    }
    out.odd_series = classify_chain(log_odd);
    out.even_series = classify_chain(log_even);
    out.decay_odd = upper_half_exponent(out.odd_norms_sq, 0);
    out.decay_even = upper_half_exponent(out.even_norms_sq, 0);

    std::vector<double> log_inv_norm(J + 1, 0.0);
    CompensatedSum sinv;
    for (std::size_t i = 1; i <= J; ++i) {
        log_inv_norm[i] = -*std::max_element(le[i].begin(), le[i].end());
        sinv.add(std::exp(log_inv_norm[i]));
    }
    out.inverse_norm_sum = sinv.value();
    out.inverse_norm_series = classify_log_series(
        [&](std::size_t i) { return log_inv_norm[i]; }, std::max<std::size_t>(1, (J - 1) / 8),
        J - 1);
    out.norm_onset = block_norm_onset(spec);

    DeficiencyReport& r = out.report;
    r.p = p;
    r.m = m;
    r.criterion = double(p) + double(m) / 2.0;
    r.tail_odd = so.value();
    r.tail_even = se.value();
    r.decay_fit = std::max(out.decay_odd, out.decay_even);
    r.verdict = decide(out.odd_series, out.even_series, r.criterion);
    if (r.verdict == Determinacy::completely_indeterminate) r.n_plus = r.n_minus = m;
    return out;
}

} // namespace gribov
