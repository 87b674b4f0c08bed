#include "gribov/jacobi.hpp"

#include "gribov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gribov {

namespace {

constexpr int kScaleExp = 100;
constexpr std::size_t kMaxSweeps = 1000;
// consecutive noisy sweeps examined before deciding a root is random-walking
constexpr int kNoiseWindow = 8;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate(const ScalarJacobiSpec& spec) {
    if (spec.n < 1) throw DomainError("truncation size must be >= 1");
    if (spec.n > kMaxTruncation) throw DomainError("truncation size exceeds 4096");
    if (!std::isfinite(spec.mu) || !std::isfinite(spec.lambda))
        throw DomainError("mu and lambda must be finite");
}

// Ascending eigenvalues of the real symmetric tridiagonal matrix with zero
// diagonal and off-diagonal b_k, by Sturm-count bisection.
std::vector<double> zero_diagonal_eigenvalues(std::size_t n) {
    double radius = 1.0;
    for (std::size_t k = 1; k <= n; ++k)
        radius = std::max(radius, (k > 1 ? gribov_b(k - 1) : 0.0) + (k < n ? gribov_b(k) : 0.0));
    const double tiny = kEps * radius;
    auto count_below = [&](double x) {
        std::size_t cnt = 0;
        double d = -x;
        for (std::size_t k = 1; k <= n; ++k) {
            if (k > 1) {
                const double b = gribov_b(k - 1);
                d = -x - b * b / d;
            }
            if (d == 0.0) d = -tiny;
            cnt += d < 0.0;
        }
        return cnt;
    };
    std::vector<double> theta(n);
    for (std::size_t j = 0; j < n; ++j) {
        double lo = j > 0 ? theta[j - 1] : -radius, hi = radius;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
            if (count_below(mid) > j)
                hi = mid;
            else
                lo = mid;
        }
        theta[j] = 0.5 * (lo + hi);
    }
    return theta;
}

// sum k v_k^2 / sum v_k^2 for the eigenvector of the zero-diagonal matrix at
// theta: two steps of inverse iteration with pivoted tridiagonal elimination.
double eigenvector_mean_index(std::size_t n, double theta) {
    const double shift = theta + 1e-10 * std::max(1.0, std::abs(theta));
    std::vector<double> x(n, 1.0), dl(n), dd(n), du(n), du2(n);
    for (int iter = 0; iter < 2; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            dd[i] = -shift;
            du2[i] = 0.0;
            if (i + 1 < n) dl[i] = du[i] = gribov_b(i + 1);
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(dd[i]) >= std::abs(dl[i])) {
                if (dd[i] == 0.0) dd[i] = kEps;
                const double f = dl[i] / dd[i];
                dd[i + 1] -= f * du[i];
                x[i + 1] -= f * x[i];
            } else {
                const double f = dd[i] / dl[i];
                dd[i] = dl[i];
                const double temp = dd[i + 1];
                dd[i + 1] = du[i] - f * temp;
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du2[i];
                }
                du[i] = temp;
                std::swap(x[i], x[i + 1]);
                x[i + 1] -= f * x[i];
            }
        }
        if (dd[n - 1] == 0.0) dd[n - 1] = kEps;
        for (std::size_t r = n; r-- > 0;) {
            double acc = x[r];
            if (r + 1 < n) acc -= du[r] * x[r + 1];
            if (r + 2 < n) acc -= du2[r] * x[r + 2];
            x[r] = acc / dd[r];
        }
        double big = 0.0;
        for (double v : x) big = std::max(big, std::abs(v));
        for (double& v : x) v /= big;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        num += static_cast<double>(k + 1) * x[k] * x[k];
        den += x[k] * x[k];
    }
    return num / den;
}

// First-order perturbation of the mu = 0 spectrum: mu <k>_j + i lambda theta_j,
// nudged off exact conjugate symmetry.
std::vector<cplx> initial_guesses(const ScalarJacobiSpec& spec) {
    const std::size_t n = spec.n;
    std::vector<cplx> z(n);
    if (spec.lambda == 0.0) {
        for (std::size_t j = 0; j < n; ++j) z[j] = spec.mu * static_cast<double>(j + 1);
        return z;
    }
    const auto theta = zero_diagonal_eigenvalues(n);
    const double nudge = 1e-3 * std::max(1.0, std::abs(spec.mu) + std::abs(spec.lambda));
    for (std::size_t j = 0; j < n; ++j)
        z[j] = cplx(spec.mu * eigenvector_mean_index(n, theta[j]), spec.lambda * theta[j]) +
               nudge * std::polar(1.0, 0.4 + 2.0 * static_cast<double>(j));
    return z;
}

bool root_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Makes conjugate pairs exact by mirroring one member (resolved before noise-limited,
// then smaller residual; conjugation leaves the residual unchanged), and snaps lone
// near-real roots onto the axis when that keeps the residual within tol.
void symmetrize(const ScalarJacobiSpec& spec, std::vector<cplx>& z, std::vector<bool>& resolved,
                double tol) {
    const std::size_t n = z.size();
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        done[i] = true;
        const cplx target = std::conj(z[i]);
        double best = 2.0 * std::abs(z[i].imag());
        std::size_t partner = i;
        for (std::size_t j = 0; j < n; ++j) {
            if (done[j]) continue;
            const double d = std::abs(z[j] - target);
            if (d < best) best = d, partner = j;
        }
        if (partner == i) {
            const cplx r(z[i].real(), 0.0);
            if (z[i].imag() != 0.0 && charpoly_eval(spec, r).scaled_residual() <= tol) z[i] = r;
            continue;
        }
        done[partner] = true;
        bool take_i;
        if (resolved[i] != resolved[partner]) {
            take_i = resolved[i];
        } else {
            take_i = charpoly_eval(spec, z[i]).scaled_residual() <=
                     charpoly_eval(spec, z[partner]).scaled_residual();
        }
        cplx keep = take_i ? z[i] : z[partner];
        if (keep.imag() < 0.0) keep = std::conj(keep);
        const bool flag = take_i ? resolved[i] : resolved[partner];
        z[i] = keep;
        z[partner] = std::conj(keep);
        resolved[i] = resolved[partner] = flag;
    }
}

} // namespace

CharPolyValue charpoly_eval(const ScalarJacobiSpec& spec, cplx x) {
    validate(spec);
    const double l2 = spec.lambda * spec.lambda;
    const double ax = std::abs(x);
    cplx p_prev = 1.0, p_pp = 0.0, d_prev = 0.0, d_pp = 0.0;
    double q_prev = 1.0, q_pp = 0.0;
    double e_prev = 0.0, e_pp = 0.0;
    long scale_steps = 0;
    for (std::size_t k = 1; k <= spec.n; ++k) {
        const double a = spec.mu * static_cast<double>(k);
        const double bprev = k > 1 ? gribov_b(k - 1) : 0.0;
        const double c = l2 * bprev * bprev;
        const cplx ax_k = a - x;
        const cplx p = ax_k * p_prev + c * p_pp;
        const cplx d = -p_prev + ax_k * d_prev + c * d_pp;
        const double q = (std::abs(a) + ax) * q_prev + c * q_pp;
        const double t1 = std::abs(ax_k * p_prev), t2 = c * std::abs(p_pp);
        const double e = std::abs(ax_k) * e_prev + c * e_pp + 4.0 * kEps * (t1 + t2);
        p_pp = p_prev, p_prev = p;
        d_pp = d_prev, d_prev = d;
        q_pp = q_prev, q_prev = q;
        e_pp = e_prev, e_prev = e;
        int shift = 0;
        if (q_prev > std::ldexp(1.0, kScaleExp))
            shift = -kScaleExp;
        else if (q_prev > 0.0 && q_prev < std::ldexp(1.0, -kScaleExp))
            shift = kScaleExp;
        if (shift != 0) {
            auto sc = [shift](cplx& v) {
                v = cplx(std::ldexp(v.real(), shift), std::ldexp(v.imag(), shift));
            };
            sc(p_prev), sc(p_pp), sc(d_prev), sc(d_pp);
            q_prev = std::ldexp(q_prev, shift);
            q_pp = std::ldexp(q_pp, shift);
            e_prev = std::ldexp(e_prev, shift);
            e_pp = std::ldexp(e_pp, shift);
            scale_steps -= shift / kScaleExp;
        }
    }
    CharPolyValue out;
    out.value = p_prev;
    out.derivative = d_prev;
    out.magnitude = q_prev;
    out.rounding_bound = e_prev;
    out.log_scale = static_cast<double>(scale_steps) * kScaleExp * std::numbers::ln2;
    return out;
}

SpectrumResult truncated_spectrum(const ScalarJacobiSpec& spec, double tol) {
    validate(spec);
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const std::size_t n = spec.n;
    SpectrumResult result;
    result.n = n;
    result.mu = spec.mu;
    result.lambda = spec.lambda;

    std::vector<cplx> z(n, spec.mu);
    std::vector<bool> resolved(n, true);
    if (n > 1) {
        z = initial_guesses(spec);
        std::vector<bool> done(n, false);
        std::vector<double> last_step(n, std::numeric_limits<double>::infinity());
        std::vector<int> stalled(n, 0), noisy_sweeps(n, 0);
        std::vector<cplx> anchor(n);
        std::vector<double> path(n, 0.0);
        bool all = false;
        for (std::size_t sweep = 0; sweep < kMaxSweeps && !all; ++sweep) {
            all = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (done[i]) continue;
                const CharPolyValue cp = charpoly_eval(spec, z[i]);
                if (cp.value == 0.0) {
                    done[i] = true;
                    continue;
                }
                all = false;
                if (cp.derivative == 0.0) {
                    z[i] *= cplx(1.0 + 1e-7, 1e-7);
                    continue;
                }
                const cplx ratio = cp.value / cp.derivative;
                cplx s = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) s += 1.0 / (z[i] - z[j]);
                const cplx w = ratio / (1.0 - ratio * s);
                const double step = std::abs(w);
                z[i] -= w;
                // |p|/q is tiny over a wide far field, so it is not a convergence test; the step
                // is. A step at rounding level, or a small step that has stopped shrinking for
                // 3 sweeps, resolves the root.
                const double size = std::abs(z[i]);
                stalled[i] = (step <= 1e-7 * size && step >= 0.5 * last_step[i]) ? stalled[i] + 1 : 0;
                last_step[i] = step;
                if (step <= 4.0 * kEps * size || stalled[i] >= 3) {
                    done[i] = true;
                    continue;
                }
                // Where the computed value is below its own rounding bound the Newton step is
                // noise. A root still travelling moves in a consistent direction; one that
                // random-walks over a window of noisy sweeps is frozen as noise-limited.
                if (std::abs(cp.value) > 2.0 * cp.rounding_bound) {
                    noisy_sweeps[i] = 0;
                    continue;
                }
                if (noisy_sweeps[i] == 0) {
                    anchor[i] = z[i] + w;
                    path[i] = 0.0;
                }
                ++noisy_sweeps[i];
                path[i] += step;
                if (noisy_sweeps[i] >= kNoiseWindow) {
                    if (std::abs(z[i] - anchor[i]) <= 0.5 * path[i]) {
                        done[i] = true;
                        resolved[i] = false;
                    } else {
                        noisy_sweeps[i] = 0;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i])
                throw NonConvergence(i, "root " + std::to_string(i) +
                                            " still moving after the sweep cap");
        symmetrize(spec, z, resolved, tol);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return root_less(z[a], z[b]); });
    result.eigenvalues.resize(n);
    result.residuals.resize(n);
    result.resolved.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t i = order[r];
        result.eigenvalues[r] = z[i];
        result.resolved[r] = resolved[i];
        result.residuals[r] = charpoly_eval(spec, z[i]).scaled_residual();
        if (!(result.residuals[r] <= tol))
            throw NonConvergence(r, "root " + std::to_string(r) + " residual above tolerance");
    }
    return result;
}

std::vector<Sigma0Point> sigma0_curve(double lambda, std::span<const double> mu_grid, std::size_t n,
                                      double tol) {
    std::vector<Sigma0Point> out;
    out.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        if (!(mu > 0.0)) throw DomainError("sigma0_curve needs mu > 0");
        const auto spec = truncated_spectrum({mu, lambda, n}, tol);
        std::size_t best = spec.eigenvalues.size();
        for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
            if (!spec.resolved[i] || spec.residuals[i] > tol) continue;
            if (best == spec.eigenvalues.size() || spec.eigenvalues[i].real() < spec.eigenvalues[best].real())
                best = i;
        }
        if (best == spec.eigenvalues.size())
            throw NonConvergence(0, "no resolved root for sigma0");
        out.push_back({mu, spec.eigenvalues[best], spec.residuals[best]});
    }
    return out;
}

bool gribov_b_log_concave(std::uint64_t k) {
    if (k < 1 || k > 1000000) throw DomainError("log-concavity check needs 1 <= k <= 10^6");
    // b_{k-1}^2 b_{k+1}^2 <= b_k^4 reduces to (k-1)^2 (k+2) <= k^3 after dividing by k(k+1)^2
    const unsigned __int128 kk = k;
    return (kk - 1) * (kk - 1) * (kk + 2) <= kk * kk * kk;
}

std::size_t block_first_index(const BlockJacobiSpec& spec, std::size_t i) {
    if (i < 1) throw DomainError("block index is 1-based");
    return static_cast<std::size_t>(spec.p) + (i - 1) * static_cast<std::size_t>(spec.m);
}

double block_log_entry(const BlockJacobiSpec& spec, std::size_t i, int r) {
    const long k = static_cast<long>(block_first_index(spec, i)) + r;
    return heun_log_weight(spec.p, spec.m, k);
}

BlockEntries block_entries(const BlockJacobiSpec& spec, std::size_t i) {
    if (spec.p < 1 || spec.m < 1) throw DomainError("block spec needs p, m >= 1");
    if (i < 1 || i > spec.blocks) throw DomainError("block index out of range");
    BlockEntries out;
    out.entries.resize(static_cast<std::size_t>(spec.m));
    for (int r = 0; r < spec.m; ++r) out.entries[r] = std::exp(block_log_entry(spec, i, r));
    const auto [lo, hi] = std::minmax_element(out.entries.begin(), out.entries.end());
    out.norm = *hi;
    out.inv_norm = 1.0 / *lo;
    return out;
}

BlockNormOnset block_norm_onset(const BlockJacobiSpec& spec) {
    if (spec.blocks < 3) throw DomainError("block norm onset needs at least 3 blocks");
    // entries increase with r, so log max = entry m-1 and log min = entry 0
    auto log_max = [&](std::size_t i) { return block_log_entry(spec, i, spec.m - 1); };
    auto log_min = [&](std::size_t i) { return block_log_entry(spec, i, 0); };
    constexpr double slack = 1e-12;
    BlockNormOnset out;
    bool exact_ok = true, simple_ok = true;
    for (std::size_t i = spec.blocks - 1; i >= 2; --i) {
        const double lhs = log_max(i - 1) + log_max(i + 1);
        if (exact_ok && lhs <= 2.0 * log_min(i) + slack * std::abs(lhs))
            out.exact_from = i;
        else
            exact_ok = false;
        if (simple_ok && lhs <= 2.0 * log_max(i) + slack * std::abs(lhs))
            out.simplified_from = i;
        else
            simple_ok = false;
        if (!exact_ok && !simple_ok) break;
    }
    return out;
}

} // namespace gribov
