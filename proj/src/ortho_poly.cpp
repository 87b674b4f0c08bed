#include "gribov/ortho_poly.hpp"

#include "gribov/errors.hpp"

#include <cmath>
#include <numbers>

namespace gribov {

namespace {

using Poly = std::vector<BigInt>;

void trim(Poly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

Poly add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    trim(out);
    return out;
}

Poly times_x(const Poly& a) {
    Poly out(a.size() + 1);
    for (std::size_t i = 0; i < a.size(); ++i) out[i + 1] = a[i];
    trim(out);
    return out;
}

Poly scale(const Poly& a, const BigInt& s) {
    Poly out(a);
    for (auto& c : out) c *= s;
    trim(out);
    return out;
}

Poly derivative(const Poly& a) {
    if (a.size() <= 1) return Poly{0};
    Poly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<long>(i);
    trim(out);
    return out;
}

Poly multiply(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

PolySeq make(PolyKind kind, int n, Poly coeffs) {
    PolySeq s;
    s.kind = kind;
    s.n = n;
    s.coeffs = std::move(coeffs);
    return s;
}

// phi(u) = sum c_k u^k with c_0 = sqrt(pi/2), c_1 = -1, c_{k+1} = c_{k-1}/(k+1),
// read off from phi' = u phi - 1.
double phi_series(double u) {
    double c_prev = std::sqrt(std::numbers::pi / 2.0), c = -1.0;
    double sum = c_prev + c * u;
    double power = u;
    for (int k = 1; k < 400; ++k) {
        const double next = c_prev / static_cast<double>(k + 1);
        power *= u;
        const double term = next * power;
        sum += term;
        c_prev = c;
        c = next;
        if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 4) break;
    }
    return sum;
}

// 1/(u + 1/(u + 2/(u + 3/(u + ...)))) by modified Lentz.
double phi_continued_fraction(double u) {
    constexpr double tiny = 1e-300;
    double f = u, c = u, d = 0.0;
    for (int k = 1; k < 5000; ++k) {
        const double a = static_cast<double>(k);
        d = u + a * d;
        if (d == 0.0) d = tiny;
        c = u + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) <= 1e-16) break;
    }
    return 1.0 / f;
}

} // namespace

FirstSecondTable first_second_sequence(std::size_t n_max, cplx x) {
    if (n_max < 1) throw DomainError("polynomial index must be >= 1");
    FirstSecondTable t;
    t.P.assign(n_max + 1, 0.0);
    t.Q.assign(n_max + 1, 0.0);
    t.P[1] = 1.0;
    t.Q[1] = 0.0;
    if (n_max >= 2) {
        t.P[2] = x / gribov_b(1);
        t.Q[2] = 1.0 / gribov_b(1);
    }
    for (std::size_t n = 2; n < n_max; ++n) {
        const double bn = gribov_b(n), bp = gribov_b(n - 1);
        t.P[n + 1] = (x * t.P[n] - bp * t.P[n - 1]) / bn;
        t.Q[n + 1] = (x * t.Q[n] - bp * t.Q[n - 1]) / bn;
    }
    return t;
}

FirstSecond first_second_eval(std::size_t n, cplx x) {
    const auto t = first_second_sequence(n, x);
    return {t.P[n], t.Q[n]};
}

double wronskian_residual(std::size_t n, cplx x) {
    const auto t = first_second_sequence(n + 1, x);
    return std::abs(gribov_b(n) * (t.P[n] * t.Q[n + 1] - t.P[n + 1] * t.Q[n]) - 1.0);
}

double recurrence_residual(std::size_t n, cplx x) {
    if (n < 2) throw DomainError("recurrence residual needs n >= 2");
    const auto t = first_second_sequence(n + 1, x);
    return std::abs(gribov_b(n - 1) * t.P[n - 1] + gribov_b(n) * t.P[n + 1] - x * t.P[n]);
}

double phi_tail(double u) {
    if (!(u >= 0.0)) throw DomainError("phi_tail needs u >= 0");
    if (std::isinf(u)) return 0.0;
    return u <= 2.0 ? phi_series(u) : phi_continued_fraction(u);
}

std::string to_string(PolyKind kind) {
    switch (kind) {
    case PolyKind::first: return "first";
    case PolyKind::second: return "second";
    case PolyKind::kouba_P: return "kouba_P";
    case PolyKind::kouba_Q: return "kouba_Q";
    case PolyKind::plasma_P: return "plasma_P";
    case PolyKind::plasma_Q: return "plasma_Q";
    }
    return "unknown";
}

std::optional<PolyKind> parse_poly_kind(const std::string& name) {
    for (auto k : {PolyKind::first, PolyKind::second, PolyKind::kouba_P, PolyKind::kouba_Q,
                   PolyKind::plasma_P, PolyKind::plasma_Q})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

int PolySeq::degree() const {
    for (std::size_t i = coeffs.size(); i-- > 0;)
        if (coeffs[i] != 0) return static_cast<int>(i);
    return -1;
}

double PolySeq::eval(double x) const {
    long double acc = 0.0L;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * x + coeffs[i].convert_to<long double>();
    return static_cast<double>(acc);
}

KoubaPair kouba_polys(int n) {
    if (n < 0 || n > 60) throw DomainError("kouba_polys needs 0 <= n <= 60");
    Poly P{1}, Q{0};
    for (int k = 0; k < n; ++k) {
        Poly nextP = add(times_x(P), derivative(P));
        Poly nextQ = add(P, derivative(Q));
        P = std::move(nextP);
        Q = std::move(nextQ);
    }
    return {make(PolyKind::kouba_P, n, P), make(PolyKind::kouba_Q, n, Q)};
}

PlasmaResult plasma_polys(int n) {
    if (n < 0 || n > 20) throw DomainError("plasma_polys needs 0 <= n <= 20");
    // y_0 .. y_{n+1} for both families
    std::vector<Poly> P{Poly{1}, Poly{0, 2}}, Q{Poly{0}, Poly{1}};
    for (int k = 1; k <= n; ++k) {
        P.push_back(add(scale(times_x(P[k]), 2), scale(P[k - 1], 2 * k)));
        Q.push_back(add(scale(times_x(Q[k]), 2), scale(Q[k - 1], 2 * k)));
    }
    Poly ident = add(multiply(Q[n + 1], P[n]), scale(multiply(P[n + 1], Q[n]), -1));
    trim(ident);
    if (ident.size() != 1)
        throw IdentityViolation("Q_{n+1}P_n - P_{n+1}Q_n is not constant for n = " +
                                std::to_string(n));
    PlasmaResult r;
    r.P = make(PolyKind::plasma_P, n, P[n]);
    r.Q = make(PolyKind::plasma_Q, n, Q[n]);
    r.identity_value = ident[0];
    return r;
}

} // namespace gribov
