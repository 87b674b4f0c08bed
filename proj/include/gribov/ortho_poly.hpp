#pragma once

#include "gribov/basis_ops.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gribov {

using BigInt = boost::multiprecision::cpp_int;

// Polynomials of the first and second kind for the Jacobi-Gribov matrix (zero
// diagonal, b_n = n sqrt(n+1)): P_1 = 1, P_2 = x/b_1, Q_1 = 0, Q_2 = 1/b_1,
// b_n y_{n+1} = x y_n - b_{n-1} y_{n-1}.
struct FirstSecond {
    cplx P;
    cplx Q;
};

FirstSecond first_second_eval(std::size_t n, cplx x);

// Entries 1..n_max (index 0 unused).
struct FirstSecondTable {
    std::vector<cplx> P;
    std::vector<cplx> Q;
};

FirstSecondTable first_second_sequence(std::size_t n_max, cplx x);

// |b_n (P_n Q_{n+1} - P_{n+1} Q_n) - 1|
double wronskian_residual(std::size_t n, cplx x);

// |b_{n-1} P_{n-1} + b_n P_{n+1} - x P_n|, n >= 2
double recurrence_residual(std::size_t n, cplx x);

// e^{u^2/2} * integral_u^inf e^{-s^2/2} ds, u >= 0.
double phi_tail(double u);

enum class PolyKind { first, second, kouba_P, kouba_Q, plasma_P, plasma_Q };

std::string to_string(PolyKind kind);
std::optional<PolyKind> parse_poly_kind(const std::string& name);

// Integer-coefficient polynomial, coefficients in ascending degree.
struct PolySeq {
    PolyKind kind = PolyKind::kouba_P;
    int n = 0;
    std::vector<BigInt> coeffs;

    int degree() const;
    double eval(double x) const;
};

struct KoubaPair {
    PolySeq P;
    PolySeq Q;
};

// P_{n+1} = x P_n + P_n', Q_{n+1} = P_n + Q_n' from (1, 0); 0 <= n <= 60.
KoubaPair kouba_polys(int n);

struct PlasmaResult {
    PolySeq P;
    PolySeq Q;
    BigInt identity_value;  // Q_{n+1} P_n - P_{n+1} Q_n
};

// y_{n+1} = 2x y_n + 2n y_{n-1} with P: (1, 2x), Q: (0, 1); 0 <= n <= 20.
// Throws IdentityViolation if Q_{n+1} P_n - P_{n+1} Q_n is not constant.
PlasmaResult plasma_polys(int n);

} // namespace gribov
