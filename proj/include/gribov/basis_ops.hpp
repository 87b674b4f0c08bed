#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gribov {

using cplx = std::complex<double>;

// e: Fock basis z^n/sqrt(n!). u: its restriction y^n/sqrt(n!) to the
// negative imaginary axis.
enum class Basis { e, u };

// Finite coefficient list; entry j is the coefficient of basis element start + j.
class CoefficientVector {
public:
    CoefficientVector() = default;
    CoefficientVector(Basis basis, std::size_t start, std::vector<cplx> entries);

    static CoefficientVector unit(Basis basis, std::size_t index, cplx value = 1.0);

    Basis basis() const { return basis_; }
    std::size_t start() const { return start_; }
    std::size_t size() const { return entries_.size(); }
    // One past the last stored index.
    std::size_t end() const { return start_ + entries_.size(); }
    std::span<const cplx> entries() const { return entries_; }

    // Coefficient of basis element `index`; zero outside the stored range.
    cplx operator[](std::size_t index) const;

    double norm_squared() const;
    bool is_zero() const;

private:
    Basis basis_ = Basis::e;
    std::size_t start_ = 0;
    std::vector<cplx> entries_;
};

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b);
CoefficientVector operator*(cplx s, const CoefficientVector& v);

// max_k |a_k - b_k| over the union of the ranges.
double max_abs_difference(const CoefficientVector& a, const CoefficientVector& b);

struct OperatorParams {
    double mu = 0.0;
    double lambda = 0.0;
    int p = 1;
    int m = 1;
};

// b_k = k sqrt(k+1), off-diagonal of the Jacobi-Gribov matrix.
double gribov_b(std::size_t k);

// log of sqrt(k!(k+m)!)/(k-p)!, the up-shift weight of H^{p,m} on e_k (k >= p).
double heun_log_weight(int p, int m, long k);

CoefficientVector ladder_down(const CoefficientVector& v);
CoefficientVector ladder_up(const CoefficientVector& v);

// mu A*A + i lambda A*(A + A*)A on B_0 (start >= 1).
CoefficientVector gribov_apply(const OperatorParams& params, const CoefficientVector& v);

// A*^p (A^m + A*^m) A^p.
CoefficientVector heun_pm_apply(const OperatorParams& params, const CoefficientVector& v);

// Weighted backward shift e_k -> w_{k-1} e_{k-1}, w_{k-1} = sqrt((k-1)!(k-1-m)!)/(k-1-p)!;
// a negative factorial argument kills the term.
CoefficientVector shift_apply(const OperatorParams& params, const CoefficientVector& v);

// H_lambda on the u-basis: u_k -> lambda (b_k u_{k+1} - b_{k-1} u_{k-1}).
CoefficientVector imaginary_axis_apply(double lambda, const CoefficientVector& v);

} // namespace gribov
