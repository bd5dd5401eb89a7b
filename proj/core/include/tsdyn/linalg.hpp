#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>

namespace tsdyn::detail {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

Matrix expm(const Matrix& A);
CMatrix expm(const CMatrix& A);

/// sigma_max / sigma_min; +inf when numerically singular.
double cond_estimate(const Matrix& A);
double smallest_singular_value(const Matrix& A);

/// Principal square root of a nonsingular upper-triangular matrix.
CMatrix sqrt_triangular(const CMatrix& T);

/// Principal logarithm of a nonsingular upper-triangular matrix
/// (inverse scaling-and-squaring by square roots, then a log series).
CMatrix log_triangular(CMatrix T);

/// Principal logarithm of a nonsingular matrix via complex Schur form.
CMatrix log_principal(const CMatrix& A);

/// Swaps the adjacent diagonal entries i, i+1 of a complex Schur pair
/// (T upper triangular, Q unitary). No-op when the entries coincide.
void swap_schur_adjacent(CMatrix& T, CMatrix& Q, int i);

/// Reorders a complex Schur form so selected eigenvalues come first.
/// Returns how many were selected.
int order_schur(CMatrix& T, CMatrix& Q, const std::function<bool(Complex)>& select);

/// Solves T11 X - X T22 = C with T11, T22 upper triangular and disjoint
/// spectra (back substitution).
CMatrix sylvester_triangular(const CMatrix& T11, const CMatrix& T22, const CMatrix& C);

/// Spectral projector of a real matrix onto the invariant subspace of the
/// selected eigenvalues (selection must be closed under conjugation).
struct SpectralSplit {
  Matrix projector;     // oblique projector, range = selected subspace
  Matrix range_basis;   // orthonormal columns, n x rank
  Matrix kernel_basis;  // orthonormal columns spanning the complement, n x (n-rank)
  int rank = 0;
  double imag_residue = 0.0;  // size of the discarded imaginary part
};
SpectralSplit spectral_split(const Matrix& A, const std::function<bool(Complex)>& select);

/// Rank with relative singular-value threshold; flags near-threshold values.
int rank_with_tol(const Matrix& M, double tol_rel, bool* ambiguous = nullptr);

/// Rank against an absolute singular-value threshold.
int rank_with_tol_abs(const Matrix& M, double tol_abs, bool* ambiguous = nullptr);

/// Orthonormal basis of the (numerical) kernel of M.
Matrix kernel_basis(const Matrix& M, double tol_abs);

/// Transition matrix of M' = A(s) M from s0 to s1, classic RK4, step <= h.
Matrix rk4_transition(const std::function<Matrix(double)>& A, int n, double s0, double s1,
                      double h);

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tsdyn::detail
