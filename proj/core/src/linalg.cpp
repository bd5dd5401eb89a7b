#include "tsdyn/linalg.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <vector>

#include "tsdyn/error.hpp"

namespace tsdyn::detail {

Matrix expm(const Matrix& A) { return A.exp(); }
CMatrix expm(const CMatrix& A) { return A.exp(); }

double cond_estimate(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  double smin = svd.singularValues().tail(1)(0);
  double smax = svd.singularValues()(0);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double smallest_singular_value(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues().tail(1)(0);
}

CMatrix sqrt_triangular(const CMatrix& T) {
  const int n = static_cast<int>(T.rows());
  CMatrix S = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) S(i, i) = std::sqrt(T(i, i));
  for (int d = 1; d < n; ++d) {
    for (int i = 0; i + d < n; ++i) {
      int j = i + d;
      Complex acc = T(i, j);
      for (int k = i + 1; k < j; ++k) acc -= S(i, k) * S(k, j);
      Complex denom = S(i, i) + S(j, j);
      if (std::abs(denom) == 0.0)
        fail(ErrorCode::SingularMatrix, "triangular sqrt: zero diagonal sum");
      S(i, j) = acc / denom;
    }
  }
  return S;
}

CMatrix log_triangular(CMatrix T) {
  const int n = static_cast<int>(T.rows());
  for (int i = 0; i < n; ++i)
    if (std::abs(T(i, i)) == 0.0)
      fail(ErrorCode::SingularMatrix, "matrix log of a singular matrix");
  const CMatrix I = CMatrix::Identity(n, n);
  int sqrts = 0;
  while ((T - I).norm() > 0.25 && sqrts < 100) {
    T = sqrt_triangular(T);
    ++sqrts;
  }
  const CMatrix X = T - I;
  // log(I + X) by its power series; ||X|| <= 1/4 so 32 terms reach ~1e-21
  CMatrix term = X;
  CMatrix acc = X;
  for (int j = 2; j <= 32; ++j) {
    term = term * X;
    acc += ((j % 2 == 0) ? -1.0 : 1.0) / static_cast<double>(j) * term;
  }
  return std::ldexp(1.0, sqrts) * acc;
}

CMatrix log_principal(const CMatrix& A) {
  Eigen::ComplexSchur<CMatrix> schur(A);
  if (schur.info() != Eigen::Success)
    fail(ErrorCode::IllConditioned, "complex Schur decomposition failed");
  CMatrix T = schur.matrixT();
  const CMatrix& Q = schur.matrixU();
  return Q * log_triangular(std::move(T)) * Q.adjoint();
}

void swap_schur_adjacent(CMatrix& T, CMatrix& Q, int i) {
  const Complex a = T(i, i);
  const Complex b = T(i, i + 1);
  const Complex c = T(i + 1, i + 1);
  if (std::abs(c - a) == 0.0) return;  // equal eigenvalues: nothing to move
  // eigenvector of [[a, b], [0, c]] for eigenvalue c
  Complex v0 = b, v1 = c - a;
  double nv = std::sqrt(std::norm(v0) + std::norm(v1));
  v0 /= nv;
  v1 /= nv;
  Eigen::Matrix2cd G;
  G << v0, -std::conj(v1), v1, std::conj(v0);
  const int n = static_cast<int>(T.rows());
  T.block(0, i, n, 2) = T.block(0, i, n, 2) * G;
  T.block(i, 0, 2, n) = G.adjoint() * T.block(i, 0, 2, n);
  Q.block(0, i, n, 2) = Q.block(0, i, n, 2) * G;
  T(i + 1, i) = 0.0;
}

int order_schur(CMatrix& T, CMatrix& Q, const std::function<bool(Complex)>& select) {
  const int n = static_cast<int>(T.rows());
  int target = 0;
  for (int j = 0; j < n; ++j) {
    if (select(T(j, j))) {
      for (int k = j; k > target; --k) swap_schur_adjacent(T, Q, k - 1);
      ++target;
    }
  }
  return target;
}

CMatrix sylvester_triangular(const CMatrix& T11, const CMatrix& T22, const CMatrix& C) {
  const int r = static_cast<int>(T11.rows());
  const int m = static_cast<int>(T22.rows());
  CMatrix X = CMatrix::Zero(r, m);
  for (int j = 0; j < m; ++j) {
    for (int i = r - 1; i >= 0; --i) {
      Complex acc = C(i, j);
      for (int k = i + 1; k < r; ++k) acc -= T11(i, k) * X(k, j);
      for (int k = 0; k < j; ++k) acc += X(i, k) * T22(k, j);
      Complex denom = T11(i, i) - T22(j, j);
      if (std::abs(denom) < 1e-14 * (std::abs(T11(i, i)) + std::abs(T22(j, j)) + 1.0))
        fail(ErrorCode::IllConditioned, "Sylvester solve: spectra not separated");
      X(i, j) = acc / denom;
    }
  }
  return X;
}

SpectralSplit spectral_split(const Matrix& A, const std::function<bool(Complex)>& select) {
  const int n = static_cast<int>(A.rows());
  Eigen::ComplexSchur<CMatrix> schur(A.cast<Complex>());
  if (schur.info() != Eigen::Success)
    fail(ErrorCode::IllConditioned, "complex Schur decomposition failed");
  CMatrix T = schur.matrixT();
  CMatrix Q = schur.matrixU();
  int r = order_schur(T, Q, select);

  SpectralSplit out;
  out.rank = r;
  if (r == 0) {
    out.projector = Matrix::Zero(n, n);
    out.range_basis = Matrix::Zero(n, 0);
    out.kernel_basis = Matrix::Identity(n, n);
    return out;
  }
  if (r == n) {
    out.projector = Matrix::Identity(n, n);
    out.range_basis = Matrix::Identity(n, n);
    out.kernel_basis = Matrix::Zero(n, 0);
    return out;
  }
  // P = Q [[I, -X], [0, 0]] Q^* with T11 X - X T22 = -T12
  CMatrix X = sylvester_triangular(T.topLeftCorner(r, r), T.bottomRightCorner(n - r, n - r),
                                   -T.topRightCorner(r, n - r));
  CMatrix P_T = CMatrix::Zero(n, n);
  P_T.topLeftCorner(r, r) = CMatrix::Identity(r, r);
  P_T.topRightCorner(r, n - r) = -X;
  CMatrix P = Q * P_T * Q.adjoint();
  out.imag_residue = P.imag().norm();
  out.projector = P.real();

  Eigen::ColPivHouseholderQR<Matrix> qr(out.projector);
  Matrix full = qr.householderQ();
  out.range_basis = full.leftCols(r);
  Matrix complement = Matrix::Identity(n, n) - out.projector;
  Eigen::ColPivHouseholderQR<Matrix> qr2(complement);
  Matrix full2 = qr2.householderQ();
  out.kernel_basis = full2.leftCols(n - r);
  return out;
}

int rank_with_tol(const Matrix& M, double tol_rel, bool* ambiguous) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  if (ambiguous) *ambiguous = false;
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double threshold = tol_rel * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
    if (ambiguous && sv(i) > 0.05 * threshold && sv(i) < 20.0 * threshold) *ambiguous = true;
  }
  return rank;
}

int rank_with_tol_abs(const Matrix& M, double tol_abs, bool* ambiguous) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  if (ambiguous) *ambiguous = false;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol_abs) ++rank;
    if (ambiguous && sv(i) > 0.05 * tol_abs && sv(i) < 20.0 * tol_abs) *ambiguous = true;
  }
  return rank;
}

Matrix kernel_basis(const Matrix& M, double tol_abs) {
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int k = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol_abs) ++k;
  return svd.matrixV().rightCols(k);
}

Matrix rk4_transition(const std::function<Matrix(double)>& A, int n, double s0, double s1,
                      double h) {
  Matrix M = Matrix::Identity(n, n);
  if (s1 <= s0) return M;
  int steps = std::max(1, static_cast<int>(std::ceil((s1 - s0) / h)));
  double dt = (s1 - s0) / steps;
  double s = s0;
  for (int i = 0; i < steps; ++i) {
    Matrix k1 = A(s) * M;
    Matrix k2 = A(s + 0.5 * dt) * (M + 0.5 * dt * k1);
    Matrix k3 = A(s + 0.5 * dt) * (M + 0.5 * dt * k2);
    Matrix k4 = A(s + dt) * (M + dt * k3);
    M += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += dt;
  }
  return M;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace tsdyn::detail
