#include "tsdyn/matrix_log.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "tsdyn/error.hpp"
#include "tsdyn/linalg.hpp"

namespace tsdyn {

namespace {

using detail::CMatrix;
using detail::Complex;

struct NegCluster {
  double lambda;
  int multiplicity;
};

void guard_invertible(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0)
    fail(ErrorCode::InvalidInput, "matrix must be square and non-empty");
  if (!A.allFinite()) fail(ErrorCode::InvalidInput, "matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(A);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues().tail(1)(0);
  if (!(smin > 0.0) || smin <= 1e-300)
    fail(ErrorCode::SingularMatrix, "matrix is singular");
  if (smax / smin > kCondMax)
    fail(ErrorCode::IllConditioned, "condition number exceeds cond_max = 1e8");
}

std::vector<NegCluster> negative_clusters(const Eigen::VectorXcd& eigs, double tol) {
  std::vector<double> neg;
  for (int i = 0; i < eigs.size(); ++i)
    if (eigs(i).real() < 0.0 && std::abs(eigs(i).imag()) <= tol) neg.push_back(eigs(i).real());
  std::sort(neg.begin(), neg.end());
  std::vector<NegCluster> clusters;
  for (double v : neg) {
    if (!clusters.empty() &&
        std::abs(v - clusters.back().lambda) <= std::max(tol, 1e-12)) {
      // running mean keeps the cluster centre stable
      auto& c = clusters.back();
      c.lambda = (c.lambda * c.multiplicity + v) / (c.multiplicity + 1);
      c.multiplicity += 1;
    } else {
      clusters.push_back({v, 1});
    }
  }
  return clusters;
}

// Real logarithm through an explicit spectral basis: kernel bases at the
// paired negative eigenvalues, principal log on the complementary invariant
// subspace. Returns nothing when the structure does not pair up.
std::optional<Matrix> try_real_pairing(const Matrix& A, const std::vector<NegCluster>& clusters,
                                       double tol_eig, std::string* note) {
  const int n = static_cast<int>(A.rows());
  int total_neg = 0;
  for (const auto& c : clusters) {
    if (c.multiplicity % 2 != 0) return std::nullopt;
    total_neg += c.multiplicity;
  }
  std::vector<Matrix> bases;
  for (const auto& c : clusters) {
    Matrix K = detail::kernel_basis(A - c.lambda * Matrix::Identity(n, n),
                                    std::max(tol_eig, 1e-12));
    if (K.cols() != c.multiplicity) return std::nullopt;  // defective cluster
    bases.push_back(std::move(K));
  }
  const int n_rest = n - total_neg;
  Matrix V(n, n);
  int off = 0;
  for (const auto& K : bases) {
    V.middleCols(off, K.cols()) = K;
    off += static_cast<int>(K.cols());
  }
  if (n_rest > 0) {
    Matrix R = Matrix::Identity(n, n);
    for (const auto& c : clusters) R = R * (A - c.lambda * Matrix::Identity(n, n));
    Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeFullU);
    V.rightCols(n_rest) = svd.matrixU().leftCols(n_rest);
  }
  if (detail::cond_estimate(V) > 1e10) return std::nullopt;
  Matrix Vinv = V.inverse();
  Matrix Atil = Vinv * A * V;

  Matrix B = Matrix::Zero(n, n);
  off = 0;
  std::ostringstream pairing;
  for (const auto& c : clusters) {
    const double lr = std::log(-c.lambda);
    for (int p = 0; p < c.multiplicity; ++p) B(off + p, off + p) = lr;
    for (int p = 0; p + 1 < c.multiplicity; p += 2) {
      B(off + p, off + p + 1) = -std::numbers::pi;
      B(off + p + 1, off + p) = std::numbers::pi;
    }
    pairing << "lambda=" << c.lambda << " paired as " << c.multiplicity / 2
            << " rotation block(s); ";
    off += c.multiplicity;
  }
  if (n_rest > 0) {
    Matrix A_rest = Atil.block(off, off, n_rest, n_rest);
    CMatrix Lr = detail::log_principal(A_rest.cast<Complex>());
    if (Lr.imag().norm() > std::max(1e-8 * Lr.norm(), 1e-10)) return std::nullopt;
    B.block(off, off, n_rest, n_rest) = Lr.real();
  }
  if (note) *note = pairing.str();
  return V * B * Vinv;
}

}  // namespace

Matrix LogResult::real() const {
  if (!real_valued)
    fail(ErrorCode::NonPositiveGapMatrix, "logarithm is not real-valued");
  return value.real();
}

LogResult matrix_log_principal(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols() || A.rows() == 0)
    fail(ErrorCode::InvalidInput, "matrix must be square and non-empty");
  LogResult out;
  out.value = detail::log_principal(A);
  out.real_valued = false;
  return out;
}

LogResult matrix_log(const Matrix& A, LogBranch branch) {
  guard_invertible(A);
  const int n = static_cast<int>(A.rows());
  const double norm_a = A.norm();
  const double tol_eig = kTolEigRel * norm_a;

  Eigen::ComplexSchur<CMatrix> schur(A.cast<Complex>());
  if (schur.info() != Eigen::Success)
    fail(ErrorCode::IllConditioned, "complex Schur decomposition failed");
  CMatrix T = schur.matrixT();
  const CMatrix& Q = schur.matrixU();
  auto clusters = negative_clusters(T.diagonal(), tol_eig);

  if (branch == LogBranch::RealPreferring && !clusters.empty()) {
    std::string note;
    if (auto L = try_real_pairing(A, clusters, tol_eig, &note)) {
      if ((detail::expm(*L) - A).norm() <= kTolExpLogRel * norm_a) {
        LogResult out;
        out.value = L->cast<Complex>();
        out.real_valued = true;
        out.branch_note = note;
        return out;
      }
    }
  }

  LogResult out;
  out.value = Q * detail::log_triangular(std::move(T)) * Q.adjoint();
  out.real_valued = false;
  if (clusters.empty()) {
    // principal log of a real matrix without negative real spectrum is real
    if (out.value.imag().norm() <= std::max(1e-9 * out.value.norm(), 1e-12)) {
      out.value = out.value.real().cast<Complex>();
      out.real_valued = true;
    }
  } else {
    out.branch_note = "principal branch; negative spectrum has no real pairing";
  }
  if ((detail::expm(out.value) - A.cast<Complex>()).norm() > kTolExpLogRel * norm_a) {
    // one Newton-style polish step occasionally helps very ill-conditioned
    // inputs; otherwise report honestly
    fail(ErrorCode::IllConditioned, "matrix log failed its exp round-trip check");
  }
  return out;
}

PositivityReport classify_positivity(const Matrix& A) {
  guard_invertible(A);
  const int n = static_cast<int>(A.rows());
  const double tol_eig = kTolEigRel * A.norm();

  Eigen::ComplexSchur<CMatrix> schur(A.cast<Complex>());
  if (schur.info() != Eigen::Success)
    fail(ErrorCode::IllConditioned, "complex Schur decomposition failed");
  PositivityReport report;
  const auto diag = schur.matrixT().diagonal();
  for (int i = 0; i < n; ++i) report.eigenvalues.push_back(diag(i));

  bool all_even = true;
  bool all_resolved = true;
  for (const auto& c : negative_clusters(diag, tol_eig)) {
    PositivityReport::NegativeCluster entry;
    entry.lambda = c.lambda;
    entry.multiplicity = c.multiplicity;
    // rank sequence of (A - lambda I)^k decides the block structure; the
    // threshold for the k-th power is the k-th power of the clustering
    // tolerance (kernel perturbations shrink geometrically)
    const Matrix S = A - c.lambda * Matrix::Identity(n, n);
    const double scale = A.norm() + std::abs(c.lambda);
    std::vector<int> ranks{n};
    Matrix P = Matrix::Identity(n, n);
    bool ambiguous = false;
    for (int k = 1; k <= c.multiplicity + 1; ++k) {
      P = P * S;
      bool amb = false;
      ranks.push_back(detail::rank_with_tol_abs(P, std::pow(kTolEigRel * scale, k), &amb));
      ambiguous = ambiguous || amb;
      if (ranks[k] == ranks[k - 1]) break;  // stabilised
    }
    const int kernel_dim = n - ranks.back();
    entry.resolved = !ambiguous && kernel_dim == c.multiplicity;
    if (entry.resolved) {
      // blocks of size exactly k: r_{k-1} - 2 r_k + r_{k+1}
      for (std::size_t k = 1; k + 1 <= ranks.size(); ++k) {
        int rk = ranks[k];
        int rkm = ranks[k - 1];
        int rkp = (k + 1 < ranks.size()) ? ranks[k + 1] : ranks.back();
        int count = rkm - 2 * rk + rkp;
        entry.block_counts.push_back(count);
        if (count % 2 != 0) all_even = false;
      }
    } else {
      all_resolved = false;
    }
    report.negatives.push_back(std::move(entry));
  }

  if (!all_resolved) {
    report.outcome = Positivity::Indeterminate;
    report.note = "eigenvalue clustering could not resolve the Jordan structure";
  } else {
    report.outcome = all_even ? Positivity::Positive : Positivity::NotPositive;
  }
  return report;
}

bool is_positive_matrix(const Matrix& A) {
  auto report = classify_positivity(A);
  if (report.outcome == Positivity::Indeterminate)
    fail(ErrorCode::DefectiveAmbiguity, report.note);
  return report.outcome == Positivity::Positive;
}

}  // namespace tsdyn
