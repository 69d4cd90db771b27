#include "xxzloc/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "xxzloc/errors.hpp"

namespace xxzloc {

double asymmetry(const Matrix& A) {
  if (A.rows() != A.cols()) return INFINITY;
  if (A.size() == 0) return 0.0;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  return (A - A.transpose()).cwiseAbs().maxCoeff() / scale;
}

EigenDecomposition eig_sym(const Matrix& A) {
  const double asym = asymmetry(A);
  if (!(asym <= 1e-13)) {
    throw DomainError(fmt::format("eig_sym: input not symmetric (relative asymmetry {:.3e})", asym));
  }
  EigenDecomposition d;
  if (A.rows() == 0) return d;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalRefusal("eig_sym: QR iteration did not converge");
  d.values = solver.eigenvalues();
  d.vectors = solver.eigenvectors();
  d.norm = std::max(std::abs(d.values(0)), std::abs(d.values(d.values.size() - 1)));
  return d;
}

std::vector<SpectralCluster> spectral_clusters(const EigenDecomposition& d, double tol) {
  std::vector<SpectralCluster> out;
  const Index n = d.values.size();
  const double gap = tol * std::max(1.0, d.norm);
  Index start = 0;
  for (Index k = 1; k <= n; ++k) {
    if (k == n || d.values(k) - d.values(k - 1) > gap) {
      double sum = 0.0;
      for (Index j = start; j < k; ++j) sum += d.values(j);
      out.push_back({sum / static_cast<double>(k - start), start, k});
      start = k;
    }
  }
  return out;
}

Matrix matrix_function(const EigenDecomposition& d, const std::function<double(double)>& f) {
  Vector fv(d.values.size());
  for (Index k = 0; k < fv.size(); ++k) fv(k) = f(d.values(k));
  return d.vectors * fv.asDiagonal() * d.vectors.transpose();
}

CMatrix matrix_function_complex(const EigenDecomposition& d,
                                const std::function<cplx(double)>& f) {
  CVector fv(d.values.size());
  for (Index k = 0; k < fv.size(); ++k) fv(k) = f(d.values(k));
  const CMatrix V = d.vectors.cast<cplx>();
  return V * fv.asDiagonal() * V.transpose();
}

ShiftedSolve::ShiftedSolve(const Matrix& A, cplx z) {
  if (A.rows() != A.cols()) throw DomainError("shifted solve needs a square matrix");
  CMatrix M = A.cast<cplx>();
  M.diagonal().array() -= z;
  lu_.compute(M);
  rcond_ = A.rows() ? lu_.rcond() : 1.0;
  if (!std::isfinite(rcond_)) rcond_ = 0.0;
}

CVector ShiftedSolve::column(Index y) const {
  if (near_singular()) {
    throw NumericalRefusal(fmt::format("near-singular shift (rcond {:.3e})", rcond_));
  }
  CVector e = CVector::Zero(lu_.rows());
  e(y) = 1.0;
  return lu_.solve(e);
}

CMatrix ShiftedSolve::inverse() const {
  if (near_singular()) {
    throw NumericalRefusal(fmt::format("near-singular shift (rcond {:.3e})", rcond_));
  }
  return lu_.inverse();
}

CVector solve_shifted(const Matrix& A, cplx z, Index y) {
  if (y < 0 || y >= A.rows()) throw DomainError("right-hand side index out of range");
  return ShiftedSolve(A, z).column(y);
}

double operator_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  const Matrix gram = A.rows() <= A.cols() ? Matrix(A * A.transpose()) : Matrix(A.transpose() * A);
  Eigen::SelfAdjointEigenSolver<Matrix> s(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, s.eigenvalues().maxCoeff()));
}

double operator_norm(const CMatrix& A) {
  if (A.size() == 0) return 0.0;
  const CMatrix gram = A.rows() <= A.cols() ? CMatrix(A * A.adjoint()) : CMatrix(A.adjoint() * A);
  Eigen::SelfAdjointEigenSolver<CMatrix> s(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, s.eigenvalues().maxCoeff()));
}

}  // namespace xxzloc
