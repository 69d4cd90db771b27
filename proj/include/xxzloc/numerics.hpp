#pragma once

// Dense symmetric kernels. Backed by Eigen: Householder tridiagonalization
// with implicit QR for eigenpairs, partial-pivot LU for shifted solves.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace xxzloc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
  double norm = 0.0;  // max |eigenvalue|
};

/// Largest relative asymmetry max|A - A^T| / max(1, max|A|).
double asymmetry(const Matrix& A);

/// Throws DomainError when A is not symmetric to 1e-13 relative.
EigenDecomposition eig_sym(const Matrix& A);

/// Eigenvalues within tol*max(1,|A|) of their neighbour share a cluster.
struct SpectralCluster {
  double value = 0.0;  // mean of the member eigenvalues
  Index first = 0;     // column range [first, last)
  Index last = 0;
};
std::vector<SpectralCluster> spectral_clusters(const EigenDecomposition& d, double tol = 1e-9);

/// V f(D) V^T.
Matrix matrix_function(const EigenDecomposition& d, const std::function<double(double)>& f);
CMatrix matrix_function_complex(const EigenDecomposition& d,
                                const std::function<cplx(double)>& f);

/// Factorization of A - z for repeated Green-function reads.
class ShiftedSolve {
 public:
  ShiftedSolve(const Matrix& A, cplx z);

  /// Reciprocal condition estimate of A - z.
  double rcond() const { return rcond_; }
  /// rcond below 1e-14: the shift sits on the spectrum to working precision.
  bool near_singular() const { return rcond_ < 1e-14; }

  /// The column G_z(., y). Throws NumericalRefusal when near_singular().
  CVector column(Index y) const;
  CMatrix inverse() const;

 private:
  Eigen::PartialPivLU<CMatrix> lu_;
  double rcond_ = 0.0;
};

CVector solve_shifted(const Matrix& A, cplx z, Index y);

/// Largest singular value, from the top eigenvalue of the Gram matrix.
double operator_norm(const Matrix& A);
double operator_norm(const CMatrix& A);

}  // namespace xxzloc
