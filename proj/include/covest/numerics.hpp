#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>

#include "covest/errors.hpp"

namespace covest {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace tol {
// All scenarios stay at dimension <= 64 and |G| <= 24, so accumulated
// rounding error sits far below these.
inline constexpr double structural = 1e-10;      // unitarity, reconstructions
inline constexpr double derived = 1e-9;          // identities chaining several ops
inline constexpr double exact = 1e-12;           // short algebraic identities
inline constexpr double psd = 1e-9;              // relative PSD admission
inline constexpr double rank_cutoff = 1e-10;     // relative rank threshold
inline constexpr double integer_residue = 1e-6;  // multiplicity rounding
}  // namespace tol

inline double frobenius(const Matrix& m) { return m.norm(); }

inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).norm();
}

inline bool is_finite(const Matrix& m) {
  return m.allFinite();
}

struct HermEigResult {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns, aligned with eigenvalues
};

// Eigendecomposition of a Hermitian matrix. The input is symmetrized before
// factorization; the pre-check bounds how much that can move it.
inline HermEigResult herm_eig(const Matrix& m, double tol_rel = tol::structural) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "matrix is " << m.rows() << "x" << m.cols();
    throw NotHermitian(os.str());
  }
  const double defect = hermiticity_defect(m);
  const double scale = std::max(1.0, m.norm());
  if (defect > tol_rel * scale) {
    std::ostringstream os;
    os << "hermiticity defect " << defect << " exceeds " << tol_rel * scale;
    throw NotHermitian(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("self-adjoint eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Inverse square root on the support: N = sum_{lambda > cut} lambda^{-1/2} P_lambda.
inline Matrix pinv_sqrt(const Matrix& m, double rank_tol = tol::rank_cutoff) {
  HermEigResult eig = herm_eig(m, tol::derived);
  const double lambda_max = eig.eigenvalues.size() ? eig.eigenvalues.maxCoeff() : 0.0;
  const double lambda_min = eig.eigenvalues.size() ? eig.eigenvalues.minCoeff() : 0.0;
  if (lambda_min < -tol::psd * std::max(1.0, lambda_max)) {
    std::ostringstream os;
    os << "min eigenvalue " << lambda_min << " with max " << lambda_max;
    throw NegativeEigenvalue(os.str());
  }
  const double cut = rank_tol * std::max(lambda_max, 0.0);
  RealVector inv_sqrt = RealVector::Zero(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i] > cut && eig.eigenvalues[i] > 0.0) {
      inv_sqrt[i] = 1.0 / std::sqrt(eig.eigenvalues[i]);
    }
  }
  return eig.eigenvectors * inv_sqrt.asDiagonal().toDenseMatrix().cast<Complex>() *
         eig.eigenvectors.adjoint();
}

// Projector onto the support of a PSD matrix.
inline Matrix support_projector(const Matrix& m, double rank_tol = tol::rank_cutoff) {
  HermEigResult eig = herm_eig(m, tol::derived);
  const double lambda_max = eig.eigenvalues.size() ? eig.eigenvalues.maxCoeff() : 0.0;
  const double cut = rank_tol * std::max(lambda_max, 0.0);
  Matrix proj = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i] > cut && eig.eigenvalues[i] > 0.0) {
      proj += eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
    }
  }
  return proj;
}

// Moore-Penrose pseudoinverse (SVD based), for general rectangular inputs.
inline Matrix pinv(const Matrix& m, double rank_tol = tol::rank_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double cut = rank_tol * (s.size() ? s.maxCoeff() : 0.0);
  RealVector inv = RealVector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cut && s[i] > 0.0) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal().toDenseMatrix().cast<Complex>() *
         svd.matrixU().adjoint();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Smallest eigenvalue of the Hermitian part; negative values quantify how
// far the matrix is from PSD.
inline double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
  return solver.eigenvalues().minCoeff();
}

}  // namespace covest
