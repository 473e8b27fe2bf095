#pragma once

#include <random>

#include "covest/covest.hpp"

namespace covest::test {

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

inline Matrix random_hermitian(int n, std::mt19937_64& rng) {
  Matrix a = random_matrix(n, n, rng);
  return (a + a.adjoint()) / 2.0;
}

inline Matrix random_psd(int n, std::mt19937_64& rng) {
  Matrix a = random_matrix(n, n, rng);
  return a * a.adjoint();
}

inline Matrix random_density(int n, std::mt19937_64& rng) {
  Matrix p = random_psd(n, rng);
  return p / p.trace().real();
}

inline Matrix random_unitary(int n, std::mt19937_64& rng) {
  Matrix a = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the result is deterministic per seed.
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0);
  }
  return q;
}

// Random POVM with `outcomes` elements: normalize random PSD operators by
// the inverse square root of their sum.
inline std::vector<Matrix> random_povm(int dim, int outcomes, std::mt19937_64& rng) {
  std::vector<Matrix> raw;
  Matrix sum = Matrix::Zero(dim, dim);
  for (int i = 0; i < outcomes; ++i) {
    raw.push_back(random_psd(dim, rng));
    sum += raw.back();
  }
  Matrix correct = pinv_sqrt(sum);
  std::vector<Matrix> povm;
  for (const Matrix& m : raw) povm.push_back(correct * m * correct);
  return povm;
}

}  // namespace covest::test
