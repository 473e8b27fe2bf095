#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace covest;

namespace {
Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace

TEST_CASE("herm_eig on fixed matrices", "[numerics]") {
  SECTION("identity") {
    auto eig = herm_eig(Matrix::Identity(2, 2));
    REQUIRE(eig.eigenvalues(0) == Catch::Approx(1.0));
    REQUIRE(eig.eigenvalues(1) == Catch::Approx(1.0));
    REQUIRE((eig.eigenvectors.adjoint() * eig.eigenvectors - Matrix::Identity(2, 2)).norm() <
            1e-10);
  }
  SECTION("Pauli Z has ascending eigenvalues -1, 1") {
    auto eig = herm_eig(pauli_z());
    REQUIRE(eig.eigenvalues(0) == Catch::Approx(-1.0));
    REQUIRE(eig.eigenvalues(1) == Catch::Approx(1.0));
  }
  SECTION("rank-one projector (I + X)/2") {
    auto eig = herm_eig((Matrix::Identity(2, 2) + pauli_x()) / 2.0);
    REQUIRE(eig.eigenvalues(0) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(eig.eigenvalues(1) == Catch::Approx(1.0));
  }
  SECTION("non-Hermitian input is rejected") {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    REQUIRE_THROWS_AS(herm_eig(m), NotHermitian);
  }
  SECTION("non-square input is rejected") {
    REQUIRE_THROWS_AS(herm_eig(Matrix::Zero(2, 3)), NotHermitian);
  }
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices", "[numerics]") {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 8, 16}) {
    for (int trial = 0; trial < 5; ++trial) {
      Matrix m = test::random_hermitian(n, rng);
      auto eig = herm_eig(m);
      Matrix lambda = eig.eigenvalues.cast<Complex>().asDiagonal();
      double residual = (m - eig.eigenvectors * lambda * eig.eigenvectors.adjoint()).norm();
      REQUIRE(residual <= 1e-10 * std::max(1.0, m.norm()));
      REQUIRE((eig.eigenvectors.adjoint() * eig.eigenvectors - Matrix::Identity(n, n)).norm() <=
              1e-10);
      for (int i = 1; i < n; ++i) REQUIRE(eig.eigenvalues(i) >= eig.eigenvalues(i - 1));
    }
  }
}

TEST_CASE("pinv_sqrt on fixed matrices", "[numerics]") {
  SECTION("identity maps to identity") {
    REQUIRE((pinv_sqrt(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() < 1e-12);
  }
  SECTION("diag(4, 0) maps to diag(1/2, 0)") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 4.0;
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 0.5;
    REQUIRE((pinv_sqrt(m) - expected).norm() < 1e-12);
  }
  SECTION("(1/2) I maps to sqrt(2) I") {
    Matrix m = 0.5 * Matrix::Identity(2, 2);
    REQUIRE((pinv_sqrt(m) - std::sqrt(2.0) * Matrix::Identity(2, 2)).norm() < 1e-12);
  }
  SECTION("negative eigenvalue is rejected") {
    Matrix m = -Matrix::Identity(2, 2);
    REQUIRE_THROWS_AS(pinv_sqrt(m), NegativeEigenvalue);
  }
}

TEST_CASE("pinv_sqrt conjugation gives the support projector", "[numerics]") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 4 + trial % 3;
    Matrix a = test::random_matrix(n, n / 2 + 1, rng);
    Matrix m = a * a.adjoint();  // PSD, generically rank n/2+1
    Matrix root_inv = pinv_sqrt(m);
    REQUIRE(hermiticity_defect(root_inv) < 1e-9);
    REQUIRE((root_inv * m * root_inv - support_projector(m)).norm() <= 1e-9);
  }
}

TEST_CASE("kron fixed values and algebra", "[numerics]") {
  SECTION("identity times identity") {
    REQUIRE((kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) - Matrix::Identity(4, 4))
                .norm() < 1e-15);
  }
  SECTION("Z tensor I is diag(1,1,-1,-1)") {
    Matrix expected = Matrix::Zero(4, 4);
    expected.diagonal() << 1, 1, -1, -1;
    REQUIRE((kron(pauli_z(), Matrix::Identity(2, 2)) - expected).norm() < 1e-15);
  }
  SECTION("X tensor X is the anti-diagonal") {
    Matrix expected = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) expected(i, 3 - i) = 1.0;
    REQUIRE((kron(pauli_x(), pauli_x()) - expected).norm() < 1e-15);
  }
  SECTION("associativity and mixed product on random inputs") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 4; ++trial) {
      for (int n : {2, 3}) {
        Matrix a = test::random_matrix(n, n, rng), b = test::random_matrix(n, n, rng);
        Matrix c = test::random_matrix(n, n, rng), d = test::random_matrix(n, n, rng);
        REQUIRE((kron(kron(a, b), c) - kron(a, kron(b, c))).norm() <= 1e-12);
        REQUIRE((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm() <= 1e-12);
      }
    }
  }
}
