#pragma once

#include <optional>
#include <sstream>
#include <vector>

#include "covest/tilde.hpp"

namespace covest {

// |A>> in row-major coordinates: entry (i, j) of A sits at i*d_K + j, so
// (A (x) I)|I>> = |A>> = (I (x) A^T)|I>> in the fixed product basis.
inline Vector double_ket(const Matrix& a) {
  Vector v(a.rows() * a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  }
  return v;
}

inline Matrix unket(const Vector& v, int d_h, int d_k) {
  if (v.size() != static_cast<Eigen::Index>(d_h) * d_k) {
    std::ostringstream os;
    os << "vector of length " << v.size() << " does not factor as " << d_h << "x" << d_k;
    throw ShapeMismatch(os.str());
  }
  Matrix a(d_h, d_k);
  for (int i = 0; i < d_h; ++i) {
    for (int j = 0; j < d_k; ++j) a(i, j) = v(i * d_k + j);
  }
  return a;
}

// Superposition of maximally entangled states across the tilde sectors:
// (+)_mu (c_mu / sqrt(d_mu)) |I_mu>>, with sum |c_mu|^2 = 1.
struct ClassState {
  std::vector<double> weights;   // p_mu = |c_mu|^2
  std::vector<Complex> phases;   // c_mu
  Vector state;                  // unit vector in the tilde space
};

inline ClassState class_state(const std::vector<Complex>& coefficients,
                              const TildeStructure& t) {
  if (static_cast<int>(coefficients.size()) != t.sector_count()) {
    throw BadProbability("coefficient count does not match sector count");
  }
  double total = 0.0;
  for (const Complex& c : coefficients) total += std::norm(c);
  if (std::abs(total - 1.0) > tol::derived) {
    std::ostringstream os;
    os << "squared coefficients sum to " << total;
    throw BadProbability(os.str());
  }
  ClassState cs;
  cs.phases = coefficients;
  cs.state = Vector::Zero(t.total_dim);
  for (int s = 0; s < t.sector_count(); ++s) {
    const TildeSector& sec = t.sectors[s];
    cs.weights.push_back(std::norm(coefficients[s]));
    cs.state.segment(sec.offset, sec.dim * sec.dim) =
        (coefficients[s] / std::sqrt(static_cast<double>(sec.dim))) *
        double_ket(Matrix::Identity(sec.dim, sec.dim));
  }
  return cs;
}

inline ClassState class_state(const std::vector<double>& weights, const TildeStructure& t) {
  std::vector<Complex> coefficients;
  for (double p : weights) {
    if (p < -tol::exact) {
      std::ostringstream os;
      os << "negative weight " << p;
      throw BadProbability(os.str());
    }
    coefficients.emplace_back(std::sqrt(std::max(p, 0.0)), 0.0);
  }
  return class_state(coefficients, t);
}

// Class vector |eta> = (+)_mu sqrt(d_mu) |I_mu>> and the rank-one seed it
// generates.
inline Vector class_seed_ket(const TildeStructure& t) {
  Vector eta = Vector::Zero(t.total_dim);
  for (const TildeSector& sec : t.sectors) {
    eta.segment(sec.offset, sec.dim * sec.dim) =
        std::sqrt(static_cast<double>(sec.dim)) *
        double_ket(Matrix::Identity(sec.dim, sec.dim));
  }
  return eta;
}

inline Matrix class_seed(const TildeStructure& t) {
  Vector eta = class_seed_ket(t);
  return eta * eta.adjoint();
}

inline double povm_completeness_defect(const std::vector<Matrix>& elements) {
  if (elements.empty()) throw ShapeMismatch("empty POVM");
  Matrix sum = Matrix::Zero(elements[0].rows(), elements[0].cols());
  for (const Matrix& e : elements) sum += e;
  return (sum - Matrix::Identity(sum.rows(), sum.cols())).norm();
}

inline double seed_completeness_defect(const Matrix& seed, const ProjectiveRep& rep) {
  Matrix sum = Matrix::Zero(rep.dim, rep.dim);
  for (int g = 0; g < rep.group->order; ++g) {
    sum += rep.at(g) * seed * rep.at(g).adjoint();
  }
  sum /= static_cast<double>(rep.group->order);
  return (sum - Matrix::Identity(rep.dim, rep.dim)).norm();
}

// Covariant POVM with the Haar weight folded in: P_g = U_g seed U_g^dag / |G|,
// so completeness is a plain sum to the identity.
struct CovariantPovm {
  Matrix seed;
  std::vector<Matrix> elements;
};

inline CovariantPovm covariant_povm(const Matrix& seed, const ProjectiveRep& rep,
                                    double tolerance = tol::derived) {
  if (seed.rows() != rep.dim || seed.cols() != rep.dim) {
    throw ShapeMismatch("seed does not match representation dimension");
  }
  double defect = seed_completeness_defect(seed, rep);
  if (defect > tolerance) {
    std::ostringstream os;
    os << "completeness defect " << defect;
    throw IncompleteSeed(os.str());
  }
  CovariantPovm povm;
  povm.seed = seed;
  for (int g = 0; g < rep.group->order; ++g) {
    povm.elements.push_back(rep.at(g) * seed * rep.at(g).adjoint() /
                            static_cast<double>(rep.group->order));
  }
  return povm;
}

inline double isotropy_defect(const Matrix& a, const TildeStructure& t) {
  double worst = 0.0;
  for (int g = 0; g < t.group->order; ++g) {
    Matrix action = tilde_conj_action(t, g);
    worst = std::max(worst, (action * a * action.adjoint() - a).norm());
  }
  return worst;
}

inline bool is_isotropic(const Matrix& a, const TildeStructure& t,
                         double tolerance = tol::derived) {
  return isotropy_defect(a, t) <= tolerance * std::max(1.0, a.norm());
}

// Group average under the combined action; a projection onto the isotropic
// operators that preserves trace and seed completeness.
inline Matrix isotropize(const Matrix& xi, const TildeStructure& t) {
  Matrix out = Matrix::Zero(t.total_dim, t.total_dim);
  for (int g = 0; g < t.group->order; ++g) {
    Matrix action = tilde_conj_action(t, g);
    out += action * xi * action.adjoint();
  }
  return out / static_cast<double>(t.group->order);
}

struct WeightedState {
  double weight = 0.0;
  Matrix state;  // density matrix (unit trace)
};

// Square-root measurement of an ensemble. Elements resolve the support
// projector of the average state; if that projector is not the identity the
// complement is appended as a discard outcome.
inline std::vector<Matrix> srm(const std::vector<WeightedState>& ensemble,
                               double rank_tol = tol::rank_cutoff) {
  if (ensemble.empty()) throw ShapeMismatch("empty ensemble");
  Matrix average = Matrix::Zero(ensemble[0].state.rows(), ensemble[0].state.cols());
  for (const auto& member : ensemble) average += member.weight * member.state;
  Matrix root_inv = pinv_sqrt(average, rank_tol);
  std::vector<Matrix> elements;
  for (const auto& member : ensemble) {
    elements.push_back(root_inv * (member.weight * member.state) * root_inv);
  }
  Matrix complement = Matrix::Identity(average.rows(), average.cols()) -
                      support_projector(average, rank_tol);
  if (complement.norm() > tol::derived) elements.push_back(complement);
  return elements;
}

// POVM on the purifying system that steers the purification into the given
// ensemble: P_B = [Psi^+ rho_B (Psi^+)^dag]^T, extended to a resolution of
// the identity by a discard outcome.
inline std::vector<Matrix> steering_povm(const Matrix& purifier,
                                         const std::vector<WeightedState>& ensemble,
                                         double tolerance = tol::derived) {
  if (ensemble.empty()) throw ShapeMismatch("empty ensemble");
  Matrix average = Matrix::Zero(ensemble[0].state.rows(), ensemble[0].state.cols());
  for (const auto& member : ensemble) average += member.weight * member.state;
  double defect = (purifier * purifier.adjoint() - average).norm();
  if (defect > tolerance * std::max(1.0, average.norm())) {
    std::ostringstream os;
    os << "Psi Psi^dag differs from the ensemble average by " << defect;
    throw NotAPurification(os.str());
  }
  Matrix inverse = pinv(purifier);
  std::vector<Matrix> elements;
  Matrix sum = Matrix::Zero(purifier.cols(), purifier.cols());
  for (const auto& member : ensemble) {
    Matrix p = (inverse * (member.weight * member.state) * inverse.adjoint()).transpose();
    sum += p;
    elements.push_back(std::move(p));
  }
  Matrix complement = Matrix::Identity(purifier.cols(), purifier.cols()) - sum;
  if (complement.norm() > tol::derived) elements.push_back(complement);
  return elements;
}

// Sector normalization of an isotropic seed xi = sum_i |eta_i><eta_i| with
// |eta_i> = (+)_mu sqrt(d_mu)|eta_imu>>: both block sums must equal I_mu.
struct BlockSumDefects {
  double left = 0.0;   // max_mu |sum_i eta eta^dag - I|
  double right = 0.0;  // max_mu |sum_i eta^T conj(eta) - I|
};

inline BlockSumDefects isotropic_block_sums(const Matrix& xi, const TildeStructure& t,
                                            double rank_tol = tol::rank_cutoff) {
  HermEigResult eig = herm_eig(xi, tol::derived);
  const double cut = rank_tol * std::max(eig.eigenvalues.maxCoeff(), 0.0);
  BlockSumDefects defects;
  for (int s = 0; s < t.sector_count(); ++s) {
    const TildeSector& sec = t.sectors[s];
    Matrix left = Matrix::Zero(sec.dim, sec.dim);
    Matrix right = Matrix::Zero(sec.dim, sec.dim);
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
      if (eig.eigenvalues[i] <= cut) continue;
      Vector eta = std::sqrt(eig.eigenvalues[i]) * eig.eigenvectors.col(i);
      Matrix block = unket(eta.segment(sec.offset, sec.dim * sec.dim), sec.dim, sec.dim) /
                     std::sqrt(static_cast<double>(sec.dim));
      left += block * block.adjoint();
      right += block.transpose() * block.conjugate();
    }
    Matrix eye = Matrix::Identity(sec.dim, sec.dim);
    defects.left = std::max(defects.left, (left - eye).norm());
    defects.right = std::max(defects.right, (right - eye).norm());
  }
  return defects;
}

}  // namespace covest
