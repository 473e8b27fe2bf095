#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "covest/estimation.hpp"

namespace covest {

// Cost function on G x G, optionally carrying its Fourier coefficients over
// the ordinary irreps: c(ghat, g) = sum_sigma a_sigma conj(chi_sigma(ghat^-1 g)).
struct CostSpec {
  std::optional<std::vector<double>> fourier;
  RealMatrix table;  // table(ghat, g)
  bool left_invariant = false;
  bool right_invariant = false;
};

namespace detail {
inline void compute_invariance_flags(CostSpec& spec, const FiniteGroup& group) {
  spec.left_invariant = true;
  spec.right_invariant = true;
  for (int h = 0; h < group.order && (spec.left_invariant || spec.right_invariant); ++h) {
    for (int ghat = 0; ghat < group.order; ++ghat) {
      for (int g = 0; g < group.order; ++g) {
        if (std::abs(spec.table(group.mul(h, ghat), group.mul(h, g)) - spec.table(ghat, g)) >
            1e-12) {
          spec.left_invariant = false;
        }
        if (std::abs(spec.table(group.mul(ghat, h), group.mul(g, h)) - spec.table(ghat, g)) >
            1e-12) {
          spec.right_invariant = false;
        }
      }
    }
  }
}
}  // namespace detail

inline CostSpec cost_from_table(RealMatrix table, const FiniteGroup& group) {
  if (table.rows() != group.order || table.cols() != group.order) {
    throw ShapeMismatch("cost table does not match group order");
  }
  CostSpec spec;
  spec.table = std::move(table);
  detail::compute_invariance_flags(spec, group);
  return spec;
}

inline CostSpec cost_from_fourier(const std::vector<double>& coefficients,
                                  const IrrepTable& ordinary) {
  if (static_cast<int>(coefficients.size()) != ordinary.size()) {
    throw ShapeMismatch("coefficient count does not match ordinary irrep table");
  }
  if (!ordinary.omega.is_trivial(1e-9)) {
    throw ValidationError("Fourier cost needs the ordinary (trivial multiplier) table");
  }
  for (double a : coefficients) {
    if (a > 1e-15) {
      std::ostringstream os;
      os << "coefficient " << a << " is positive";
      throw PositiveCoefficient(os.str());
    }
  }
  const FiniteGroup& group = *ordinary.group;
  CostSpec spec;
  spec.fourier = coefficients;
  spec.table = RealMatrix::Zero(group.order, group.order);
  for (int ghat = 0; ghat < group.order; ++ghat) {
    for (int g = 0; g < group.order; ++g) {
      int rel = group.mul(group.inverse(ghat), g);
      Complex value = 0.0;
      for (int sigma = 0; sigma < ordinary.size(); ++sigma) {
        value += coefficients[sigma] * std::conj(ordinary.characters[sigma][rel]);
      }
      if (std::abs(value.imag()) > tol::derived) {
        std::ostringstream os;
        os << "coefficients produce a non-real cost at (" << ghat << "," << g << "): "
           << value.imag();
        throw ValidationError(os.str());
      }
      spec.table(ghat, g) = value.real();
    }
  }
  detail::compute_invariance_flags(spec, group);
  return spec;
}

// Maximum likelihood: a_sigma = -d_sigma, which materializes as -|G| on the
// diagonal and 0 elsewhere when the table is complete.
inline CostSpec ml_cost(const IrrepTable& ordinary) {
  if (!ordinary.complete()) {
    std::ostringstream os;
    os << "ordinary table covers " << ordinary.sum_square_dims() << " of "
       << ordinary.group->order;
    throw IncompleteTable(os.str());
  }
  std::vector<double> coefficients;
  for (int sigma = 0; sigma < ordinary.size(); ++sigma) {
    coefficients.push_back(-static_cast<double>(ordinary.dim(sigma)));
  }
  return cost_from_fourier(coefficients, ordinary);
}

// Entanglement fidelity against a target unitary (possibly projective)
// representation V: c(ghat, g) = -|tr V_{ghat^-1 g}|^2 / n^2, expanded as
// a_sigma = -m_sigma(V (x) V^*) / n^2.
inline CostSpec entanglement_fidelity_cost(const ProjectiveRep& target,
                                           const IrrepTable& ordinary) {
  std::vector<double> coefficients;
  const double n2 = static_cast<double>(target.dim) * target.dim;
  for (int sigma = 0; sigma < ordinary.size(); ++sigma) {
    coefficients.push_back(
        -static_cast<double>(tensor_conj_multiplicity(ordinary.irreps[sigma], target, target)) /
        n2);
  }
  return cost_from_fourier(coefficients, ordinary);
}

struct CostEvaluation {
  double ave = 0.0;
  double wc = 0.0;
  std::vector<double> per_g;
  RealMatrix cond_prob;  // p(ghat | g), row ghat, column g
  double success_avg = 0.0;
};

// Born-rule evaluation over the whole outcome table.
inline CostEvaluation evaluate_costs(const Matrix& rho, const std::vector<Matrix>& povm,
                                     const CostSpec& cost, const ProjectiveRep& rep) {
  const int order = rep.group->order;
  if (static_cast<int>(povm.size()) < order) {
    throw ShapeMismatch("POVM has fewer outcomes than group elements");
  }
  if (rho.rows() != rep.dim || povm[0].rows() != rep.dim) {
    throw ShapeMismatch("state or POVM does not match representation dimension");
  }
  CostEvaluation eval;
  eval.cond_prob = RealMatrix::Zero(povm.size(), order);
  eval.per_g.assign(order, 0.0);
  for (int g = 0; g < order; ++g) {
    Matrix rho_g = rep.at(g) * rho * rep.at(g).adjoint();
    for (int ghat = 0; ghat < static_cast<int>(povm.size()); ++ghat) {
      eval.cond_prob(ghat, g) = (povm[ghat] * rho_g).trace().real();
    }
    double cost_g = 0.0;
    for (int ghat = 0; ghat < order; ++ghat) {
      cost_g += cost.table(ghat, g) * eval.cond_prob(ghat, g);
    }
    eval.per_g[g] = cost_g;
  }
  eval.ave = 0.0;
  eval.wc = eval.per_g[0];
  eval.success_avg = 0.0;
  for (int g = 0; g < order; ++g) {
    eval.ave += eval.per_g[g];
    eval.wc = std::max(eval.wc, eval.per_g[g]);
    eval.success_avg += eval.cond_prob(g, g);
  }
  eval.ave /= order;
  eval.success_avg /= order;
  return eval;
}

// M(mu, nu) = sum_sigma a_sigma m_sigma(mu (x) nu^*); real symmetric for
// conjugation-closed coefficient sets.
inline RealMatrix theorem_matrix(const std::vector<double>& coefficients,
                                 const IrrepTable& ordinary, const TildeStructure& t) {
  if (static_cast<int>(coefficients.size()) != ordinary.size()) {
    throw ShapeMismatch("coefficient count does not match ordinary irrep table");
  }
  const int k = t.sector_count();
  RealMatrix m = RealMatrix::Zero(k, k);
  for (int mu = 0; mu < k; ++mu) {
    for (int nu = 0; nu < k; ++nu) {
      double value = 0.0;
      for (int sigma = 0; sigma < ordinary.size(); ++sigma) {
        if (coefficients[sigma] == 0.0) continue;
        value += coefficients[sigma] *
                 tensor_conj_multiplicity(ordinary.irreps[sigma], t.irreps[mu], t.irreps[nu]);
      }
      m(mu, nu) = value;
    }
  }
  return m;
}

// Closed-form optimal average cost for a class state with weights p.
inline double theorem_cost(const std::vector<double>& weights, const RealMatrix& m) {
  if (static_cast<int>(weights.size()) != m.rows()) {
    throw ShapeMismatch("weight count does not match matrix");
  }
  double value = 0.0;
  for (int mu = 0; mu < m.rows(); ++mu) {
    for (int nu = 0; nu < m.cols(); ++nu) {
      value += m(mu, nu) * std::sqrt(std::max(weights[mu], 0.0)) *
               std::sqrt(std::max(weights[nu], 0.0));
    }
  }
  return value;
}

// Exhaustive minimum of x^T M x over the simplex grid {p : sum p = 1,
// p_mu in step*Z}; reference oracle for the eigen route.
inline double simplex_grid_min(const RealMatrix& m, double step,
                               std::vector<double>* argmin = nullptr) {
  const int k = static_cast<int>(m.rows());
  const int ticks = static_cast<int>(std::lround(1.0 / step));
  std::vector<int> counts(k, 0);
  std::vector<double> p(k, 0.0), best_p;
  double best = std::numeric_limits<double>::infinity();
  // Enumerate compositions of `ticks` into k parts.
  std::function<void(int, int)> visit = [&](int level, int remaining) {
    if (level == k - 1) {
      counts[level] = remaining;
      for (int i = 0; i < k; ++i) p[i] = static_cast<double>(counts[i]) / ticks;
      double value = theorem_cost(p, m);
      if (value < best) {
        best = value;
        best_p = p;
      }
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[level] = c;
      visit(level + 1, remaining - c);
    }
  };
  visit(0, ticks);
  if (argmin) *argmin = best_p;
  return best;
}

struct OptimizeResult {
  std::vector<double> weights;
  double cost = 0.0;
  bool degenerate_fallback = false;
  std::optional<double> grid_cost;  // filled for <= 3 sectors
};

// Minimize x^T M x over unit vectors with nonnegative entries. M is
// entrywise <= 0, so -M is entrywise >= 0 and has a nonnegative leading
// eigenvector; the optimum is p = x^2 for that vector.
inline OptimizeResult optimize_class_state(const RealMatrix& m) {
  const int k = static_cast<int>(m.rows());
  if (k == 0) throw ShapeMismatch("empty theorem matrix");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol::derived * std::max(1.0, m.norm())) {
    throw ValidationError("theorem matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(-m);
  if (solver.info() != Eigen::Success) throw NoConvergence("eigensolver failed");
  const RealVector& values = solver.eigenvalues();
  const double lead = values(k - 1);
  const double gap_tol = 1e-9 * std::max(1.0, std::abs(lead));

  auto admissible = [&](RealVector x) -> std::optional<RealVector> {
    double norm = x.norm();
    if (norm < 1e-12) return std::nullopt;
    x /= norm;
    if (x.sum() < 0.0) x = -x;
    if (x.minCoeff() < -1e-8) return std::nullopt;
    for (int i = 0; i < k; ++i) x(i) = std::max(x(i), 0.0);
    x /= x.norm();
    return x;
  };

  OptimizeResult result;
  std::optional<RealVector> chosen;
  int lead_count = 0;
  for (int i = 0; i < k; ++i) {
    if (values(i) >= lead - gap_tol) ++lead_count;
  }
  if (lead_count == 1) {
    chosen = admissible(solver.eigenvectors().col(k - 1));
  }
  if (!chosen) {
    // Degenerate (or sign-mixed) leading space: project deterministic
    // candidates onto it and take the first admissible one.
    RealMatrix projector = RealMatrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      if (values(i) >= lead - gap_tol) {
        projector += solver.eigenvectors().col(i) * solver.eigenvectors().col(i).transpose();
      }
    }
    std::vector<RealVector> candidates;
    candidates.push_back(projector * RealVector::Ones(k));
    for (int i = 0; i < k; ++i) candidates.push_back(projector.col(i));
    for (const RealVector& candidate : candidates) {
      chosen = admissible(candidate);
      if (chosen) break;
    }
  }
  if (chosen) {
    result.weights.resize(k);
    for (int i = 0; i < k; ++i) result.weights[i] = (*chosen)(i) * (*chosen)(i);
    result.cost = theorem_cost(result.weights, m);
  } else {
    if (k > 4) {
      throw DegenerateLeadingSpace(
          "no nonnegative leading eigenvector found and grid fallback is infeasible");
    }
    result.degenerate_fallback = true;
    std::vector<double> p;
    result.cost = simplex_grid_min(m, 0.01, &p);
    result.weights = std::move(p);
  }
  if (k <= 3) result.grid_cost = simplex_grid_min(m, 0.01);
  return result;
}

// Bayes-optimality certificate: risk operators W_ghat, Lagrange operator
// Gamma = sum W_ghat P_ghat, Hermiticity of Gamma and PSD slack of
// W_ghat - (Gamma + Gamma^dag)/2.
struct Certificate {
  std::vector<Matrix> risk_ops;
  Matrix gamma;
  double hermiticity_defect = 0.0;
  double min_slack = 0.0;
  bool pass = false;
};

inline Certificate certify_optimality(const Matrix& rho, const std::vector<Matrix>& povm,
                                      const CostSpec& cost, const ProjectiveRep& rep,
                                      double defect_tol = tol::derived,
                                      double slack_tol = tol::derived) {
  const int order = rep.group->order;
  if (static_cast<int>(povm.size()) < order) {
    throw ShapeMismatch("POVM has fewer outcomes than group elements");
  }
  Certificate cert;
  std::vector<Matrix> orbit;
  for (int g = 0; g < order; ++g) orbit.push_back(rep.at(g) * rho * rep.at(g).adjoint());
  cert.gamma = Matrix::Zero(rep.dim, rep.dim);
  for (int ghat = 0; ghat < order; ++ghat) {
    Matrix w = Matrix::Zero(rep.dim, rep.dim);
    for (int g = 0; g < order; ++g) w += cost.table(ghat, g) * orbit[g];
    w /= static_cast<double>(order);
    cert.gamma += w * povm[ghat];
    cert.risk_ops.push_back(std::move(w));
  }
  cert.hermiticity_defect = hermiticity_defect(cert.gamma);
  Matrix gamma_sym = (cert.gamma + cert.gamma.adjoint()) / 2.0;
  cert.min_slack = std::numeric_limits<double>::infinity();
  for (int ghat = 0; ghat < order; ++ghat) {
    cert.min_slack = std::min(cert.min_slack, min_eigenvalue(cert.risk_ops[ghat] - gamma_sym));
  }
  cert.pass = cert.hermiticity_defect <= defect_tol && cert.min_slack >= -slack_tol;
  return cert;
}

// Orbit-averaged strategy with the same average cost: purify the orbit
// average with its square root and steer the original states on the
// purifying factor. The combined POVM has one outcome per group element;
// the steering discard never fires on the purification, so it is folded
// into the identity outcome.
struct SymmetrizedStrategy {
  Matrix state;               // purification projector on H (x) H'
  std::vector<Matrix> povm;   // |G| outcomes on H (x) H'
  ProjectiveRep extended_rep; // U_g (x) I
};

inline SymmetrizedStrategy symmetrize_strategy(const Matrix& sigma,
                                               const std::vector<Matrix>& q,
                                               const CostSpec& cost,
                                               const ProjectiveRep& rep) {
  if (!cost.right_invariant) {
    throw NotRightInvariant("symmetrization requires a right-invariant cost");
  }
  const int order = rep.group->order;
  const int dim = rep.dim;
  if (static_cast<int>(q.size()) != order) {
    throw ShapeMismatch("POVM must have one outcome per group element");
  }

  std::vector<WeightedState> orbit;
  Matrix average = Matrix::Zero(dim, dim);
  for (int h = 0; h < order; ++h) {
    Matrix state_h = rep.at(h) * sigma * rep.at(h).adjoint();
    average += state_h / order;
    orbit.push_back({1.0 / order, std::move(state_h)});
  }
  HermEigResult eig = herm_eig(average, tol::derived);
  Matrix sqrt_avg = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (eig.eigenvalues(i) > 0.0) {
      sqrt_avg += std::sqrt(eig.eigenvalues(i)) * eig.eigenvectors.col(i) *
                  eig.eigenvectors.col(i).adjoint();
    }
  }
  std::vector<Matrix> steer = steering_povm(sqrt_avg, orbit);

  SymmetrizedStrategy out;
  Vector psi = double_ket(sqrt_avg);
  out.state = psi * psi.adjoint();
  for (int ghat = 0; ghat < order; ++ghat) {
    Matrix element = Matrix::Zero(dim * dim, dim * dim);
    for (int h = 0; h < order; ++h) {
      element += kron(q[rep.group->mul(ghat, h)], steer[h]);
    }
    out.povm.push_back(std::move(element));
  }
  if (steer.size() > static_cast<std::size_t>(order)) {
    out.povm[rep.group->identity] += kron(Matrix::Identity(dim, dim), steer[order]);
  }
  out.extended_rep.group = rep.group;
  out.extended_rep.omega = rep.omega;
  out.extended_rep.dim = dim * dim;
  for (int g = 0; g < order; ++g) {
    out.extended_rep.matrices.push_back(kron(rep.at(g), Matrix::Identity(dim, dim)));
  }
  return out;
}

// Overlap of two orbit states of a class state,
// <Phi_g | Phi_h> = omega(g, g^-1 h) sum_mu (|c_mu|^2 / d_mu) chi_mu(g^-1 h);
// the multiplier factor makes the closed form track the actual vectors for
// projective sectors (it is 1 for ordinary ones).
inline Complex orbit_overlap(const ClassState& phi, int g, int h, const TildeStructure& t) {
  const FiniteGroup& group = *t.group;
  int rel = group.mul(group.inverse(g), h);
  Complex sum = 0.0;
  for (int s = 0; s < t.sector_count(); ++s) {
    sum += (phi.weights[s] / t.sectors[s].dim) * t.irreps[s].at(rel).trace();
  }
  return t.omega(g, rel) * sum;
}

inline Complex orbit_overlap_direct(const ClassState& phi, int g, int h,
                                    const TildeStructure& t) {
  Vector vg = tilde_matrix(t, g) * phi.state;
  Vector vh = tilde_matrix(t, h) * phi.state;
  return vg.adjoint() * vh;
}

}  // namespace covest
