#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "covest/group.hpp"

namespace covest {

// Projective unitary representation: U_g U_h = omega(g,h) U_{gh}.
struct ProjectiveRep {
  std::shared_ptr<const FiniteGroup> group;
  Multiplier omega;
  int dim = 0;
  std::vector<Matrix> matrices;  // indexed by element

  const Matrix& at(int g) const { return matrices[g]; }
};

struct RepReport {
  bool pass = true;
  double worst_residual = 0.0;
  int worst_g = -1;
  int worst_h = -1;  // -1 when a unitarity (single element) check is worst
};

inline RepReport validate_rep(const ProjectiveRep& rep, double tolerance = tol::structural) {
  RepReport report;
  const FiniteGroup& g = *rep.group;
  const Matrix eye = Matrix::Identity(rep.dim, rep.dim);
  auto record = [&](double residual, int gg, int hh) {
    if (residual > report.worst_residual) {
      report.worst_residual = residual;
      report.worst_g = gg;
      report.worst_h = hh;
    }
    if (residual > tolerance) report.pass = false;
  };
  record((rep.at(g.identity) - eye).norm(), g.identity, -1);
  for (int a = 0; a < g.order; ++a) {
    record((rep.at(a).adjoint() * rep.at(a) - eye).norm(), a, -1);
  }
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b) {
      record((rep.at(a) * rep.at(b) - rep.omega(a, b) * rep.at(g.mul(a, b))).norm(), a, b);
    }
  }
  return report;
}

inline std::vector<Complex> character(const ProjectiveRep& rep) {
  std::vector<Complex> chi(rep.group->order);
  for (int g = 0; g < rep.group->order; ++g) chi[g] = rep.at(g).trace();
  return chi;
}

namespace detail {
// (1/|G|) sum_g conj(chi_a(g)) chi_b(g), rounded to an integer.
inline int rounded_character_pairing(const std::vector<Complex>& chi_a,
                                     const std::vector<Complex>& chi_b, int order,
                                     double residue_tol, const char* context) {
  Complex sum = 0.0;
  for (int g = 0; g < order; ++g) sum += std::conj(chi_a[g]) * chi_b[g];
  sum /= static_cast<double>(order);
  const double rounded = std::round(sum.real());
  const double residue = std::abs(sum - Complex(rounded, 0.0));
  if (residue > residue_tol || rounded < -0.5) {
    std::ostringstream os;
    os << context << ": pairing " << sum << " is not a nonnegative integer (residue "
       << residue << ")";
    throw NotIntegral(os.str());
  }
  return static_cast<int>(rounded);
}
}  // namespace detail

// Multiplicity of `irrep` inside `rep` (same group, same multiplier class).
// A wrong multiplier pairing or a non-representation input shows up as a
// non-integral character sum.
inline int multiplicity_of(const ProjectiveRep& rep, const ProjectiveRep& irrep,
                           double residue_tol = tol::integer_residue) {
  if (rep.group->order != irrep.group->order) {
    throw ShapeMismatch("representations live on different groups");
  }
  return detail::rounded_character_pairing(character(irrep), character(rep),
                                           rep.group->order, residue_tol,
                                           "multiplicity_of");
}

// Multiplicity of the ordinary irrep sigma in mu (x) conj(nu), where mu and nu
// share one multiplier (so the tensor product is an ordinary representation).
inline int tensor_conj_multiplicity(const ProjectiveRep& sigma, const ProjectiveRep& mu,
                                    const ProjectiveRep& nu,
                                    double residue_tol = tol::integer_residue) {
  if (!sigma.omega.is_trivial(1e-9)) {
    throw ValidationError("tensor_conj_multiplicity: sigma must be an ordinary irrep");
  }
  const int order = sigma.group->order;
  if (mu.group->order != order || nu.group->order != order) {
    throw ShapeMismatch("representations live on different groups");
  }
  std::vector<Complex> chi_sigma = character(sigma);
  std::vector<Complex> chi_mu = character(mu);
  std::vector<Complex> chi_nu = character(nu);
  std::vector<Complex> product(order);
  for (int g = 0; g < order; ++g) product[g] = chi_mu[g] * std::conj(chi_nu[g]);
  return detail::rounded_character_pairing(chi_sigma, product, order, residue_tol,
                                           "tensor_conj_multiplicity");
}

// Left-regular representation with multiplier: T_g delta_h = omega(g,h) delta_{gh}.
inline ProjectiveRep regular_rep(std::shared_ptr<const FiniteGroup> group,
                                 const Multiplier& omega) {
  const int n = group->order;
  if (omega.size() != n) throw ShapeMismatch("multiplier does not match group order");
  ProjectiveRep rep;
  rep.group = group;
  rep.omega = omega;
  rep.dim = n;
  rep.matrices.reserve(n);
  for (int g = 0; g < n; ++g) {
    Matrix t = Matrix::Zero(n, n);
    for (int h = 0; h < n; ++h) t(group->mul(g, h), h) = omega(g, h);
    rep.matrices.push_back(std::move(t));
  }
  return rep;
}

// A complete or partial list of irreducible representations sharing one
// multiplier, with cached characters.
struct IrrepTable {
  std::shared_ptr<const FiniteGroup> group;
  Multiplier omega;
  std::vector<ProjectiveRep> irreps;
  std::vector<std::vector<Complex>> characters;  // [mu][g]

  int size() const { return static_cast<int>(irreps.size()); }
  int dim(int mu) const { return irreps[mu].dim; }
  int sum_square_dims() const {
    int total = 0;
    for (const auto& irrep : irreps) total += irrep.dim * irrep.dim;
    return total;
  }
  bool complete() const { return sum_square_dims() == group->order; }
};

struct TableReport {
  bool pass = true;
  double worst_orthonormality = 0.0;  // |Gram - I| max entry
  double worst_rep_residual = 0.0;
};

inline TableReport validate_table(const IrrepTable& table, double tolerance = tol::derived) {
  TableReport report;
  const int order = table.group->order;
  for (const auto& irrep : table.irreps) {
    RepReport rep_report = validate_rep(irrep);
    report.worst_rep_residual = std::max(report.worst_rep_residual, rep_report.worst_residual);
    if (!rep_report.pass) report.pass = false;
  }
  // Character Gram matrix within the multiplier class; identity iff the
  // members are irreducible and mutually inequivalent.
  for (int a = 0; a < table.size(); ++a) {
    for (int b = 0; b < table.size(); ++b) {
      Complex sum = 0.0;
      for (int g = 0; g < order; ++g) {
        sum += std::conj(table.characters[a][g]) * table.characters[b][g];
      }
      sum /= static_cast<double>(order);
      double residual = std::abs(sum - (a == b ? Complex(1.0) : Complex(0.0)));
      report.worst_orthonormality = std::max(report.worst_orthonormality, residual);
      if (residual > tolerance) report.pass = false;
    }
  }
  return report;
}

inline IrrepTable make_irrep_table(std::shared_ptr<const FiniteGroup> group,
                                   Multiplier omega, std::vector<ProjectiveRep> irreps) {
  IrrepTable table;
  table.group = std::move(group);
  table.omega = std::move(omega);
  table.irreps = std::move(irreps);
  table.characters.reserve(table.irreps.size());
  for (const auto& irrep : table.irreps) table.characters.push_back(character(irrep));
  TableReport report = validate_table(table);
  if (!report.pass) {
    std::ostringstream os;
    os << "irrep table failed validation: orthonormality residual "
       << report.worst_orthonormality << ", rep residual " << report.worst_rep_residual;
    throw ValidationError(os.str());
  }
  return table;
}

// --- built-in irrep catalog ----------------------------------------------

inline IrrepTable catalog_zn(int n) {
  auto group = std::make_shared<const FiniteGroup>(cyclic_group(n));
  Multiplier omega = Multiplier::trivial(n);
  std::vector<ProjectiveRep> irreps;
  for (int k = 0; k < n; ++k) {
    ProjectiveRep rep;
    rep.group = group;
    rep.omega = omega;
    rep.dim = 1;
    for (int j = 0; j < n; ++j) {
      Matrix m(1, 1);
      m(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * k * j / n);
      rep.matrices.push_back(m);
    }
    irreps.push_back(std::move(rep));
  }
  return make_irrep_table(group, omega, std::move(irreps));
}

// Four sign characters of Z2 x Z2; element and irrep indices both encode
// pairs as i*2 + j.
inline IrrepTable catalog_klein() {
  auto group = std::make_shared<const FiniteGroup>(klein_group());
  Multiplier omega = Multiplier::trivial(4);
  std::vector<ProjectiveRep> irreps;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      ProjectiveRep rep;
      rep.group = group;
      rep.omega = omega;
      rep.dim = 1;
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          Matrix m(1, 1);
          m(0, 0) = ((a * x + b * y) % 2 == 0) ? 1.0 : -1.0;
          rep.matrices.push_back(m);
        }
      }
      irreps.push_back(std::move(rep));
    }
  }
  return make_irrep_table(group, omega, std::move(irreps));
}

inline std::vector<Matrix> pauli_family() {
  Matrix u00 = Matrix::Identity(2, 2);
  Matrix u01(2, 2), u10(2, 2), u11(2, 2);
  u01 << 0, 1, 1, 0;
  u10 << 1, 0, 0, -1;
  u11 << 0, -1, 1, 0;
  return {u00, u01, u10, u11};
}

// The unique 2-dimensional projective irrep of the Klein group, carried by
// the Pauli-type family {I, X, Z, XZ}; the multiplier is the sign table of
// their products.
inline IrrepTable catalog_klein_pauli() {
  auto group = std::make_shared<const FiniteGroup>(klein_group());
  std::vector<Matrix> matrices = pauli_family();
  Multiplier omega = multiplier_from_matrices(*group, matrices);
  ProjectiveRep rep{group, omega, 2, matrices};
  std::vector<ProjectiveRep> irreps{std::move(rep)};
  return make_irrep_table(group, omega, std::move(irreps));
}

inline IrrepTable catalog_s3() {
  auto group = std::make_shared<const FiniteGroup>(symmetric_s3());
  Multiplier omega = Multiplier::trivial(6);
  const auto& perms = detail::s3_permutations();

  ProjectiveRep trivial{group, omega, 1, {}};
  ProjectiveRep sign{group, omega, 1, {}};
  ProjectiveRep standard{group, omega, 2, {}};

  // Orthonormal basis of the plane orthogonal to (1,1,1) in C^3.
  Eigen::Matrix<Complex, 3, 2> basis;
  basis << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
      -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
      0.0, -2.0 / std::sqrt(6.0);

  for (int g = 0; g < 6; ++g) {
    Matrix one(1, 1);
    one(0, 0) = 1.0;
    trivial.matrices.push_back(one);

    // Parity: identity and 3-cycles are even.
    Matrix sgn(1, 1);
    sgn(0, 0) = (g == 0 || g >= 4) ? 1.0 : -1.0;
    sign.matrices.push_back(sgn);

    Matrix perm = Matrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j) perm(perms[g][j], j) = 1.0;
    standard.matrices.push_back(basis.adjoint() * perm * basis);
  }
  std::vector<ProjectiveRep> irreps{std::move(trivial), std::move(sign), std::move(standard)};
  return make_irrep_table(group, omega, std::move(irreps));
}

inline IrrepTable catalog_d4() {
  auto group = std::make_shared<const FiniteGroup>(dihedral_d4());
  Multiplier omega = Multiplier::trivial(8);
  std::vector<ProjectiveRep> irreps;
  // Four sign characters (a on the rotation, b on the reflection).
  for (int a : {1, -1}) {
    for (int b : {1, -1}) {
      ProjectiveRep rep{group, omega, 1, {}};
      for (int m = 0; m < 2; ++m) {
        for (int k = 0; k < 4; ++k) {
          Matrix v(1, 1);
          v(0, 0) = static_cast<double>(((a < 0 && k % 2) ? -1 : 1) * ((b < 0 && m) ? -1 : 1));
          rep.matrices.push_back(v);
        }
      }
      irreps.push_back(std::move(rep));
    }
  }
  Matrix rot(2, 2), refl(2, 2);
  rot << 0, -1, 1, 0;
  refl << 1, 0, 0, -1;
  ProjectiveRep two{group, omega, 2, {}};
  for (int m = 0; m < 2; ++m) {
    for (int k = 0; k < 4; ++k) {
      Matrix v = Matrix::Identity(2, 2);
      for (int i = 0; i < k; ++i) v = rot * v;
      if (m) v = refl * v;
      two.matrices.push_back(v);
    }
  }
  irreps.push_back(std::move(two));
  return make_irrep_table(group, omega, std::move(irreps));
}

inline IrrepTable catalog_q8() {
  auto group = std::make_shared<const FiniteGroup>(quaternion_q8());
  Multiplier omega = Multiplier::trivial(8);
  std::vector<ProjectiveRep> irreps;
  // Sign characters factor through Q8 / {+-1}.
  for (int a : {1, -1}) {
    for (int b : {1, -1}) {
      ProjectiveRep rep{group, omega, 1, {}};
      for (int g = 0; g < 8; ++g) {
        int ax = g / 2;  // 0:1, 1:i, 2:j, 3:k
        int value = 1;
        if (ax == 1) value = a;
        if (ax == 2) value = b;
        if (ax == 3) value = a * b;
        Matrix v(1, 1);
        v(0, 0) = static_cast<double>(value);
        rep.matrices.push_back(v);
      }
      irreps.push_back(std::move(rep));
    }
  }
  const Complex im(0.0, 1.0);
  Matrix qi(2, 2), qj(2, 2), qk(2, 2);
  qi << im, 0, 0, -im;
  qj << 0, 1, -1, 0;
  qk << 0, im, im, 0;
  std::vector<Matrix> axis_matrix{Matrix::Identity(2, 2), qi, qj, qk};
  ProjectiveRep two{group, omega, 2, {}};
  for (int g = 0; g < 8; ++g) {
    Matrix v = axis_matrix[g / 2];
    if (g % 2) v = -v;
    two.matrices.push_back(v);
  }
  irreps.push_back(std::move(two));
  return make_irrep_table(group, omega, std::move(irreps));
}

}  // namespace covest
