#pragma once

#include <sstream>
#include <vector>

#include "covest/rep.hpp"

namespace covest {

struct IsotypicComponent {
  int irrep = -1;  // index into the table
  int dim = 0;
  int multiplicity = 0;
};

struct IsotypicDecomposition {
  std::vector<IsotypicComponent> components;  // table order, multiplicity > 0 only
  Matrix basis_change;                        // W with W^dag U_g W block diagonal
  double unitarity_residual = 0.0;
  double max_block_residual = 0.0;
};

// Block form (+)_mu U^mu_g (x) I_{m_mu} the decomposition maps onto.
inline Matrix isotypic_block_form(const IsotypicDecomposition& dec, const IrrepTable& table,
                                  int g) {
  int dim = 0;
  for (const auto& c : dec.components) dim += c.dim * c.multiplicity;
  Matrix out = Matrix::Zero(dim, dim);
  int offset = 0;
  for (const auto& c : dec.components) {
    int block = c.dim * c.multiplicity;
    out.block(offset, offset, block, block) =
        kron(table.irreps[c.irrep].at(g), Matrix::Identity(c.multiplicity, c.multiplicity));
    offset += block;
  }
  return out;
}

namespace detail {
// Canonical operator E^mu_{ij} = (d_mu/|G|) sum_g conj(u^mu_ij(g)) U_g.
inline Matrix canonical_operator(const ProjectiveRep& rep, const ProjectiveRep& irrep,
                                 int i, int j) {
  Matrix e = Matrix::Zero(rep.dim, rep.dim);
  for (int g = 0; g < rep.group->order; ++g) {
    e += std::conj(irrep.at(g)(i, j)) * rep.at(g);
  }
  return e * (static_cast<double>(irrep.dim) / rep.group->order);
}

// Orthonormal basis of the range of a projector-like matrix, extracted by
// column-pivoted Gram-Schmidt: largest-norm pivot first, ties to the lowest
// index, so the result is deterministic.
inline std::vector<Vector> range_basis(Matrix m, int count, double degeneracy_tol) {
  std::vector<Vector> basis;
  std::vector<bool> used(m.cols(), false);
  for (int k = 0; k < count; ++k) {
    int pivot = -1;
    double best = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (used[c]) continue;
      double norm = m.col(c).norm();
      if (norm > best) {
        best = norm;
        pivot = static_cast<int>(c);
      }
    }
    if (pivot < 0 || best < degeneracy_tol) {
      std::ostringstream os;
      os << "range basis collapsed after " << basis.size() << " of " << count
         << " vectors (pivot norm " << best << ")";
      throw NumericalDegeneracy(os.str());
    }
    used[pivot] = true;
    Vector w = m.col(pivot) / best;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!used[c]) m.col(c) -= w * (w.adjoint() * m.col(c));
    }
    basis.push_back(std::move(w));
  }
  return basis;
}
}  // namespace detail

// Explicit change of basis to the isotypic block form. Multiplicities come
// from character inner products; the basis within each component is built
// from the canonical operators: a multiplicity basis is extracted from
// range(E^mu_{11}) and propagated with E^mu_{i1}.
inline IsotypicDecomposition isotypic_decompose(const ProjectiveRep& rep,
                                                const IrrepTable& table) {
  IsotypicDecomposition dec;
  int accounted = 0;
  std::vector<int> multiplicities(table.size(), 0);
  for (int mu = 0; mu < table.size(); ++mu) {
    multiplicities[mu] = multiplicity_of(rep, table.irreps[mu]);
    accounted += multiplicities[mu] * table.dim(mu);
  }
  if (accounted != rep.dim) {
    std::ostringstream os;
    os << "table accounts for dimension " << accounted << " of " << rep.dim;
    throw IncompleteTable(os.str());
  }

  dec.basis_change = Matrix::Zero(rep.dim, rep.dim);
  int offset = 0;
  for (int mu = 0; mu < table.size(); ++mu) {
    const int m = multiplicities[mu];
    if (m == 0) continue;
    const ProjectiveRep& irrep = table.irreps[mu];
    const int d = irrep.dim;
    dec.components.push_back({mu, d, m});

    Matrix e11 = detail::canonical_operator(rep, irrep, 0, 0);
    std::vector<Vector> mult_basis = detail::range_basis(std::move(e11), m, 1e-8);
    for (int i = 0; i < d; ++i) {
      Matrix ei1 = (i == 0) ? Matrix() : detail::canonical_operator(rep, irrep, i, 0);
      for (int alpha = 0; alpha < m; ++alpha) {
        Vector column = (i == 0) ? mult_basis[alpha] : Vector(ei1 * mult_basis[alpha]);
        dec.basis_change.col(offset + i * m + alpha) = column;
      }
    }
    offset += d * m;
  }

  dec.unitarity_residual =
      (dec.basis_change.adjoint() * dec.basis_change - Matrix::Identity(rep.dim, rep.dim))
          .norm();
  if (dec.unitarity_residual > 1e-8) {
    std::ostringstream os;
    os << "extracted basis is not orthonormal (residual " << dec.unitarity_residual << ")";
    throw NumericalDegeneracy(os.str());
  }
  for (int g = 0; g < rep.group->order; ++g) {
    double residual = (dec.basis_change.adjoint() * rep.at(g) * dec.basis_change -
                       isotypic_block_form(dec, table, g))
                          .norm();
    dec.max_block_residual = std::max(dec.max_block_residual, residual);
  }
  return dec;
}

}  // namespace covest
