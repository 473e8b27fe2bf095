#pragma once

#include <sstream>
#include <vector>

#include "covest/isotypic.hpp"

namespace covest {

// Reduced space (+)_mu H_mu (x) H_mu in which every irrep in play appears
// with multiplicity equal to its dimension. Sectors keep their own copies of
// the irreps so a structure stays valid independently of its source table.
struct TildeSector {
  int irrep = -1;  // index into the originating table
  int dim = 0;
  int offset = 0;  // start of the d^2 block
};

struct TildeStructure {
  std::shared_ptr<const FiniteGroup> group;
  Multiplier omega;
  std::vector<ProjectiveRep> irreps;  // aligned with sectors
  std::vector<TildeSector> sectors;
  int total_dim = 0;

  int sector_count() const { return static_cast<int>(sectors.size()); }
};

inline TildeStructure make_tilde(const IrrepTable& table, const std::vector<int>& members) {
  if (members.empty()) throw ValidationError("tilde structure needs at least one sector");
  TildeStructure t;
  t.group = table.group;
  t.omega = table.omega;
  int offset = 0;
  for (int mu : members) {
    if (mu < 0 || mu >= table.size()) {
      std::ostringstream os;
      os << "sector index " << mu << " outside table of size " << table.size();
      throw ValidationError(os.str());
    }
    int d = table.dim(mu);
    t.irreps.push_back(table.irreps[mu]);
    t.sectors.push_back({mu, d, offset});
    offset += d * d;
  }
  t.total_dim = offset;
  return t;
}

// Block-diagonal action (+)_mu U^mu_g (x) I_mu.
inline Matrix tilde_matrix(const TildeStructure& t, int g) {
  Matrix out = Matrix::Zero(t.total_dim, t.total_dim);
  for (int s = 0; s < t.sector_count(); ++s) {
    const TildeSector& sec = t.sectors[s];
    out.block(sec.offset, sec.offset, sec.dim * sec.dim, sec.dim * sec.dim) =
        kron(t.irreps[s].at(g), Matrix::Identity(sec.dim, sec.dim));
  }
  return out;
}

inline ProjectiveRep tilde_rep(const TildeStructure& t) {
  ProjectiveRep rep;
  rep.group = t.group;
  rep.omega = t.omega;
  rep.dim = t.total_dim;
  for (int g = 0; g < t.group->order; ++g) rep.matrices.push_back(tilde_matrix(t, g));
  return rep;
}

// Combined bicommutant/commutant action (+)_mu U^mu_g (x) conj(U^mu_g); an
// ordinary representation even when the sectors are projective.
inline Matrix tilde_conj_action(const TildeStructure& t, int g) {
  Matrix out = Matrix::Zero(t.total_dim, t.total_dim);
  for (int s = 0; s < t.sector_count(); ++s) {
    const TildeSector& sec = t.sectors[s];
    out.block(sec.offset, sec.offset, sec.dim * sec.dim, sec.dim * sec.dim) =
        kron(t.irreps[s].at(g), t.irreps[s].at(g).conjugate());
  }
  return out;
}

// A (x) I_mu per sector, assembled over the tilde space.
inline Matrix bicommutant_embed(const TildeStructure& t, const std::vector<Matrix>& blocks) {
  Matrix out = Matrix::Zero(t.total_dim, t.total_dim);
  for (int s = 0; s < t.sector_count(); ++s) {
    const TildeSector& sec = t.sectors[s];
    out.block(sec.offset, sec.offset, sec.dim * sec.dim, sec.dim * sec.dim) =
        kron(blocks[s], Matrix::Identity(sec.dim, sec.dim));
  }
  return out;
}

// I_mu (x) B per sector (commutant side).
inline Matrix commutant_embed(const TildeStructure& t, const std::vector<Matrix>& blocks) {
  Matrix out = Matrix::Zero(t.total_dim, t.total_dim);
  for (int s = 0; s < t.sector_count(); ++s) {
    const TildeSector& sec = t.sectors[s];
    out.block(sec.offset, sec.offset, sec.dim * sec.dim, sec.dim * sec.dim) =
        kron(Matrix::Identity(sec.dim, sec.dim), blocks[s]);
  }
  return out;
}

// Modular conjugation: (+)_mu A_mu (x) I_mu maps to (+)_mu I_mu (x) conj(A_mu)
// and, so that the map is an involution, (+)_mu I_mu (x) B_mu maps back to
// (+)_mu conj(B_mu) (x) I_mu. Each sector must carry one of the two forms;
// the block test guards that.
inline Matrix modular_conjugate(const Matrix& a, const TildeStructure& t,
                                double tolerance = tol::derived) {
  if (a.rows() != t.total_dim || a.cols() != t.total_dim) {
    throw ShapeMismatch("operator does not match the tilde space");
  }
  const double scale = std::max(1.0, a.norm());
  Matrix out = Matrix::Zero(t.total_dim, t.total_dim);
  Matrix reconstructed = Matrix::Zero(t.total_dim, t.total_dim);
  for (int s = 0; s < t.sector_count(); ++s) {
    const TildeSector& sec = t.sectors[s];
    const int d = sec.dim;
    const Matrix eye = Matrix::Identity(d, d);
    auto block_at = [&](int r, int c) { return a(sec.offset + r, sec.offset + c); };
    // Partial traces over each tensor factor give the candidate blocks.
    Matrix left = Matrix::Zero(d, d), right = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) {
        Complex sum_left = 0.0, sum_right = 0.0;
        for (int j = 0; j < d; ++j) {
          sum_left += block_at(i * d + j, k * d + j);
          sum_right += block_at(j * d + i, j * d + k);
        }
        left(i, k) = sum_left / static_cast<double>(d);
        right(i, k) = sum_right / static_cast<double>(d);
      }
    }
    Matrix as_bicommutant = kron(left, eye);
    Matrix as_commutant = kron(eye, right);
    Matrix sector = a.block(sec.offset, sec.offset, d * d, d * d);
    double res_bi = (sector - as_bicommutant).norm();
    double res_co = (sector - as_commutant).norm();
    if (std::min(res_bi, res_co) > tolerance * scale) {
      std::ostringstream os;
      os << "sector " << s << " block test residual " << std::min(res_bi, res_co);
      throw NotInBicommutant(os.str());
    }
    if (res_bi <= res_co) {
      reconstructed.block(sec.offset, sec.offset, d * d, d * d) = as_bicommutant;
      out.block(sec.offset, sec.offset, d * d, d * d) = kron(eye, left.conjugate());
    } else {
      reconstructed.block(sec.offset, sec.offset, d * d, d * d) = as_commutant;
      out.block(sec.offset, sec.offset, d * d, d * d) = kron(right.conjugate(), eye);
    }
  }
  double residual = (a - reconstructed).norm();
  if (residual > tolerance * scale) {
    std::ostringstream os;
    os << "off-diagonal sector coupling with residual " << residual;
    throw NotInBicommutant(os.str());
  }
  return out;
}

// Conjugation by the sector-wise tensor swap; an involution.
inline Matrix swap_map(const Matrix& x, const TildeStructure& t) {
  if (x.rows() != t.total_dim || x.cols() != t.total_dim) {
    throw ShapeMismatch("operator does not match the tilde space");
  }
  auto swapped_index = [&](const TildeSector& sec, int local) {
    int i = local / sec.dim, j = local % sec.dim;
    return sec.offset + j * sec.dim + i;
  };
  Matrix out(t.total_dim, t.total_dim);
  for (const TildeSector& row_sec : t.sectors) {
    for (const TildeSector& col_sec : t.sectors) {
      for (int r = 0; r < row_sec.dim * row_sec.dim; ++r) {
        for (int c = 0; c < col_sec.dim * col_sec.dim; ++c) {
          out(swapped_index(row_sec, r), swapped_index(col_sec, c)) =
              x(row_sec.offset + r, col_sec.offset + c);
        }
      }
    }
  }
  return out;
}

// Unitary from functions on G to the full tilde space, sending the matrix
// element function sqrt(d_mu) conj(u^mu_ij) to |mu,i>|mu,j>. Requires the
// table to exhaust the multiplier class.
inline Matrix plancherel_intertwiner(const IrrepTable& table) {
  const int order = table.group->order;
  if (!table.complete()) {
    std::ostringstream os;
    os << "sum of squared dims " << table.sum_square_dims() << " != |G| = " << order;
    throw IncompleteTable(os.str());
  }
  Matrix v(order, order);
  int row = 0;
  for (int mu = 0; mu < table.size(); ++mu) {
    const ProjectiveRep& irrep = table.irreps[mu];
    const double scale = std::sqrt(static_cast<double>(irrep.dim) / order);
    for (int i = 0; i < irrep.dim; ++i) {
      for (int j = 0; j < irrep.dim; ++j) {
        for (int g = 0; g < order; ++g) v(row, g) = scale * irrep.at(g)(i, j);
        ++row;
      }
    }
  }
  return v;
}

}  // namespace covest
