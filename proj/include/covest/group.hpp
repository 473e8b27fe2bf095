#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>
#include <vector>

#include "covest/numerics.hpp"

namespace covest {

// Finite group as explicit data. Element indices are canonical: index 0 is
// the identity (build_group relabels if the input table has it elsewhere,
// and records the relabeling).
struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> mult;  // mult[g][h] = g*h
  int identity = 0;                    // always 0 after canonicalization
  std::vector<int> inv;
  std::vector<int> relabeling;         // canonical index -> original index

  int mul(int g, int h) const { return mult[g][h]; }
  int inverse(int g) const { return inv[g]; }
  // h g h^{-1}
  int conjugate(int h, int g) const { return mul(mul(h, g), inverse(h)); }
  double haar_weight() const { return 1.0 / order; }
};

inline FiniteGroup build_group(std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw ValidationError("empty multiplication table");
  for (int g = 0; g < n; ++g) {
    if (static_cast<int>(table[g].size()) != n) {
      throw ValidationError("multiplication table is not square");
    }
    for (int h = 0; h < n; ++h) {
      if (table[g][h] < 0 || table[g][h] >= n) {
        std::ostringstream os;
        os << "entry (" << g << "," << h << ") = " << table[g][h] << " out of range";
        throw ValidationError(os.str());
      }
    }
  }

  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) {
      ok = table[e][g] == g && table[g][e] == g;
    }
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) throw NoIdentity("no two-sided identity element in table");

  std::vector<int> relabeling(n);
  std::iota(relabeling.begin(), relabeling.end(), 0);
  if (identity != 0) {
    // Swap the identity to index 0; everything else keeps its slot.
    std::vector<int> to_new(n);
    std::iota(to_new.begin(), to_new.end(), 0);
    std::swap(to_new[0], to_new[identity]);
    std::vector<std::vector<int>> relabeled(n, std::vector<int>(n));
    for (int g = 0; g < n; ++g) {
      for (int h = 0; h < n; ++h) {
        relabeled[to_new[g]][to_new[h]] = to_new[table[g][h]];
      }
    }
    table = std::move(relabeled);
    std::swap(relabeling[0], relabeling[identity]);
    identity = 0;
  }

  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      for (int k = 0; k < n; ++k) {
        if (table[table[g][h]][k] != table[g][table[h][k]]) {
          std::ostringstream os;
          os << "(g,h,k) = (" << g << "," << h << "," << k << ")";
          throw NotAssociative(os.str());
        }
      }
    }
  }

  std::vector<int> inv(n, -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (table[g][h] == identity && table[h][g] == identity) {
        inv[g] = h;
        break;
      }
    }
    if (inv[g] < 0) {
      std::ostringstream os;
      os << "element " << g;
      throw NoInverse(os.str());
    }
  }

  FiniteGroup group;
  group.order = n;
  group.mult = std::move(table);
  group.identity = identity;
  group.inv = std::move(inv);
  group.relabeling = std::move(relabeling);
  return group;
}

// Componentwise product; index (i, j) -> i*|G2| + j.
inline FiniteGroup direct_product(const FiniteGroup& g1, const FiniteGroup& g2) {
  const int n1 = g1.order, n2 = g2.order;
  std::vector<std::vector<int>> table(n1 * n2, std::vector<int>(n1 * n2));
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n2; ++b) {
      for (int c = 0; c < n1; ++c) {
        for (int d = 0; d < n2; ++d) {
          table[a * n2 + b][c * n2 + d] = g1.mul(a, c) * n2 + g2.mul(b, d);
        }
      }
    }
  }
  return build_group(std::move(table));
}

struct ConjugacyClasses {
  std::vector<std::vector<int>> classes;  // ordered by least element
  std::vector<int> class_of;
};

inline ConjugacyClasses conjugacy_classes(const FiniteGroup& g) {
  ConjugacyClasses result;
  result.class_of.assign(g.order, -1);
  for (int rep = 0; rep < g.order; ++rep) {
    if (result.class_of[rep] >= 0) continue;
    std::vector<int> members;
    for (int h = 0; h < g.order; ++h) {
      int conj = g.conjugate(h, rep);
      if (result.class_of[conj] < 0) {
        result.class_of[conj] = static_cast<int>(result.classes.size());
        members.push_back(conj);
      }
    }
    std::sort(members.begin(), members.end());
    result.classes.push_back(std::move(members));
  }
  return result;
}

// --- built-in groups ---------------------------------------------------

inline FiniteGroup cyclic_group(int n) {
  if (n < 1) throw ValidationError("cyclic group order must be >= 1");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return build_group(std::move(table));
}

inline FiniteGroup klein_group() {
  return direct_product(cyclic_group(2), cyclic_group(2));
}

namespace detail {
inline const std::array<std::array<int, 3>, 6>& s3_permutations() {
  // Identity first, then transpositions, then 3-cycles.
  static const std::array<std::array<int, 3>, 6> perms = {{
      {0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1},
  }};
  return perms;
}
}  // namespace detail

inline FiniteGroup symmetric_s3() {
  const auto& perms = detail::s3_permutations();
  auto index_of = [&](const std::array<int, 3>& p) {
    for (int i = 0; i < 6; ++i) {
      if (perms[i] == p) return i;
    }
    throw ValidationError("permutation lookup failed");
  };
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> composed{};
      for (int x = 0; x < 3; ++x) composed[x] = perms[a][perms[b][x]];
      table[a][b] = index_of(composed);
    }
  }
  return build_group(std::move(table));
}

// Dihedral group of the square. Element m*4 + k stands for s^m r^k.
inline FiniteGroup dihedral_d4() {
  auto idx = [](int k, int m) { return m * 4 + ((k % 4) + 4) % 4; };
  std::vector<std::vector<int>> table(8, std::vector<int>(8));
  for (int m1 = 0; m1 < 2; ++m1) {
    for (int k1 = 0; k1 < 4; ++k1) {
      for (int m2 = 0; m2 < 2; ++m2) {
        for (int k2 = 0; k2 < 4; ++k2) {
          // s^m1 r^k1 s^m2 r^k2, using r s = s r^{-1}
          int k = (m2 == 0) ? k1 + k2 : k2 - k1;
          table[idx(k1, m1)][idx(k2, m2)] = idx(k, (m1 + m2) % 2);
        }
      }
    }
  }
  return build_group(std::move(table));
}

// Quaternion units: index = 2*axis + (sign < 0), axes ordered 1, i, j, k.
inline FiniteGroup quaternion_q8() {
  // axis products: result axis and sign for a*b
  static const int axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{+1, +1, +1, +1},
                                 {+1, -1, +1, -1},
                                 {+1, -1, -1, +1},
                                 {+1, +1, -1, -1}};
  std::vector<std::vector<int>> table(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      int ax = a / 2, bx = b / 2;
      int s = (a % 2 ? -1 : 1) * (b % 2 ? -1 : 1) * sign[ax][bx];
      table[a][b] = 2 * axis[ax][bx] + (s < 0 ? 1 : 0);
    }
  }
  return build_group(std::move(table));
}

// --- multipliers (cocycles) --------------------------------------------

struct Multiplier {
  Matrix omega;  // omega(g, h), unit modulus

  static Multiplier trivial(int n) { return {Matrix::Ones(n, n)}; }

  Complex operator()(int g, int h) const { return omega(g, h); }
  int size() const { return static_cast<int>(omega.rows()); }

  bool is_trivial(double tolerance = tol::exact) const {
    return (omega - Matrix::Ones(omega.rows(), omega.cols())).cwiseAbs().maxCoeff() <=
           tolerance;
  }
};

struct CocycleReport {
  bool pass = true;
  double worst_residual = 0.0;
  std::string worst_violation;
  int violation_count = 0;
};

inline CocycleReport validate_cocycle(const FiniteGroup& group, const Multiplier& omega,
                                      double tolerance = tol::exact) {
  CocycleReport report;
  const int n = group.order;
  if (omega.size() != n) {
    throw ShapeMismatch("multiplier table does not match group order");
  }
  auto record = [&](double residual, const std::string& what) {
    if (residual > tolerance) {
      report.pass = false;
      ++report.violation_count;
    }
    if (residual > report.worst_residual) {
      report.worst_residual = residual;
      report.worst_violation = what;
    }
  };
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      std::ostringstream os;
      os << "|omega(" << g << "," << h << ")| != 1";
      record(std::abs(std::abs(omega(g, h)) - 1.0), os.str());
    }
  }
  for (int g = 0; g < n; ++g) {
    std::ostringstream os;
    os << "omega(" << g << ",e) or omega(e," << g << ") != 1";
    record(std::max(std::abs(omega(g, group.identity) - 1.0),
                    std::abs(omega(group.identity, g) - 1.0)),
           os.str());
  }
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      for (int k = 0; k < n; ++k) {
        double residual = std::abs(omega(g, h) * omega(group.mul(g, h), k) -
                                   omega(g, group.mul(h, k)) * omega(h, k));
        if (residual > report.worst_residual || residual > tolerance) {
          std::ostringstream os;
          os << "cocycle identity at (" << g << "," << h << "," << k << ")";
          record(residual, os.str());
        }
      }
    }
  }
  return report;
}

// Recover omega(g,h) from an explicit matrix family via U_g U_h = omega U_{gh}.
inline Multiplier multiplier_from_matrices(const FiniteGroup& group,
                                           const std::vector<Matrix>& matrices) {
  if (static_cast<int>(matrices.size()) != group.order) {
    throw ShapeMismatch("matrix family does not match group order");
  }
  const int n = group.order;
  Matrix omega(n, n);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      const Matrix& target = matrices[group.mul(g, h)];
      Complex phase = (target.adjoint() * matrices[g] * matrices[h]).trace() /
                      static_cast<double>(target.rows());
      double mod = std::abs(phase);
      if (std::abs(mod - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "product U_" << g << " U_" << h << " is not proportional to U_{gh}";
        throw ValidationError(os.str());
      }
      omega(g, h) = phase / mod;
    }
  }
  return {omega};
}

}  // namespace covest
