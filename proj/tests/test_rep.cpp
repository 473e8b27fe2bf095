#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace covest;

namespace {

ProjectiveRep trivial_rep(std::shared_ptr<const FiniteGroup> group, int dim) {
  ProjectiveRep rep{group, Multiplier::trivial(group->order), dim, {}};
  for (int g = 0; g < group->order; ++g) rep.matrices.push_back(Matrix::Identity(dim, dim));
  return rep;
}

ProjectiveRep pauli_rep() {
  auto group = std::make_shared<const FiniteGroup>(klein_group());
  std::vector<Matrix> matrices = pauli_family();
  Multiplier omega = multiplier_from_matrices(*group, matrices);
  return {group, omega, 2, matrices};
}

}  // namespace

TEST_CASE("validate_rep", "[rep]") {
  SECTION("Pauli family with its sign cocycle passes") {
    RepReport report = validate_rep(pauli_rep());
    REQUIRE(report.pass);
    REQUIRE(report.worst_residual < 1e-12);
  }
  SECTION("trivial representation passes") {
    auto group = std::make_shared<const FiniteGroup>(symmetric_s3());
    REQUIRE(validate_rep(trivial_rep(group, 3)).pass);
  }
  SECTION("Pauli family with the trivial cocycle fails") {
    ProjectiveRep rep = pauli_rep();
    rep.omega = Multiplier::trivial(4);
    RepReport report = validate_rep(rep);
    REQUIRE_FALSE(report.pass);
    REQUIRE(report.worst_residual > 1.0);  // a sign flip, not a rounding issue
    REQUIRE(report.worst_g >= 0);
    REQUIRE(report.worst_h >= 0);
  }
}

TEST_CASE("characters", "[rep]") {
  SECTION("trivial rep of dimension d") {
    auto group = std::make_shared<const FiniteGroup>(cyclic_group(4));
    auto chi = character(trivial_rep(group, 3));
    for (const Complex& value : chi) REQUIRE(value.real() == Catch::Approx(3.0));
  }
  SECTION("Pauli projective rep of Klein: chi = (2, 0, 0, 0)") {
    auto chi = character(pauli_rep());
    REQUIRE(chi[0].real() == Catch::Approx(2.0));
    for (int g = 1; g < 4; ++g) REQUIRE(std::abs(chi[g]) < 1e-12);
  }
  SECTION("S3 standard irrep: (2, 0, -1) on classes") {
    IrrepTable s3 = catalog_s3();
    auto chi = character(s3.irreps[2]);
    ConjugacyClasses classes = conjugacy_classes(*s3.group);
    std::vector<double> expected = {2.0, 0.0, -1.0};
    for (int g = 0; g < 6; ++g) {
      REQUIRE(chi[g].real() == Catch::Approx(expected[classes.class_of[g]]).margin(1e-12));
      REQUIRE(std::abs(chi[g].imag()) < 1e-12);
    }
  }
  SECTION("class constancy for ordinary reps") {
    IrrepTable d4 = catalog_d4();
    ConjugacyClasses classes = conjugacy_classes(*d4.group);
    for (const auto& chi : d4.characters) {
      for (int g = 0; g < 8; ++g) {
        for (int h = 0; h < 8; ++h) {
          if (classes.class_of[g] == classes.class_of[h]) {
            REQUIRE(std::abs(chi[g] - chi[h]) < 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("multiplicity_of", "[rep]") {
  SECTION("regular rep of S3 contains the 2-dim irrep twice") {
    IrrepTable s3 = catalog_s3();
    ProjectiveRep reg = regular_rep(s3.group, Multiplier::trivial(6));
    REQUIRE(multiplicity_of(reg, s3.irreps[2]) == 2);
    REQUIRE(multiplicity_of(reg, s3.irreps[0]) == 1);
    REQUIRE(multiplicity_of(reg, s3.irreps[1]) == 1);
  }
  SECTION("Pauli rep contains itself once") {
    ProjectiveRep rep = pauli_rep();
    REQUIRE(multiplicity_of(rep, rep) == 1);
  }
  SECTION("trivial vs sign of S3 is zero") {
    IrrepTable s3 = catalog_s3();
    REQUIRE(multiplicity_of(trivial_rep(s3.group, 1), s3.irreps[1]) == 0);
  }
  SECTION("non-integral pairing is rejected") {
    IrrepTable s3 = catalog_s3();
    ProjectiveRep bogus = trivial_rep(s3.group, 1);
    bogus.matrices[3](0, 0) = 0.5;  // not a representation
    REQUIRE_THROWS_AS(multiplicity_of(bogus, s3.irreps[0]), NotIntegral);
  }
}

TEST_CASE("tensor_conj_multiplicity", "[rep]") {
  SECTION("Klein: every ordinary irrep appears once in pauli x pauli*") {
    IrrepTable ordinary = catalog_klein();
    ProjectiveRep pauli = pauli_rep();
    for (int sigma = 0; sigma < 4; ++sigma) {
      REQUIRE(tensor_conj_multiplicity(ordinary.irreps[sigma], pauli, pauli) == 1);
    }
  }
  SECTION("Z4: m = 1 iff sigma = mu - nu mod 4") {
    IrrepTable z4 = catalog_zn(4);
    for (int sigma = 0; sigma < 4; ++sigma) {
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
          int expected = (sigma == ((mu - nu) % 4 + 4) % 4) ? 1 : 0;
          REQUIRE(tensor_conj_multiplicity(z4.irreps[sigma], z4.irreps[mu], z4.irreps[nu]) ==
                  expected);
        }
      }
    }
  }
  SECTION("trivial sigma pairs an irrep with its own conjugate once") {
    IrrepTable s3 = catalog_s3();
    for (int mu = 0; mu < 3; ++mu) {
      REQUIRE(tensor_conj_multiplicity(s3.irreps[0], s3.irreps[mu], s3.irreps[mu]) == 1);
    }
  }
}

TEST_CASE("regular representation", "[rep]") {
  SECTION("Z2 regular rep is the permutation matrices") {
    auto group = std::make_shared<const FiniteGroup>(cyclic_group(2));
    ProjectiveRep reg = regular_rep(group, Multiplier::trivial(2));
    REQUIRE((reg.at(0) - Matrix::Identity(2, 2)).norm() < 1e-15);
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    REQUIRE((reg.at(1) - swap).norm() < 1e-15);
  }
  SECTION("Klein regular rep with the Pauli cocycle validates; chi = (4,0,0,0)") {
    auto group = std::make_shared<const FiniteGroup>(klein_group());
    Multiplier omega = multiplier_from_matrices(*group, pauli_family());
    ProjectiveRep reg = regular_rep(group, omega);
    REQUIRE(validate_rep(reg).pass);
    auto chi = character(reg);
    REQUIRE(chi[0].real() == Catch::Approx(4.0));
    for (int g = 1; g < 4; ++g) REQUIRE(std::abs(chi[g]) < 1e-12);
    // The single 2-dim projective irrep appears with multiplicity 2.
    IrrepTable table = catalog_klein_pauli();
    REQUIRE(multiplicity_of(reg, table.irreps[0]) == 2);
  }
  SECTION("S3 regular rep has character (6, 0, 0)") {
    IrrepTable s3 = catalog_s3();
    ProjectiveRep reg = regular_rep(s3.group, Multiplier::trivial(6));
    REQUIRE(validate_rep(reg).pass);
    auto chi = character(reg);
    REQUIRE(chi[0].real() == Catch::Approx(6.0));
    for (int g = 1; g < 6; ++g) REQUIRE(std::abs(chi[g]) < 1e-12);
  }
}

TEST_CASE("irrep catalog validates", "[rep]") {
  for (const IrrepTable& table :
       {catalog_zn(1), catalog_zn(4), catalog_zn(8), catalog_klein(), catalog_klein_pauli(),
        catalog_s3(), catalog_d4(), catalog_q8()}) {
    TableReport report = validate_table(table);
    REQUIRE(report.pass);
    REQUIRE(table.complete());
    REQUIRE(validate_cocycle(*table.group, table.omega).pass);
  }
}

TEST_CASE("isotypic decomposition", "[rep]") {
  SECTION("a rep already in block form decomposes exactly") {
    IrrepTable s3 = catalog_s3();
    ProjectiveRep rep{s3.group, s3.omega, 4, {}};
    for (int g = 0; g < 6; ++g) {
      Matrix block = Matrix::Zero(4, 4);
      block.block(0, 0, 2, 2) = kron(s3.irreps[2].at(g), Matrix::Identity(1, 1));
      block.block(2, 2, 2, 2) = kron(s3.irreps[0].at(g), Matrix::Identity(2, 2));
      rep.matrices.push_back(block);
    }
    IsotypicDecomposition dec = isotypic_decompose(rep, s3);
    REQUIRE(dec.components.size() == 2);
    REQUIRE(dec.components[0].irrep == 0);
    REQUIRE(dec.components[0].multiplicity == 2);
    REQUIRE(dec.components[1].irrep == 2);
    REQUIRE(dec.components[1].multiplicity == 1);
    REQUIRE(dec.max_block_residual <= 1e-9);
    REQUIRE(dec.unitarity_residual <= 1e-10);
  }
  SECTION("regular rep of Klein: four 1-dim components") {
    IrrepTable klein = catalog_klein();
    ProjectiveRep reg = regular_rep(klein.group, Multiplier::trivial(4));
    IsotypicDecomposition dec = isotypic_decompose(reg, klein);
    REQUIRE(dec.components.size() == 4);
    for (const auto& c : dec.components) {
      REQUIRE(c.dim == 1);
      REQUIRE(c.multiplicity == 1);
    }
    REQUIRE(dec.max_block_residual <= 1e-9);
  }
  SECTION("regular rep of S3: components (1,1), (1,1), (2,2)") {
    IrrepTable s3 = catalog_s3();
    ProjectiveRep reg = regular_rep(s3.group, Multiplier::trivial(6));
    IsotypicDecomposition dec = isotypic_decompose(reg, s3);
    REQUIRE(dec.components.size() == 3);
    REQUIRE(dec.components[2].dim == 2);
    REQUIRE(dec.components[2].multiplicity == 2);
    REQUIRE(dec.max_block_residual <= 1e-9);
    REQUIRE(dec.unitarity_residual <= 1e-10);
  }
  SECTION("regular rep of Klein with Pauli cocycle: single sector, multiplicity 2") {
    IrrepTable table = catalog_klein_pauli();
    ProjectiveRep reg = regular_rep(table.group, table.omega);
    IsotypicDecomposition dec = isotypic_decompose(reg, table);
    REQUIRE(dec.components.size() == 1);
    REQUIRE(dec.components[0].dim == 2);
    REQUIRE(dec.components[0].multiplicity == 2);
    REQUIRE(dec.max_block_residual <= 1e-9);
  }
  SECTION("incomplete table is reported") {
    IrrepTable s3 = catalog_s3();
    IrrepTable partial = s3;
    partial.irreps.pop_back();
    partial.characters.pop_back();
    ProjectiveRep reg = regular_rep(s3.group, Multiplier::trivial(6));
    REQUIRE_THROWS_AS(isotypic_decompose(reg, partial), IncompleteTable);
  }
}

TEST_CASE("multiplicities agree between routes on scenario reps", "[rep]") {
  // isotypic_decompose derives its counts from multiplicity_of; this checks
  // the component list against an independent recount, rep by rep.
  for (const IrrepTable& table : {catalog_klein(), catalog_s3(), catalog_d4(), catalog_q8()}) {
    ProjectiveRep reg = regular_rep(table.group, table.omega);
    IsotypicDecomposition dec = isotypic_decompose(reg, table);
    for (const auto& c : dec.components) {
      REQUIRE(c.multiplicity == multiplicity_of(reg, table.irreps[c.irrep]));
      REQUIRE(c.multiplicity == c.dim);  // regular rep structure
    }
  }
}

TEST_CASE("Plancherel intertwiner", "[rep]") {
  SECTION("Z2: the 2x2 Fourier matrix") {
    IrrepTable z2 = catalog_zn(2);
    Matrix v = plancherel_intertwiner(z2);
    Matrix expected(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    expected << s, s, s, -s;
    REQUIRE((v - expected).norm() < 1e-12);
  }
  SECTION("Klein/Pauli: columns are the rescaled Pauli double kets") {
    IrrepTable table = catalog_klein_pauli();
    Matrix v = plancherel_intertwiner(table);
    for (int g = 0; g < 4; ++g) {
      Vector expected = double_ket(pauli_family()[g]) / std::sqrt(2.0);
      REQUIRE((v.col(g) - expected).norm() < 1e-12);
    }
  }
  SECTION("unitarity and intertwining for Z_N, Klein (both multipliers), S3") {
    std::vector<IrrepTable> tables;
    for (int n = 1; n <= 8; ++n) tables.push_back(catalog_zn(n));
    tables.push_back(catalog_klein());
    tables.push_back(catalog_klein_pauli());
    tables.push_back(catalog_s3());
    for (const IrrepTable& table : tables) {
      const int order = table.group->order;
      Matrix v = plancherel_intertwiner(table);
      REQUIRE((v.adjoint() * v - Matrix::Identity(order, order)).norm() <= 1e-10);
      ProjectiveRep reg = regular_rep(table.group, table.omega);
      TildeStructure full = make_tilde(table, [&] {
        std::vector<int> all(table.size());
        std::iota(all.begin(), all.end(), 0);
        return all;
      }());
      double worst = 0.0;
      for (int g = 0; g < order; ++g) {
        worst = std::max(worst, (v * reg.at(g) - tilde_matrix(full, g) * v).norm());
      }
      REQUIRE(worst <= 1e-9);
    }
  }
  SECTION("incomplete table is rejected") {
    IrrepTable partial = catalog_s3();
    partial.irreps.pop_back();
    partial.characters.pop_back();
    REQUIRE_THROWS_AS(plancherel_intertwiner(partial), IncompleteTable);
  }
}

TEST_CASE("modular conjugation", "[rep]") {
  IrrepTable table = catalog_klein_pauli();
  TildeStructure t = make_tilde(table, {0});
  SECTION("identity is a fixed point") {
    REQUIRE((modular_conjugate(Matrix::Identity(4, 4), t) - Matrix::Identity(4, 4)).norm() <
            1e-12);
  }
  SECTION("tilde action maps to its conjugate on the commutant side") {
    for (int g = 0; g < 4; ++g) {
      Matrix expected = kron(Matrix::Identity(2, 2), table.irreps[0].at(g).conjugate());
      REQUIRE((modular_conjugate(tilde_matrix(t, g), t) - expected).norm() < 1e-12);
    }
  }
  SECTION("a purely imaginary block conjugates to its negative") {
    const Complex im(0.0, 1.0);
    Matrix y(2, 2);
    y << 0, -im, im, 0;
    Matrix a = kron(y, Matrix::Identity(2, 2));
    Matrix expected = kron(Matrix::Identity(2, 2), -y);
    REQUIRE((modular_conjugate(a, t) - expected).norm() < 1e-12);
  }
  SECTION("operators outside the bicommutant are rejected") {
    Matrix bad = Matrix::Zero(4, 4);
    bad(0, 1) = 1.0;
    REQUIRE_THROWS_AS(modular_conjugate(bad, t), NotInBicommutant);
  }
  SECTION("applying the conjugation twice returns the input") {
    std::mt19937_64 rng(7);
    IrrepTable s3 = catalog_s3();
    TildeStructure ts3 = make_tilde(s3, {0, 1, 2});
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Matrix> blocks;
      for (const TildeSector& sec : ts3.sectors) {
        blocks.push_back(test::random_matrix(sec.dim, sec.dim, rng));
      }
      Matrix a = bicommutant_embed(ts3, blocks);
      Matrix conjugated = modular_conjugate(a, ts3);
      REQUIRE((modular_conjugate(conjugated, ts3) - a).norm() < 1e-9);
    }
  }
}

TEST_CASE("swap map", "[rep]") {
  IrrepTable s3 = catalog_s3();
  TildeStructure t = make_tilde(s3, {0, 1, 2});
  std::mt19937_64 rng(8);
  SECTION("identity fixed point") {
    Matrix eye = Matrix::Identity(t.total_dim, t.total_dim);
    REQUIRE((swap_map(eye, t) - eye).norm() < 1e-15);
  }
  SECTION("A tensor B maps to B tensor A on a single sector") {
    IrrepTable pauli = catalog_klein_pauli();
    TildeStructure tp = make_tilde(pauli, {0});
    Matrix a = test::random_matrix(2, 2, rng), b = test::random_matrix(2, 2, rng);
    REQUIRE((swap_map(kron(a, b), tp) - kron(b, a)).norm() < 1e-12);
  }
  SECTION("involution on arbitrary operators") {
    Matrix x = test::random_matrix(t.total_dim, t.total_dim, rng);
    REQUIRE((swap_map(swap_map(x, t), t) - x).norm() < 1e-15);
  }
  SECTION("A = S(A^{R*}) for random bicommutant elements") {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Matrix> blocks;
      for (const TildeSector& sec : t.sectors) {
        blocks.push_back(test::random_matrix(sec.dim, sec.dim, rng));
      }
      Matrix a = bicommutant_embed(t, blocks);
      Matrix identity_route = swap_map(modular_conjugate(a, t).conjugate(), t);
      REQUIRE((identity_route - a).norm() <= 1e-12);
    }
  }
  SECTION("shape mismatch is rejected") {
    REQUIRE_THROWS_AS(swap_map(Matrix::Zero(3, 3), t), ShapeMismatch);
  }
}
