#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "covest/cost.hpp"
#include "covest/report.hpp"

namespace covest {

// A fully validated estimation scenario: group, irrep tables, the
// representation under estimation, cost, input state and POVM choices.
struct Scenario {
  std::string name;
  std::shared_ptr<const FiniteGroup> group;
  IrrepTable irreps;    // estimation-side table (may be projective)
  IrrepTable ordinary;  // ordinary table used by Fourier costs

  enum class RepKind { Tilde, Regular, Irrep, Explicit };
  RepKind rep_kind = RepKind::Tilde;
  std::vector<int> tilde_sectors;
  int irrep_index = -1;
  ProjectiveRep representation;  // materialized for every kind

  enum class CostKind { Ml, Fourier, EntanglementFidelity, Table };
  CostKind cost_kind = CostKind::Ml;
  std::vector<double> fourier_coefficients;
  int ef_irrep = -1;
  RealMatrix cost_table;

  enum class StateKind { Class, Optimize, Explicit };
  StateKind state_kind = StateKind::Class;
  std::vector<double> class_weights;
  std::vector<Complex> class_phases;  // empty means sqrt(weights)
  Vector explicit_state;

  enum class PovmKind { Class, Srm, Trivial, Explicit };
  PovmKind povm_kind = PovmKind::Class;
  std::vector<Matrix> explicit_povm;

  std::vector<Matrix> commutant_blocks;  // optional, per tilde sector
};

namespace detail {

[[noreturn]] inline void fail_validation(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

inline const Json& require_field(const Json& node, const std::string& key,
                                 const std::string& path) {
  if (!node.is_object() || !node.contains(key)) {
    fail_validation(path, "missing field '" + key + "'");
  }
  return node.at(key);
}

inline Complex parse_complex(const Json& node, const std::string& path) {
  if (node.is_number()) return Complex(node.get<double>(), 0.0);
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number()) {
    fail_validation(path, "expected [re, im]");
  }
  return Complex(node[0].get<double>(), node[1].get<double>());
}

inline Matrix parse_complex_matrix(const Json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) fail_validation(path, "expected nested array");
  const std::size_t rows = node.size();
  const std::size_t cols = node[0].is_array() ? node[0].size() : 0;
  if (cols == 0) fail_validation(path, "expected nested array of [re, im] pairs");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!node[i].is_array() || node[i].size() != cols) {
      fail_validation(path, "ragged matrix rows");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = parse_complex(node[i][j], path + "[" + std::to_string(i) + "][" +
                                              std::to_string(j) + "]");
    }
  }
  if (!m.allFinite()) fail_validation(path, "non-finite entries");
  return m;
}

inline RealMatrix parse_real_matrix(const Json& node, const std::string& path) {
  Matrix m = parse_complex_matrix(node, path);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0) fail_validation(path, "expected real entries");
  return m.real();
}

inline std::shared_ptr<const FiniteGroup> parse_group(const Json& node,
                                                      const std::string& path) {
  if (!node.is_object()) fail_validation(path, "expected an object");
  if (node.contains("builtin")) {
    const std::string id = node.at("builtin").get<std::string>();
    if (id == "zn") {
      int n = require_field(node, "n", path).get<int>();
      return std::make_shared<const FiniteGroup>(cyclic_group(n));
    }
    if (id == "klein") return std::make_shared<const FiniteGroup>(klein_group());
    if (id == "s3") return std::make_shared<const FiniteGroup>(symmetric_s3());
    if (id == "d4") return std::make_shared<const FiniteGroup>(dihedral_d4());
    if (id == "q8") return std::make_shared<const FiniteGroup>(quaternion_q8());
    fail_validation(path + ".builtin", "unknown group '" + id + "'");
  }
  if (node.contains("product")) {
    const Json& factors = node.at("product");
    if (!factors.is_array() || factors.size() != 2) {
      fail_validation(path + ".product", "expected two factors");
    }
    auto left = parse_group(factors[0], path + ".product[0]");
    auto right = parse_group(factors[1], path + ".product[1]");
    return std::make_shared<const FiniteGroup>(direct_product(*left, *right));
  }
  if (node.contains("mult_table")) {
    const Json& rows = node.at("mult_table");
    std::vector<std::vector<int>> table;
    for (const Json& row : rows) table.push_back(row.get<std::vector<int>>());
    return std::make_shared<const FiniteGroup>(build_group(std::move(table)));
  }
  fail_validation(path, "expected builtin, product, or mult_table");
}

inline IrrepTable parse_irreps(const Json& node, std::shared_ptr<const FiniteGroup> group,
                               const std::string& path) {
  if (!node.is_object()) fail_validation(path, "expected an object");
  IrrepTable table;
  if (node.contains("builtin")) {
    const std::string id = node.at("builtin").get<std::string>();
    if (id == "zn") {
      table = catalog_zn(group->order);
    } else if (id == "klein") {
      table = catalog_klein();
    } else if (id == "klein_pauli") {
      table = catalog_klein_pauli();
    } else if (id == "s3") {
      table = catalog_s3();
    } else if (id == "d4") {
      table = catalog_d4();
    } else if (id == "q8") {
      table = catalog_q8();
    } else {
      fail_validation(path + ".builtin", "unknown irrep table '" + id + "'");
    }
    if (table.group->mult != group->mult) {
      fail_validation(path, "irrep table '" + id + "' does not match the scenario group");
    }
    return table;
  }
  if (node.contains("explicit")) {
    const Json& spec = node.at("explicit");
    Multiplier omega = Multiplier::trivial(group->order);
    if (spec.contains("multiplier")) {
      const Json& mult = spec.at("multiplier");
      if (mult.contains("table")) {
        omega.omega = parse_complex_matrix(mult.at("table"), path + ".explicit.multiplier.table");
      }
    }
    CocycleReport cocycle = validate_cocycle(*group, omega);
    if (!cocycle.pass) {
      fail_validation(path + ".explicit.multiplier", "invalid cocycle: " + cocycle.worst_violation);
    }
    std::vector<ProjectiveRep> irreps;
    const Json& list = require_field(spec, "irreps", path + ".explicit");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Json& matrices =
          require_field(list[i], "matrices", path + ".explicit.irreps[" + std::to_string(i) + "]");
      ProjectiveRep rep{group, omega, 0, {}};
      for (const Json& m : matrices) {
        rep.matrices.push_back(
            parse_complex_matrix(m, path + ".explicit.irreps[" + std::to_string(i) + "].matrices"));
      }
      if (static_cast<int>(rep.matrices.size()) != group->order) {
        fail_validation(path + ".explicit.irreps[" + std::to_string(i) + "]",
                        "one matrix per group element expected");
      }
      rep.dim = static_cast<int>(rep.matrices[0].rows());
      RepReport report = validate_rep(rep);
      if (!report.pass) {
        fail_validation(path + ".explicit.irreps[" + std::to_string(i) + "]",
                        "matrices do not form a projective representation (residual " +
                            std::to_string(report.worst_residual) + ")");
      }
      irreps.push_back(std::move(rep));
    }
    return make_irrep_table(group, omega, std::move(irreps));
  }
  fail_validation(path, "expected builtin or explicit irreps");
}

}  // namespace detail

inline Scenario load_scenario_from_json(const Json& doc) {
  using detail::fail_validation;
  using detail::require_field;
  if (!doc.is_object()) fail_validation("$", "scenario must be an object");
  if (!doc.contains("schema_version") || doc.at("schema_version").get<int>() != 1) {
    fail_validation("$.schema_version", "expected schema_version 1");
  }
  Scenario s;
  s.name = require_field(doc, "name", "$").get<std::string>();
  s.group = detail::parse_group(require_field(doc, "group", "$"), "$.group");
  s.irreps = detail::parse_irreps(require_field(doc, "irreps", "$"), s.group, "$.irreps");
  if (doc.contains("ordinary_irreps")) {
    s.ordinary = detail::parse_irreps(doc.at("ordinary_irreps"), s.group, "$.ordinary_irreps");
    if (!s.ordinary.omega.is_trivial(1e-9)) {
      fail_validation("$.ordinary_irreps", "ordinary table must have the trivial multiplier");
    }
  } else if (s.irreps.omega.is_trivial(1e-9)) {
    s.ordinary = s.irreps;
  }

  const Json& rep = require_field(doc, "representation", "$");
  const std::string rep_kind = require_field(rep, "kind", "$.representation").get<std::string>();
  if (rep_kind == "tilde") {
    s.rep_kind = Scenario::RepKind::Tilde;
    s.tilde_sectors =
        require_field(rep, "sectors", "$.representation").get<std::vector<int>>();
    TildeStructure t = make_tilde(s.irreps, s.tilde_sectors);
    s.representation = tilde_rep(t);
  } else if (rep_kind == "regular") {
    s.rep_kind = Scenario::RepKind::Regular;
    s.representation = regular_rep(s.group, s.irreps.omega);
  } else if (rep_kind == "irrep") {
    s.rep_kind = Scenario::RepKind::Irrep;
    s.irrep_index = require_field(rep, "index", "$.representation").get<int>();
    if (s.irrep_index < 0 || s.irrep_index >= s.irreps.size()) {
      fail_validation("$.representation.index", "irrep index out of range");
    }
    s.representation = s.irreps.irreps[s.irrep_index];
  } else if (rep_kind == "explicit") {
    s.rep_kind = Scenario::RepKind::Explicit;
    const Json& matrices = require_field(rep, "matrices", "$.representation");
    ProjectiveRep r{s.group, s.irreps.omega, 0, {}};
    for (const Json& m : matrices) {
      r.matrices.push_back(detail::parse_complex_matrix(m, "$.representation.matrices"));
    }
    if (static_cast<int>(r.matrices.size()) != s.group->order) {
      fail_validation("$.representation.matrices", "one matrix per group element expected");
    }
    r.dim = static_cast<int>(r.matrices[0].rows());
    RepReport report = validate_rep(r);
    if (!report.pass) {
      fail_validation("$.representation.matrices",
                      "not a projective representation for the scenario multiplier");
    }
    // Dimension census against the table.
    int accounted = 0;
    for (int mu = 0; mu < s.irreps.size(); ++mu) {
      try {
        accounted += multiplicity_of(r, s.irreps.irreps[mu]) * s.irreps.dim(mu);
      } catch (const NotIntegral& e) {
        fail_validation("$.representation.matrices", e.what());
      }
    }
    if (accounted != r.dim) {
      fail_validation("$.representation.matrices",
                      "irrep table accounts for dimension " + std::to_string(accounted) +
                          " but the representation has dimension " + std::to_string(r.dim));
    }
    s.representation = std::move(r);
  } else {
    fail_validation("$.representation.kind", "unknown kind '" + rep_kind + "'");
  }

  const Json& cost = require_field(doc, "cost", "$");
  const std::string cost_kind = require_field(cost, "kind", "$.cost").get<std::string>();
  const bool needs_ordinary =
      (cost_kind == "ml" || cost_kind == "fourier" || cost_kind == "entanglement_fidelity");
  if (needs_ordinary && s.ordinary.group == nullptr) {
    fail_validation("$.ordinary_irreps",
                    "required for Fourier-form costs when the estimation table is projective");
  }
  if (cost_kind == "ml") {
    s.cost_kind = Scenario::CostKind::Ml;
  } else if (cost_kind == "fourier") {
    s.cost_kind = Scenario::CostKind::Fourier;
    s.fourier_coefficients =
        require_field(cost, "coefficients", "$.cost").get<std::vector<double>>();
    if (static_cast<int>(s.fourier_coefficients.size()) != s.ordinary.size()) {
      fail_validation("$.cost.coefficients", "one coefficient per ordinary irrep expected");
    }
  } else if (cost_kind == "entanglement_fidelity") {
    s.cost_kind = Scenario::CostKind::EntanglementFidelity;
    s.ef_irrep = require_field(cost, "irrep", "$.cost").get<int>();
    if (s.ef_irrep < 0 || s.ef_irrep >= s.irreps.size()) {
      fail_validation("$.cost.irrep", "irrep index out of range");
    }
  } else if (cost_kind == "table") {
    s.cost_kind = Scenario::CostKind::Table;
    s.cost_table = detail::parse_real_matrix(require_field(cost, "table", "$.cost"),
                                             "$.cost.table");
    if (s.cost_table.rows() != s.group->order || s.cost_table.cols() != s.group->order) {
      fail_validation("$.cost.table", "expected a |G| x |G| table");
    }
  } else {
    fail_validation("$.cost.kind", "unknown kind '" + cost_kind + "'");
  }

  const Json& state = require_field(doc, "state", "$");
  const std::string state_kind = require_field(state, "kind", "$.state").get<std::string>();
  if (state_kind == "class") {
    s.state_kind = Scenario::StateKind::Class;
    s.class_weights = require_field(state, "weights", "$.state").get<std::vector<double>>();
    if (state.contains("phases")) {
      for (std::size_t i = 0; i < state.at("phases").size(); ++i) {
        s.class_phases.push_back(detail::parse_complex(
            state.at("phases")[i], "$.state.phases[" + std::to_string(i) + "]"));
      }
    }
  } else if (state_kind == "optimize") {
    s.state_kind = Scenario::StateKind::Optimize;
  } else if (state_kind == "explicit") {
    s.state_kind = Scenario::StateKind::Explicit;
    const Json& entries = require_field(state, "vector", "$.state");
    s.explicit_state = Vector(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      s.explicit_state(i) =
          detail::parse_complex(entries[i], "$.state.vector[" + std::to_string(i) + "]");
    }
  } else {
    fail_validation("$.state.kind", "unknown kind '" + state_kind + "'");
  }

  const Json& povm = require_field(doc, "povm", "$");
  const std::string povm_kind = require_field(povm, "kind", "$.povm").get<std::string>();
  if (povm_kind == "class") {
    s.povm_kind = Scenario::PovmKind::Class;
  } else if (povm_kind == "srm") {
    s.povm_kind = Scenario::PovmKind::Srm;
  } else if (povm_kind == "trivial") {
    s.povm_kind = Scenario::PovmKind::Trivial;
  } else if (povm_kind == "explicit") {
    s.povm_kind = Scenario::PovmKind::Explicit;
    const Json& elements = require_field(povm, "elements", "$.povm");
    for (const Json& e : elements) {
      s.explicit_povm.push_back(detail::parse_complex_matrix(e, "$.povm.elements"));
    }
    if (static_cast<int>(s.explicit_povm.size()) != s.group->order) {
      fail_validation("$.povm.elements", "one element per group element expected");
    }
  } else {
    fail_validation("$.povm.kind", "unknown kind '" + povm_kind + "'");
  }

  if (doc.contains("commutant_unitary")) {
    const Json& blocks = require_field(doc.at("commutant_unitary"), "blocks",
                                       "$.commutant_unitary");
    for (const Json& b : blocks) {
      s.commutant_blocks.push_back(
          detail::parse_complex_matrix(b, "$.commutant_unitary.blocks"));
    }
  }
  return s;
}

// Scenario paths resolve as given, then under $COVEST_FIXTURES, then under
// ./scenarios; a bare name may omit the .json suffix.
inline std::filesystem::path resolve_scenario_path(const std::string& arg) {
  namespace fs = std::filesystem;
  std::vector<fs::path> candidates{arg, std::string(arg) + ".json"};
  if (const char* fixtures = std::getenv("COVEST_FIXTURES")) {
    candidates.push_back(fs::path(fixtures) / arg);
    candidates.push_back(fs::path(fixtures) / (arg + ".json"));
  }
  candidates.push_back(fs::path("scenarios") / arg);
  candidates.push_back(fs::path("scenarios") / (arg + ".json"));
  for (const fs::path& candidate : candidates) {
    if (fs::exists(candidate) && fs::is_regular_file(candidate)) return candidate;
  }
  throw ParseError("cannot find scenario file '" + arg + "'");
}

inline Scenario load_scenario(const std::string& path_arg) {
  std::filesystem::path path = resolve_scenario_path(path_arg);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return load_scenario_from_json(doc);
}

}  // namespace covest
