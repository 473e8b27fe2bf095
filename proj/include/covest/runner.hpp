#pragma once

#include <map>
#include <string>
#include <vector>

#include "covest/scenario.hpp"

namespace covest {

enum class Command { Decompose, Estimate, Optimize, Certify, All };

inline Command parse_command(const std::string& name) {
  if (name == "decompose") return Command::Decompose;
  if (name == "estimate") return Command::Estimate;
  if (name == "optimize") return Command::Optimize;
  if (name == "certify") return Command::Certify;
  if (name == "all") return Command::All;
  throw ValidationError("unknown command '" + name + "'");
}

inline std::string command_name(Command command) {
  switch (command) {
    case Command::Decompose: return "decompose";
    case Command::Estimate: return "estimate";
    case Command::Optimize: return "optimize";
    case Command::Certify: return "certify";
    case Command::All: return "all";
  }
  return "?";
}

// Named tolerances used by the run-time invariant ledger; each can be
// overridden from the CLI.
struct Tolerances {
  std::map<std::string, double> values{
      {"structural", 1e-10}, {"derived", 1e-9},     {"exact", 1e-12},
      {"srm_match", 1e-10},  {"cert_defect", 1e-9}, {"cert_slack", 1e-9},
      {"opt_grid", 1e-3},    {"psd", 1e-9},
  };

  double get(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw ValidationError("unknown tolerance '" + name + "'");
    return it->second;
  }
  void set(const std::string& name, double value) {
    if (!values.count(name)) throw ValidationError("unknown tolerance '" + name + "'");
    values[name] = value;
  }
};

struct RunOptions {
  Tolerances tolerances;
};

namespace detail {

inline Json json_real_matrix(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Ledger {
  std::vector<Check> checks;
  void add(const std::string& name, double residual, double tolerance) {
    checks.push_back({name, residual, tolerance, residual <= tolerance});
  }
  bool all_pass() const {
    for (const Check& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
  Json to_json() const {
    Json out = Json::array();
    for (const Check& c : checks) {
      Json entry;
      entry["name"] = c.name;
      entry["residual"] = c.residual;
      entry["tolerance"] = c.tolerance;
      entry["pass"] = c.pass;
      out.push_back(std::move(entry));
    }
    return out;
  }
};

inline double povm_psd_residual(const std::vector<Matrix>& elements) {
  double worst = 0.0;
  for (const Matrix& e : elements) {
    worst = std::max(worst, std::max(0.0, -min_eigenvalue(e)) / std::max(1.0, e.norm()));
  }
  return worst;
}

}  // namespace detail

inline Report run(const Scenario& scenario, Command command, const RunOptions& options = {}) {
  const Tolerances& tols = options.tolerances;
  const FiniteGroup& group = *scenario.group;
  detail::Ledger ledger;
  Report report;
  Json& doc = report.doc;

  doc["schema_version"] = 1;
  doc["name"] = scenario.name;
  doc["command"] = command_name(command);
  doc["group"] = Json{{"order", group.order},
                      {"conjugacy_classes",
                       static_cast<int>(conjugacy_classes(group).classes.size())}};
  doc["multiplier"] = Json{{"trivial", scenario.irreps.omega.is_trivial()}};

  // Structural validation feeds the ledger on every command.
  {
    RepReport rep_report = validate_rep(scenario.representation);
    ledger.add("representation_valid", rep_report.worst_residual, tols.get("structural"));
    CocycleReport cocycle = validate_cocycle(group, scenario.irreps.omega);
    ledger.add("multiplier_valid", cocycle.worst_residual, tols.get("exact"));
    TableReport table_report = validate_table(scenario.irreps);
    ledger.add("irrep_table_orthonormal", table_report.worst_orthonormality,
               tols.get("derived"));
  }

  // --- decomposition -------------------------------------------------
  IsotypicDecomposition dec = isotypic_decompose(scenario.representation, scenario.irreps);
  {
    Json components = Json::array();
    for (const IsotypicComponent& c : dec.components) {
      components.push_back(
          Json{{"irrep", c.irrep}, {"dim", c.dim}, {"multiplicity", c.multiplicity}});
    }
    Json decomposition;
    decomposition["components"] = std::move(components);
    decomposition["basis_unitarity_residual"] = dec.unitarity_residual;
    decomposition["max_block_residual"] = dec.max_block_residual;
    ledger.add("isotypic_reconstruction", dec.max_block_residual, tols.get("derived"));
    ledger.add("isotypic_basis_unitary", dec.unitarity_residual, tols.get("structural"));
    if (scenario.irreps.complete()) {
      Matrix v = plancherel_intertwiner(scenario.irreps);
      double unitarity =
          (v.adjoint() * v - Matrix::Identity(group.order, group.order)).norm();
      ProjectiveRep reg = regular_rep(scenario.group, scenario.irreps.omega);
      std::vector<int> all(scenario.irreps.size());
      std::iota(all.begin(), all.end(), 0);
      TildeStructure full = make_tilde(scenario.irreps, all);
      double intertwining = 0.0;
      for (int g = 0; g < group.order; ++g) {
        intertwining =
            std::max(intertwining, (v * reg.at(g) - tilde_matrix(full, g) * v).norm());
      }
      decomposition["plancherel"] =
          Json{{"unitarity_residual", unitarity}, {"intertwining_residual", intertwining}};
      ledger.add("plancherel_unitary", unitarity, tols.get("structural"));
      ledger.add("plancherel_intertwining", intertwining, tols.get("derived"));
    }
    doc["decomposition"] = std::move(decomposition);
  }

  const bool want_certify = command == Command::Certify || command == Command::All;
  const bool want_optimize = command == Command::Optimize || command == Command::All ||
                             scenario.state_kind == Scenario::StateKind::Optimize;

  if (command == Command::Decompose) {
    doc["checks"] = ledger.to_json();
    report.checks_pass = ledger.all_pass();
    report.pass = report.checks_pass;
    doc["checks_pass"] = report.checks_pass;
    doc["pass"] = report.pass;
    return report;
  }

  // --- tilde structure over the sectors in play ----------------------
  std::vector<int> sectors;
  if (scenario.rep_kind == Scenario::RepKind::Tilde) {
    sectors = scenario.tilde_sectors;
  } else {
    for (const IsotypicComponent& c : dec.components) sectors.push_back(c.irrep);
  }

  // --- cost -----------------------------------------------------------
  CostSpec cost;
  switch (scenario.cost_kind) {
    case Scenario::CostKind::Ml:
      cost = ml_cost(scenario.ordinary);
      break;
    case Scenario::CostKind::Fourier:
      cost = cost_from_fourier(scenario.fourier_coefficients, scenario.ordinary);
      break;
    case Scenario::CostKind::EntanglementFidelity:
      cost = entanglement_fidelity_cost(scenario.irreps.irreps[scenario.ef_irrep],
                                        scenario.ordinary);
      break;
    case Scenario::CostKind::Table:
      cost = cost_from_table(scenario.cost_table, group);
      break;
  }
  {
    Json cost_json;
    switch (scenario.cost_kind) {
      case Scenario::CostKind::Ml: cost_json["kind"] = "ml"; break;
      case Scenario::CostKind::Fourier: cost_json["kind"] = "fourier"; break;
      case Scenario::CostKind::EntanglementFidelity:
        cost_json["kind"] = "entanglement_fidelity";
        break;
      case Scenario::CostKind::Table: cost_json["kind"] = "table"; break;
    }
    if (cost.fourier) {
      Json coefficients = Json::array();
      for (double a : *cost.fourier) coefficients.push_back(a);
      cost_json["fourier"] = std::move(coefficients);
    }
    cost_json["left_invariant"] = cost.left_invariant;
    cost_json["right_invariant"] = cost.right_invariant;
    doc["cost"] = std::move(cost_json);
  }

  // --- optimizer (also resolves state kind "optimize") ----------------
  std::vector<double> resolved_weights = scenario.class_weights;
  if (want_optimize) {
    if (!cost.fourier) {
      if (scenario.state_kind == Scenario::StateKind::Optimize) {
        throw ValidationError("state optimization needs a Fourier-form cost");
      }
    } else {
      TildeStructure opt_tilde = make_tilde(scenario.irreps, sectors);
      RealMatrix m = theorem_matrix(*cost.fourier, scenario.ordinary, opt_tilde);
      OptimizeResult optimum = optimize_class_state(m);
      Json optimizer;
      Json weights = Json::array();
      for (double p : optimum.weights) weights.push_back(p);
      optimizer["weights"] = std::move(weights);
      optimizer["cost"] = optimum.cost;
      optimizer["degenerate_fallback"] = optimum.degenerate_fallback;
      optimizer["theorem_matrix"] = detail::json_real_matrix(m);
      if (optimum.grid_cost) {
        optimizer["grid_cost"] = *optimum.grid_cost;
        ledger.add("optimizer_grid_agreement", std::abs(*optimum.grid_cost - optimum.cost),
                   tols.get("opt_grid"));
      }
      doc["optimizer"] = std::move(optimizer);
      if (scenario.state_kind == Scenario::StateKind::Optimize) {
        resolved_weights = optimum.weights;
      }
    }
  }

  if (command == Command::Optimize) {
    doc["checks"] = ledger.to_json();
    report.checks_pass = ledger.all_pass();
    report.pass = report.checks_pass;
    doc["checks_pass"] = report.checks_pass;
    doc["pass"] = report.pass;
    return report;
  }

  // Drop zero-weight sectors before building states and seeds.
  std::vector<int> live_sectors;
  std::vector<double> live_weights;
  std::vector<Complex> live_phases;
  if (scenario.state_kind == Scenario::StateKind::Explicit) {
    live_sectors = sectors;
  } else {
    if (resolved_weights.size() != sectors.size()) {
      throw ValidationError("state weights do not match the sectors in play");
    }
    for (std::size_t i = 0; i < sectors.size(); ++i) {
      if (resolved_weights[i] > 1e-15) {
        live_sectors.push_back(sectors[i]);
        live_weights.push_back(resolved_weights[i]);
        if (!scenario.class_phases.empty() &&
            scenario.state_kind == Scenario::StateKind::Class) {
          live_phases.push_back(scenario.class_phases[i]);
        }
      }
    }
    if (live_sectors.empty()) throw ValidationError("all state weights vanish");
  }
  TildeStructure tilde = make_tilde(scenario.irreps, live_sectors);
  ProjectiveRep est_rep = tilde_rep(tilde);
  {
    Json tilde_json;
    Json sector_json = Json::array();
    for (const TildeSector& sec : tilde.sectors) {
      sector_json.push_back(Json{{"irrep", sec.irrep}, {"dim", sec.dim}});
    }
    tilde_json["sectors"] = std::move(sector_json);
    tilde_json["total_dim"] = tilde.total_dim;
    tilde_json["dropped_sectors"] =
        static_cast<int>(sectors.size() - live_sectors.size());
    doc["tilde"] = std::move(tilde_json);
  }

  // --- state ----------------------------------------------------------
  Matrix rho;
  std::optional<ClassState> class_st;
  if (scenario.state_kind == Scenario::StateKind::Explicit) {
    if (scenario.explicit_state.size() != tilde.total_dim) {
      throw ValidationError("explicit state does not match the tilde dimension");
    }
    Vector v = scenario.explicit_state;
    double norm = v.norm();
    if (norm <= 0.0) throw ValidationError("explicit state has zero norm");
    v /= norm;
    rho = v * v.adjoint();
  } else {
    if (!live_phases.empty()) {
      class_st = class_state(live_phases, tilde);
    } else {
      class_st = class_state(live_weights, tilde);
    }
    rho = class_st->state * class_st->state.adjoint();
  }
  {
    Json state_json;
    switch (scenario.state_kind) {
      case Scenario::StateKind::Class: state_json["kind"] = "class"; break;
      case Scenario::StateKind::Optimize: state_json["kind"] = "optimize"; break;
      case Scenario::StateKind::Explicit: state_json["kind"] = "explicit"; break;
    }
    if (class_st) {
      Json weights = Json::array();
      for (double p : class_st->weights) weights.push_back(p);
      state_json["weights"] = std::move(weights);
    }
    doc["state"] = std::move(state_json);
    ledger.add("state_trace", std::abs(rho.trace().real() - 1.0), tols.get("derived"));
    ledger.add("state_psd", std::max(0.0, -min_eigenvalue(rho)), tols.get("psd"));
  }

  // --- POVM -----------------------------------------------------------
  std::vector<Matrix> povm;
  bool covariant_isotropic_povm = false;
  switch (scenario.povm_kind) {
    case Scenario::PovmKind::Class: {
      Matrix seed = class_seed(tilde);
      CovariantPovm cp = covariant_povm(seed, est_rep);
      povm = cp.elements;
      covariant_isotropic_povm = true;
      ledger.add("seed_completeness", seed_completeness_defect(seed, est_rep),
                 tols.get("derived"));
      ledger.add("seed_isotropic", isotropy_defect(seed, tilde) / std::max(1.0, seed.norm()),
                 tols.get("derived"));
      BlockSumDefects block_sums = isotropic_block_sums(seed, tilde);
      ledger.add("seed_block_sums", std::max(block_sums.left, block_sums.right),
                 tols.get("derived"));
      // Elements carry the Haar weight; the seed-conjugate form U_g xi U_g^dag
      // is reported alongside.
      doc["povm"] = Json{{"kind", "class"},
                         {"outcomes", static_cast<int>(povm.size())},
                         {"element_trace", seed.trace().real() / group.order},
                         {"seed_conjugate_trace", seed.trace().real()}};
      break;
    }
    case Scenario::PovmKind::Srm: {
      std::vector<WeightedState> ensemble;
      for (int g = 0; g < group.order; ++g) {
        ensemble.push_back(
            {1.0 / group.order, est_rep.at(g) * rho * est_rep.at(g).adjoint()});
      }
      povm = srm(ensemble);
      doc["povm"] = Json{{"kind", "srm"}, {"outcomes", static_cast<int>(povm.size())}};
      break;
    }
    case Scenario::PovmKind::Trivial: {
      povm.assign(group.order,
                  Matrix::Identity(tilde.total_dim, tilde.total_dim) / group.order);
      covariant_isotropic_povm = true;  // seed I is isotropic
      doc["povm"] = Json{{"kind", "trivial"},
                         {"outcomes", group.order},
                         {"element_trace", static_cast<double>(tilde.total_dim) / group.order},
                         {"seed_conjugate_trace", static_cast<double>(tilde.total_dim)}};
      break;
    }
    case Scenario::PovmKind::Explicit: {
      povm = scenario.explicit_povm;
      for (const Matrix& e : povm) {
        if (e.rows() != tilde.total_dim || e.cols() != tilde.total_dim) {
          throw ValidationError("explicit POVM does not match the tilde dimension");
        }
      }
      doc["povm"] = Json{{"kind", "explicit"}, {"outcomes", static_cast<int>(povm.size())}};
      break;
    }
  }
  ledger.add("povm_completeness", povm_completeness_defect(povm), tols.get("derived"));
  ledger.add("povm_psd", detail::povm_psd_residual(povm), tols.get("psd"));

  // --- estimation -----------------------------------------------------
  CostEvaluation eval = evaluate_costs(rho, povm, cost, est_rep);
  {
    Json estimation;
    estimation["c_ave"] = eval.ave;
    estimation["c_wc"] = eval.wc;
    Json per_g = Json::array();
    for (double c : eval.per_g) per_g.push_back(c);
    estimation["per_g_cost"] = std::move(per_g);
    estimation["success_probability"] = eval.success_avg;
    estimation["error_probability"] = 1.0 - eval.success_avg;
    estimation["conditional_probabilities"] = detail::json_real_matrix(eval.cond_prob);
    doc["estimation"] = std::move(estimation);
  }

  const bool invariant_cost = cost.left_invariant && cost.right_invariant;
  if (invariant_cost && covariant_isotropic_povm && is_isotropic(rho, tilde)) {
    double spread = *std::max_element(eval.per_g.begin(), eval.per_g.end()) -
                    *std::min_element(eval.per_g.begin(), eval.per_g.end());
    ledger.add("flat_risk", spread, tols.get("derived"));
  }

  // Closed-form cost agreement for class pairs with Fourier costs.
  if (cost.fourier && class_st && scenario.povm_kind == Scenario::PovmKind::Class) {
    RealMatrix m = theorem_matrix(*cost.fourier, scenario.ordinary, tilde);
    double value = theorem_cost(class_st->weights, m);
    Json theorem;
    theorem["value"] = value;
    theorem["matrix"] = detail::json_real_matrix(m);
    theorem["agreement_residual"] = std::abs(eval.ave - value);
    doc["theorem"] = std::move(theorem);
    ledger.add("closed_form_cost_agreement", std::abs(eval.ave - value), tols.get("derived"));
  }

  // SRM of the orbit reproduces the class POVM elementwise.
  if (class_st && scenario.povm_kind == Scenario::PovmKind::Class) {
    std::vector<WeightedState> ensemble;
    for (int g = 0; g < group.order; ++g) {
      ensemble.push_back({1.0 / group.order, est_rep.at(g) * rho * est_rep.at(g).adjoint()});
    }
    std::vector<Matrix> srm_povm = srm(ensemble);
    double worst = (srm_povm.size() == povm.size()) ? 0.0 : 1.0;
    if (srm_povm.size() == povm.size()) {
      for (std::size_t i = 0; i < povm.size(); ++i) {
        worst = std::max(worst, (srm_povm[i] - povm[i]).norm());
      }
    }
    ledger.add("srm_matches_class_povm", worst, tols.get("srm_match"));
  }

  if (class_st) {
    // Conjugation by U_g and by the inverse of its modular conjugate agree
    // on the state projector.
    double worst = 0.0;
    for (int g = 0; g < group.order; ++g) {
      Matrix u = tilde_matrix(tilde, g);
      Matrix ur = modular_conjugate(u, tilde);
      worst = std::max(worst, (u * rho * u.adjoint() - ur.adjoint() * rho * ur).norm());
    }
    ledger.add("modular_action_agreement", worst, tols.get("structural"));

    double overlap_worst = 0.0;
    for (int g = 0; g < group.order; ++g) {
      for (int h = 0; h < group.order; ++h) {
        overlap_worst = std::max(
            overlap_worst, std::abs(orbit_overlap(*class_st, g, h, tilde) -
                                    orbit_overlap_direct(*class_st, g, h, tilde)));
      }
    }
    ledger.add("orbit_overlap_agreement", overlap_worst, tols.get("exact"));
  }

  // Commutant rotations leave the SRM statistics unchanged.
  if (!scenario.commutant_blocks.empty() && class_st) {
    if (scenario.commutant_blocks.size() != static_cast<std::size_t>(tilde.sector_count())) {
      throw ValidationError("commutant unitary blocks do not match the tilde sectors");
    }
    for (int i = 0; i < tilde.sector_count(); ++i) {
      const Matrix& b = scenario.commutant_blocks[i];
      if (b.rows() != tilde.sectors[i].dim ||
          (b.adjoint() * b - Matrix::Identity(b.rows(), b.cols())).norm() > 1e-9) {
        throw ValidationError("commutant unitary block " + std::to_string(i) +
                              " is not unitary of the sector dimension");
      }
    }
    Matrix v = commutant_embed(tilde, scenario.commutant_blocks);
    Vector psi = v * class_st->state;
    std::vector<WeightedState> rotated;
    for (int g = 0; g < group.order; ++g) {
      Vector vg = est_rep.at(g) * psi;
      rotated.push_back({1.0 / group.order, vg * vg.adjoint()});
    }
    std::vector<Matrix> srm_rotated = srm(rotated);
    CovariantPovm class_povm = covariant_povm(class_seed(tilde), est_rep);
    double worst = 0.0;
    for (int g = 0; g < group.order; ++g) {
      for (int ghat = 0; ghat < group.order; ++ghat) {
        double p_rotated = (srm_rotated[ghat] * rotated[g].state).trace().real();
        double p_plain = eval.cond_prob(ghat, g);
        worst = std::max(worst, std::abs(p_rotated - p_plain));
      }
    }
    ledger.add("srm_unitary_freedom", worst, tols.get("srm_match"));
  }

  // --- certification ----------------------------------------------------
  if (want_certify) {
    Certificate cert = certify_optimality(rho, povm, cost, est_rep, tols.get("cert_defect"),
                                          tols.get("cert_slack"));
    Json certificate;
    certificate["pass"] = cert.pass;
    certificate["hermiticity_defect"] = cert.hermiticity_defect;
    certificate["min_slack"] = cert.min_slack;
    doc["certificate"] = std::move(certificate);
    report.certificate_pass = cert.pass;
  }

  doc["checks"] = ledger.to_json();
  report.checks_pass = ledger.all_pass();
  report.pass = report.checks_pass && report.certificate_pass;
  doc["checks_pass"] = report.checks_pass;
  doc["pass"] = report.pass;
  return report;
}

inline Report run(const Scenario& scenario, const std::string& command,
                  const RunOptions& options = {}) {
  return run(scenario, parse_command(command), options);
}

}  // namespace covest
