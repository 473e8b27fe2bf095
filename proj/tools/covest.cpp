// covest: scenario-driven estimation harness.
//
//   covest <command> --scenario <path> [--format json|csv|text] [--out <path>]
//                    [--tol-override <name>=<value> ...]
//
// Commands: decompose, estimate, optimize, certify, all.
// Exit code 0 on pass, 2 on certificate or invariant failure, 1 on error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covest/covest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal estimation strategies for finite group transformations"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string format = "text";
  std::string out_path;
  std::vector<std::string> tol_overrides;

  for (const std::string& name : {"decompose", "estimate", "optimize", "certify", "all"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--scenario", scenario_path, "scenario file (name or path)")->required();
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", out_path, "write the report to a file instead of stdout");
    sub->add_option("--tol-override", tol_overrides, "override a named tolerance, name=value");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    covest::RunOptions options;
    for (const std::string& spec : tol_overrides) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) {
        throw covest::ValidationError("tolerance override must be name=value: " + spec);
      }
      options.tolerances.set(spec.substr(0, eq), std::stod(spec.substr(eq + 1)));
    }
    covest::Scenario scenario = covest::load_scenario(scenario_path);
    covest::Report report =
        covest::run(scenario, app.get_subcommands().front()->get_name(), options);
    std::string rendered = covest::emit(report, format);
    if (out_path.empty()) {
      std::cout << rendered;
    } else {
      std::ofstream out(out_path);
      if (!out) throw covest::ParseError("cannot open output file " + out_path);
      out << rendered;
    }
    return report.pass ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
