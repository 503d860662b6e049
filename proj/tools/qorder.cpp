// qorder: feasibility checks, circuit synthesis and simulation for comparing
// and sorting quantum states.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qorder/cli.hpp"

int main(int argc, char** argv) {
  using namespace qorder::cli;

  CLI::App app{"Decide, synthesize and simulate comparators and sorters over pure quantum states"};
  app.require_subcommand(1);

  CheckOptions check;
  double check_tol = 0.0;
  auto* check_cmd = app.add_subcommand("check", "Decide whether a comparator, sorter or spec is unitary");
  check_cmd->add_option("file", check.file, "State-set JSON (or spec JSON with --mode spec)")->required();
  check_cmd->add_option("--mode", check.mode, "comparator | sorter | spec")->capture_default_str();
  auto* check_tol_opt = check_cmd->add_option("--tol", check_tol, "Tolerance (default 1e-9 or $QORDER_TOL)");
  check_cmd->add_flag("--json", check.json, "Machine-readable report");

  SynthesizeOptions synth;
  long long synth_n = 0;
  auto* synth_cmd = app.add_subcommand("synthesize", "Build a comparator or sorting network for an orthogonal alphabet");
  synth_cmd->add_option("file", synth.file, "State-set JSON")->required();
  synth_cmd->add_option("--mode", synth.mode, "comparator | sorter")->capture_default_str();
  auto* synth_n_opt = synth_cmd->add_option("--n", synth_n, "Number of registers (sorter)");
  synth_cmd->add_option("--out", synth.out_path, "Circuit JSON to write")->required();
  synth_cmd->add_flag("--json", synth.json, "Machine-readable summary");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a synthesized circuit on alphabet indices");
  sim_cmd->add_option("circuit", sim.circuit, "Circuit JSON written by synthesize")->required();
  sim_cmd->add_option("input", sim.input, "Comma-separated 1-based indices, e.g. 3,2,1")->required();
  sim_cmd->add_flag("--json", sim.json, "Machine-readable result");

  DemoOptions demo;
  double demo_tol = 0.0;
  auto* demo_cmd = app.add_subcommand("demo-nogo", "Print the comparator, sorter and cloning no-go certificates");
  auto* demo_tol_opt = demo_cmd->add_option("--tol", demo_tol, "Tolerance (default 1e-9 or $QORDER_TOL)");
  demo_cmd->add_flag("--json", demo.json, "Machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::kUsage;
  }

  if (*check_tol_opt) check.tol = check_tol;
  if (*synth_n_opt) synth.n = synth_n;
  if (*demo_tol_opt) demo.tol = demo_tol;

  if (*check_cmd) return cmd_check(check, std::cout, std::cerr);
  if (*synth_cmd) return cmd_synthesize(synth, std::cout, std::cerr);
  if (*sim_cmd) return cmd_simulate(sim, std::cout, std::cerr);
  return cmd_demo_nogo(demo, std::cout, std::cerr);
}
