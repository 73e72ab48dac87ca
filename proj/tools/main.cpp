#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "starflow/fld_io.hpp"
#include "starflow/parallel.hpp"
#include "starflow/phantom.hpp"
#include "starflow/runner.hpp"

namespace {

using namespace starflow;

// exit codes: 0 success, 1 usage/IO error, 2 not converged, 3 verification failure

struct SolverOverrides {
  double tau = -1.0, c = -1.0, tol = -1.0;
  int max_iters = -1;

  void apply(Problem& p) const {
    if (tau > 0) p.config.tau = tau;
    if (c > 0) p.config.c = c;
    if (tol > 0) p.config.tol = tol;
    if (max_iters > 0) p.config.max_iters = max_iters;
  }
};

void add_override_flags(CLI::App* cmd, SolverOverrides& ov) {
  cmd->add_option("--tau", ov.tau, "Chambolle descent step");
  cmd->add_option("--c", ov.c, "augmentation weight");
  cmd->add_option("--tol", ov.tol, "convergence threshold on max |du|");
  cmd->add_option("--max-iters", ov.max_iters, "iteration cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical continuous max-flow segmentation with star-convexity constraints"};
  app.require_subcommand(1);

  int threads = 1;
  auto add_threads_flag = [&threads](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "worker thread cap (1 = reproducibility reference)")
        ->capture_default_str();
  };

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a phantom problem");
  std::string ph_name;
  int ph_size = 64;
  double ph_noise = 0.0;
  std::uint64_t ph_seed = 1;
  std::string synth_out;
  synth_cmd->add_option("--name", ph_name, "annulus|cshape|ushape|bifurcation|random")
      ->required();
  synth_cmd->add_option("--size", ph_size, "grid extent per axis")->capture_default_str();
  synth_cmd->add_option("--noise", ph_noise, "additive uniform noise amplitude")
      ->capture_default_str();
  synth_cmd->add_option("--seed", ph_seed, "generator seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output directory")->required();
  add_threads_flag(synth_cmd);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run a solver on a problem config");
  std::string solve_config, solve_solver = "al", solve_out;
  SolverOverrides solve_ov;
  solve_cmd->add_option("--config", solve_config, "problem JSON path")->required();
  solve_cmd->add_option("--solver", solve_solver, "al|pf")->capture_default_str();
  solve_cmd->add_option("--out", solve_out, "output directory")->required();
  add_override_flags(solve_cmd, solve_ov);
  add_threads_flag(solve_cmd);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a solver against the exhaustive oracle");
  std::string verify_config, verify_solver = "al", verify_out;
  double verify_threshold = 0.05;
  SolverOverrides verify_ov;
  verify_cmd->add_option("--config", verify_config, "problem JSON path")->required();
  verify_cmd->add_option("--solver", verify_solver, "al|pf")->capture_default_str();
  verify_cmd->add_option("--threshold", verify_threshold, "relative energy gap allowed")
      ->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "directory for verdict.json");
  add_override_flags(verify_cmd, verify_ov);
  add_threads_flag(verify_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "merge trace CSVs for plotting");
  std::vector<std::string> report_traces;
  std::string report_out;
  report_cmd->add_option("--out", report_out, "merged CSV path")->required();
  report_cmd->add_option("traces", report_traces, "trace.csv files")->required();
  add_threads_flag(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    set_max_threads(threads);

    if (*synth_cmd) {
      const Phantom ph = synth(ph_name, ph_size, ph_noise, ph_seed);
      save_problem(ph.problem, synth_out);
      write_fld(std::filesystem::path(synth_out) / "ground_truth.fld", ph.ground_truth);
      std::cout << "wrote " << ph.name << " phantom to " << synth_out << "\n";
      return 0;
    }

    if (*solve_cmd) {
      Problem p = load_problem(solve_config);
      solve_ov.apply(p);
      const RunOutput out = solve_to_dir(p, solver_kind_from_name(solve_solver), solve_out);
      std::cout << summary_to_json(out.summary);
      if (out.summary.exp_clamp_at_convergence)
        std::cerr << "warning: exp-argument clamp still active at convergence;"
                     " costs exceed the solver's dynamic range\n";
      return out.summary.converged ? 0 : 2;
    }

    if (*verify_cmd) {
      Problem p = load_problem(verify_config);
      verify_ov.apply(p);
      const Verdict v =
          verify_problem(p, solver_kind_from_name(verify_solver), verify_threshold, verify_out);
      std::cout << verdict_to_json(v);
      return v.pass ? 0 : 3;
    }

    if (*report_cmd) {
      std::vector<std::filesystem::path> traces(report_traces.begin(), report_traces.end());
      report_merge(traces, report_out);
      std::cout << "wrote " << report_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
