#pragma once

#include "starflow/oracle.hpp"
#include "starflow/solver_al.hpp"
#include "starflow/solver_pf.hpp"

namespace starflow {

enum class SolverKind { al, pf };
SolverKind solver_kind_from_name(const std::string& name);

struct RunSummary {
  std::string solver;
  bool converged = false;
  int iterations = 0;
  double final_energy = 0.0;  // of the normalized relaxed labeling
  double final_max_du = 0.0;
  double final_max_G = 0.0;
  double leaf_sum_violation = 0.0;  // of the raw final labeling
  double negativity = 0.0;
  double star_violation = 0.0;
  double capacity_excess = 0.0;
  bool exp_clamp_at_convergence = false;
  double wall_time_ms = 0.0;
};

struct RunOutput {
  SolveResult result;
  RunSummary summary;
};

/// Runs the chosen solver on a validated problem and assembles the summary
/// metrics (in memory; nothing written).
RunOutput run_solver(const Problem& p, SolverKind kind);

/// run_solver plus artifacts: u_<leaf>.fld, labels.fld, trace.csv and
/// summary.json under out_dir. Always writes, converged or not.
RunOutput solve_to_dir(const Problem& p, SolverKind kind, const std::filesystem::path& out_dir);

/// Solver hard-labeling energy against the exhaustive oracle; writes
/// verdict.json when out_dir is non-empty.
Verdict verify_problem(const Problem& p, SolverKind kind, double threshold,
                       const std::filesystem::path& out_dir = {});

std::string summary_to_json(const RunSummary& s);
std::string verdict_to_json(const Verdict& v);

/// Merges solver trace CSVs into one long-format table
/// `run_id,iter,metric,value`; run ids are the input file stems.
void report_merge(const std::vector<std::filesystem::path>& traces,
                  const std::filesystem::path& out_csv);

}  // namespace starflow
