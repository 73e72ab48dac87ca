#include "starflow/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "starflow/fld_io.hpp"

namespace starflow {

using nlohmann::ordered_json;

SolverKind solver_kind_from_name(const std::string& name) {
  if (name == "al") return SolverKind::al;
  if (name == "pf") return SolverKind::pf;
  throw ProblemError(ProblemError::Code::bad_value, "solver must be \"al\" or \"pf\"");
}

namespace {

void fill_summary(const Problem& p, RunOutput& out,
                  const std::map<LabelId, VectorField>& resolved, double capacity_excess) {
  RunSummary& s = out.summary;
  const SolveResult& r = out.result;
  s.converged = r.converged;
  s.iterations = r.iterations;
  s.final_max_du = r.final_max_du;
  s.final_max_G = r.final_max_G;
  s.exp_clamp_at_convergence = r.exp_clamp_at_convergence;
  s.capacity_excess = capacity_excess;

  const EnergyReport raw = energy(p, r.leaf_u, &resolved);
  s.leaf_sum_violation = raw.leaf_sum_violation;
  s.negativity = raw.negativity;
  s.star_violation = raw.star_violation;
  s.final_energy = energy(p, normalized_leaves(r.leaf_u), &resolved).total;
}

}  // namespace

RunOutput run_solver(const Problem& p, SolverKind kind) {
  p.validate();
  RunOutput out;
  const auto t0 = std::chrono::steady_clock::now();
  if (kind == SolverKind::al) {
    AlSolver solver(p);
    out.result = solver.run();
    out.summary.solver = "al";
    fill_summary(p, out, solver.resolved_shapes(), solver.capacity_excess_max());
  } else {
    PfSolver solver(p);
    out.result = solver.run();
    out.summary.solver = "pf";
    fill_summary(p, out, solver.resolved_shapes(), solver.capacity_excess_max());
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.summary.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

std::string summary_to_json(const RunSummary& s) {
  ordered_json j;
  j["solver"] = s.solver;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  j["final_energy"] = s.final_energy;
  j["final_max_du"] = s.final_max_du;
  j["final_max_G"] = s.final_max_G;
  j["leaf_sum_violation"] = s.leaf_sum_violation;
  j["negativity"] = s.negativity;
  j["star_violation"] = s.star_violation;
  j["capacity_excess"] = s.capacity_excess;
  j["exp_clamp_at_convergence"] = s.exp_clamp_at_convergence;
  j["wall_time_ms"] = s.wall_time_ms;
  return j.dump(2) + "\n";
}

std::string verdict_to_json(const Verdict& v) {
  ordered_json j;
  j["oracle_energy"] = v.oracle_energy;
  j["solver_energy"] = v.solver_energy;
  j["gap"] = v.gap;
  j["feasible_count"] = v.feasible_count;
  j["pass"] = v.pass;
  return j.dump(2) + "\n";
}

RunOutput solve_to_dir(const Problem& p, SolverKind kind, const std::filesystem::path& out_dir) {
  RunOutput out = run_solver(p, kind);
  std::filesystem::create_directories(out_dir);
  const auto& leaves = p.hierarchy.leaves();
  for (std::size_t k = 0; k < leaves.size(); ++k)
    write_fld(out_dir / ("u_" + p.name_of(leaves[k]) + ".fld"), out.result.leaf_u[k]);
  write_fld(out_dir / "labels.fld", out.result.hard_labels);
  write_trace_csv(out_dir / "trace.csv", out.result.trace);
  std::ofstream sf(out_dir / "summary.json");
  if (!sf) throw ProblemError(ProblemError::Code::io_error, "cannot write summary.json");
  sf << summary_to_json(out.summary);
  return out;
}

Verdict verify_problem(const Problem& p, SolverKind kind, double threshold,
                       const std::filesystem::path& out_dir) {
  RunOutput out = run_solver(p, kind);
  const OracleResult oracle = brute_force(p);
  const double solver_energy = hard_label_energy(p, out.result.hard_labels).total;
  const Verdict v = compare(solver_energy, oracle, threshold);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream vf(out_dir / "verdict.json");
    if (!vf) throw ProblemError(ProblemError::Code::io_error, "cannot write verdict.json");
    vf << verdict_to_json(v);
  }
  return v;
}

void report_merge(const std::vector<std::filesystem::path>& traces,
                  const std::filesystem::path& out_csv) {
  if (traces.empty())
    throw ProblemError(ProblemError::Code::bad_value, "report needs at least one trace");
  std::ofstream out(out_csv);
  if (!out) throw ProblemError(ProblemError::Code::io_error, "cannot write " + out_csv.string());
  out << "run_id,iter,metric,value\n";
  char buf[160];
  for (const auto& path : traces) {
    std::ifstream in(path);
    if (!in) throw ProblemError(ProblemError::Code::io_error, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "iter,energy,max_G,max_du")
      throw ProblemError(ProblemError::Code::parse_error, "bad trace header in " + path.string());
    const std::string run_id = path.stem().string();
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      int iter = 0;
      double energy_v = 0, max_g = 0, max_du = 0;
      if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &iter, &energy_v, &max_g, &max_du) != 4)
        throw ProblemError(ProblemError::Code::parse_error, "bad trace row in " + path.string());
      std::snprintf(buf, sizeof(buf), "%s,%d,energy,%.17g\n", run_id.c_str(), iter, energy_v);
      out << buf;
      std::snprintf(buf, sizeof(buf), "%s,%d,max_G,%.17g\n", run_id.c_str(), iter, max_g);
      out << buf;
      std::snprintf(buf, sizeof(buf), "%s,%d,max_du,%.17g\n", run_id.c_str(), iter, max_du);
      out << buf;
      ++rows;
    }
    if (rows == 0)
      throw ProblemError(ProblemError::Code::parse_error, "empty trace " + path.string());
  }
}

}  // namespace starflow
