#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "starflow/fields.hpp"
#include "starflow/hierarchy.hpp"
#include "starflow/star.hpp"

namespace starflow {

struct ProblemError : std::runtime_error {
  enum class Code {
    parse_error,
    missing_field,
    shape_mismatch,
    invalid_hierarchy,
    negative_smoothness,
    bad_value,
    io_error,
  };
  Code code;
  ProblemError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct SolverConfig {
  double c = 0.1;     // augmentation weight, > 0
  double tau = 0.1;   // Chambolle descent step, > 0
  double tol = 1e-4;  // convergence threshold on max |du| per iteration
  int max_iters = 1000;
  bool record_trace = true;

  enum class Init { zero, min_cost };
  Init init = Init::zero;  // min_cost is the regularization-free labeling

  // Testing hook: skips the exemption flow entirely, leaving the plain
  // hierarchical max-flow update. Not exposed in config files.
  bool disable_exemption = false;

  void validate() const;
};

/// One fully specified segmentation problem: label tree, grid, per-leaf data
/// costs D_L, per-label smoothness S_L, star constraints, solver settings.
struct Problem {
  LabelHierarchy hierarchy;
  std::vector<std::string> label_names;  // by id; label_names[0] == "source"
  GridShape grid;
  std::map<LabelId, ScalarField> data_costs;   // exactly the leaves
  std::map<LabelId, ScalarField> smoothness;   // every non-source label, >= 0
  ShapeComplexSpec shapes;
  SolverConfig config;

  /// Enforces every cross-invariant; load_problem calls this before returning.
  void validate() const;

  LabelId label_by_name(const std::string& name) const;
  const std::string& name_of(LabelId l) const { return label_names.at(l); }
};

/// Reads a problem JSON document; FLD paths are resolved relative to the
/// document's directory. Fails fast on any invariant breach.
Problem load_problem(const std::filesystem::path& config_path);

/// Writes <dir>/problem.json plus FLD rasters. Constant fields are stored
/// inline as numbers; anything else goes to an FLD file next to the JSON.
void save_problem(const Problem& p, const std::filesystem::path& dir);

}  // namespace starflow
