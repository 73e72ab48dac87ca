#include "starflow/problem.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include <json.hpp>

#include "starflow/fld_io.hpp"

namespace starflow {

namespace {

using nlohmann::json;
using Code = ProblemError::Code;

[[noreturn]] void fail(Code c, const std::string& msg) { throw ProblemError(c, msg); }

const json& require_key(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(Code::missing_field, std::string("missing \"") + key + "\"");
  return *it;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

GridShape parse_grid(const json& j) {
  const json& dims = require_key(j, "dims");
  if (!dims.is_array() || (dims.size() != 2 && dims.size() != 3))
    fail(Code::bad_value, "grid.dims must list 2 or 3 extents");
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  if (j.contains("spacing")) {
    const json& sp = j["spacing"];
    if (!sp.is_array() || sp.size() != dims.size())
      fail(Code::bad_value, "grid.spacing must match grid.dims");
    for (std::size_t d = 0; d < sp.size(); ++d) spacing[d] = sp[d].get<double>();
  }
  try {
    if (dims.size() == 2)
      return GridShape(dims[0].get<int>(), dims[1].get<int>(), spacing[0], spacing[1]);
    return GridShape(dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>(), spacing[0],
                     spacing[1], spacing[2]);
  } catch (const FieldError& e) {
    fail(Code::bad_value, std::string("bad grid: ") + e.what());
  }
}

/// Field entries are either a number (constant raster) or a path to an FLD
/// file relative to the config document.
ScalarField parse_scalar_entry(const json& v, const GridShape& grid,
                               const std::filesystem::path& base_dir, const std::string& what) {
  if (v.is_number()) return ScalarField(grid, v.get<double>());
  if (!v.is_string()) fail(Code::bad_value, what + ": expected number or FLD path");
  try {
    return read_fld(base_dir / v.get<std::string>()).as_scalar(grid);
  } catch (const FldError& e) {
    fail(e.code == FldError::Code::bad_payload ? Code::shape_mismatch : Code::parse_error,
         what + ": " + e.what());
  }
}

json scalar_entry_to_json(const ScalarField& f, const std::string& stem,
                          const std::filesystem::path& dir) {
  const auto& v = f.values();
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) return json(v[0]);
  const std::string file = stem + ".fld";
  write_fld(dir / file, f);
  return json(file);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(c > 0.0)) throw ProblemError(Code::bad_value, "solver.c must be positive");
  if (!(tau > 0.0)) throw ProblemError(Code::bad_value, "solver.tau must be positive");
  if (!(tol > 0.0)) throw ProblemError(Code::bad_value, "solver.tol must be positive");
  if (max_iters < 1) throw ProblemError(Code::bad_value, "solver.max_iters must be positive");
}

LabelId Problem::label_by_name(const std::string& name) const {
  for (std::size_t i = 0; i < label_names.size(); ++i)
    if (label_names[i] == name) return static_cast<LabelId>(i);
  fail(Code::bad_value, "unknown label \"" + name + "\"");
}

void Problem::validate() const {
  grid.validate();
  config.validate();
  if (label_names.size() != static_cast<std::size_t>(hierarchy.label_count()))
    fail(Code::invalid_hierarchy, "label name table does not match hierarchy");
  if (label_names.empty() || label_names[0] != "source")
    fail(Code::invalid_hierarchy, "label id 0 must be named \"source\"");
  std::set<std::string> seen;
  for (const auto& n : label_names) {
    if (!valid_name(n)) fail(Code::bad_value, "label name \"" + n + "\" is not alphanumeric");
    if (!seen.insert(n).second) fail(Code::bad_value, "duplicate label name \"" + n + "\"");
  }

  for (LabelId leaf : hierarchy.leaves())
    if (!data_costs.count(leaf))
      fail(Code::missing_field, "missing data cost for leaf \"" + name_of(leaf) + "\"");
  for (const auto& [l, d] : data_costs) {
    if (!hierarchy.valid_label(l) || !hierarchy.is_leaf(l))
      fail(Code::bad_value, "data cost on non-leaf label");
    require_same_shape(grid, d.shape(), "data cost grid mismatch");
  }

  for (LabelId l = 1; l < hierarchy.label_count(); ++l)
    if (!smoothness.count(l))
      fail(Code::missing_field, "missing smoothness for label \"" + name_of(l) + "\"");
  for (const auto& [l, s] : smoothness) {
    if (!hierarchy.valid_label(l) || l == kSource)
      fail(Code::bad_value, "smoothness must target a non-source label");
    require_same_shape(grid, s.shape(), "smoothness grid mismatch");
    if (min_value(s) < 0.0)
      fail(Code::negative_smoothness, "negative smoothness on \"" + name_of(l) + "\"");
  }

  for (const auto& [l, spec] : shapes.entries) {
    if (!hierarchy.valid_label(l) || l == kSource)
      fail(Code::bad_value, "shape constraint must target a non-source label");
    switch (spec.kind) {
      case DirectionSpec::Kind::simple:
      case DirectionSpec::Kind::geodesic:
        if (!grid.contains(spec.vantage[0], spec.vantage[1], spec.vantage[2]))
          fail(Code::bad_value, "vantage outside grid for \"" + name_of(l) + "\"");
        if (spec.kind == DirectionSpec::Kind::geodesic) {
          require_same_shape(grid, spec.metric.shape(), "geodesic metric grid mismatch");
          if (min_value(spec.metric) <= 0.0)
            fail(Code::bad_value, "geodesic metric must be positive for \"" + name_of(l) + "\"");
        }
        break;
      case DirectionSpec::Kind::explicit_field:
        require_same_shape(grid, spec.field.shape(), "direction field grid mismatch");
        break;
    }
  }
}

Problem load_problem(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) fail(Code::io_error, "cannot open " + config_path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(Code::parse_error, std::string("config parse error: ") + e.what());
  }
  const std::filesystem::path base_dir = config_path.parent_path();

  Problem p;
  p.grid = parse_grid(require_key(doc, "grid"));

  const json& hj = require_key(doc, "hierarchy");
  if (!hj.is_array() || hj.empty()) fail(Code::invalid_hierarchy, "hierarchy must be a non-empty list");
  p.label_names = {"source"};
  for (const auto& rec : hj) {
    const std::string name = require_key(rec, "name").get<std::string>();
    if (name == "source") fail(Code::invalid_hierarchy, "label name \"source\" is reserved");
    if (!valid_name(name)) fail(Code::bad_value, "label name \"" + name + "\" is not alphanumeric");
    if (std::count(p.label_names.begin(), p.label_names.end(), name))
      fail(Code::invalid_hierarchy, "duplicate label \"" + name + "\"");
    p.label_names.push_back(name);
  }
  std::vector<std::pair<LabelId, LabelId>> edges;
  for (std::size_t i = 0; i < hj.size(); ++i) {
    const std::string parent = require_key(hj[i], "parent").get<std::string>();
    const auto it = std::find(p.label_names.begin(), p.label_names.end(), parent);
    if (it == p.label_names.end())
      fail(Code::invalid_hierarchy, "unknown parent \"" + parent + "\"");
    edges.emplace_back(static_cast<LabelId>(it - p.label_names.begin()),
                       static_cast<LabelId>(i + 1));
  }
  try {
    p.hierarchy = LabelHierarchy::build(edges);
  } catch (const HierarchyError& e) {
    fail(Code::invalid_hierarchy, std::string("invalid hierarchy: ") + e.what());
  }

  for (const auto& [name, v] : require_key(doc, "data_costs").items())
    p.data_costs.emplace(p.label_by_name(name),
                         parse_scalar_entry(v, p.grid, base_dir, "data cost " + name));
  for (const auto& [name, v] : require_key(doc, "smoothness").items())
    p.smoothness.emplace(p.label_by_name(name),
                         parse_scalar_entry(v, p.grid, base_dir, "smoothness " + name));

  if (doc.contains("shapes")) {
    for (const auto& [name, sj] : doc["shapes"].items()) {
      DirectionSpec spec;
      const std::string kind = require_key(sj, "kind").get<std::string>();
      if (kind == "simple" || kind == "geodesic") {
        spec.kind = kind == "simple" ? DirectionSpec::Kind::simple : DirectionSpec::Kind::geodesic;
        const json& vj = require_key(sj, "vantage");
        if (!vj.is_array() || vj.size() != static_cast<std::size_t>(p.grid.ndim))
          fail(Code::bad_value, "vantage must list one voxel coordinate per axis");
        for (std::size_t d = 0; d < vj.size(); ++d) spec.vantage[d] = vj[d].get<int>();
        if (kind == "geodesic")
          spec.metric = parse_scalar_entry(require_key(sj, "metric"), p.grid, base_dir,
                                           "geodesic metric " + name);
      } else if (kind == "explicit") {
        spec.kind = DirectionSpec::Kind::explicit_field;
        const std::string file = require_key(sj, "field").get<std::string>();
        try {
          spec.field = normalize_direction_field(read_fld(base_dir / file).as_vector(p.grid));
        } catch (const FldError& e) {
          fail(e.code == FldError::Code::bad_payload ? Code::shape_mismatch : Code::parse_error,
               "direction field " + name + ": " + e.what());
        } catch (const StarError& e) {
          fail(Code::bad_value, "direction field " + name + ": " + e.what());
        }
      } else {
        fail(Code::bad_value, "unknown shape kind \"" + kind + "\"");
      }
      p.shapes.entries.emplace(p.label_by_name(name), std::move(spec));
    }
  }

  if (doc.contains("solver")) {
    const json& sj = doc["solver"];
    if (sj.contains("c")) p.config.c = sj["c"].get<double>();
    if (sj.contains("tau")) p.config.tau = sj["tau"].get<double>();
    if (sj.contains("tol")) p.config.tol = sj["tol"].get<double>();
    if (sj.contains("max_iters")) p.config.max_iters = sj["max_iters"].get<int>();
    if (sj.contains("record_trace")) p.config.record_trace = sj["record_trace"].get<bool>();
    if (sj.contains("init")) {
      const std::string init = sj["init"].get<std::string>();
      if (init == "zero")
        p.config.init = SolverConfig::Init::zero;
      else if (init == "min_cost")
        p.config.init = SolverConfig::Init::min_cost;
      else
        fail(Code::bad_value, "solver.init must be \"zero\" or \"min_cost\"");
    }
  }

  p.validate();
  return p;
}

void save_problem(const Problem& p, const std::filesystem::path& dir) {
  p.validate();
  std::filesystem::create_directories(dir);
  json doc = json::object();

  json grid = json::object();
  grid["dims"] = std::vector<int>(p.grid.dims.begin(), p.grid.dims.begin() + p.grid.ndim);
  grid["spacing"] =
      std::vector<double>(p.grid.spacing.begin(), p.grid.spacing.begin() + p.grid.ndim);
  doc["grid"] = grid;

  json hier = json::array();
  for (LabelId l : p.hierarchy.top_down_order()) {
    if (l == kSource) continue;
    hier.push_back({{"name", p.name_of(l)}, {"parent", p.name_of(p.hierarchy.parent(l))}});
  }
  doc["hierarchy"] = hier;

  json dc = json::object();
  for (const auto& [l, f] : p.data_costs)
    dc[p.name_of(l)] = scalar_entry_to_json(f, "D_" + p.name_of(l), dir);
  doc["data_costs"] = dc;

  json sm = json::object();
  for (const auto& [l, f] : p.smoothness)
    sm[p.name_of(l)] = scalar_entry_to_json(f, "S_" + p.name_of(l), dir);
  doc["smoothness"] = sm;

  if (!p.shapes.entries.empty()) {
    json shapes = json::object();
    for (const auto& [l, spec] : p.shapes.entries) {
      json sj = json::object();
      switch (spec.kind) {
        case DirectionSpec::Kind::simple:
        case DirectionSpec::Kind::geodesic:
          sj["kind"] = spec.kind == DirectionSpec::Kind::simple ? "simple" : "geodesic";
          sj["vantage"] =
              std::vector<int>(spec.vantage.begin(), spec.vantage.begin() + p.grid.ndim);
          if (spec.kind == DirectionSpec::Kind::geodesic)
            sj["metric"] = scalar_entry_to_json(spec.metric, "metric_" + p.name_of(l), dir);
          break;
        case DirectionSpec::Kind::explicit_field: {
          sj["kind"] = "explicit";
          const std::string file = "e_" + p.name_of(l) + ".fld";
          write_fld(dir / file, spec.field);
          sj["field"] = file;
          break;
        }
      }
      shapes[p.name_of(l)] = sj;
    }
    doc["shapes"] = shapes;
  }

  doc["solver"] = {{"c", p.config.c},
                   {"tau", p.config.tau},
                   {"tol", p.config.tol},
                   {"max_iters", p.config.max_iters},
                   {"record_trace", p.config.record_trace},
                   {"init", p.config.init == SolverConfig::Init::zero ? "zero" : "min_cost"}};

  std::ofstream out(dir / "problem.json");
  if (!out) fail(Code::io_error, "cannot write " + (dir / "problem.json").string());
  out << doc.dump(2) << '\n';
}

}  // namespace starflow
