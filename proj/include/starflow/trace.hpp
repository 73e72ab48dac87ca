#pragma once

#include <filesystem>
#include <vector>

namespace starflow {

struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  double max_G = 0.0;   // flow conservation residual (0 for the pseudo-flow solver)
  double max_du = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
};

/// CSV with header `iter,energy,max_G,max_du`; doubles printed with 17
/// significant digits so reruns are byte-identical.
void write_trace_csv(const std::filesystem::path& path, const ConvergenceTrace& trace);

}  // namespace starflow
