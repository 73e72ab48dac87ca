#include "starflow/trace.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace starflow {

void write_trace_csv(const std::filesystem::path& path, const ConvergenceTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "iter,energy,max_G,max_du\n";
  char buf[128];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.iter, r.energy, r.max_G, r.max_du);
    out << buf;
  }
}

}  // namespace starflow
