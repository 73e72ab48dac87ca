#include "starflow/flow_kernels.hpp"

#include <algorithm>
#include <cmath>

#include "starflow/parallel.hpp"

namespace starflow {

void exempted_projection(VectorField& q, const VectorField* e, const ScalarField& cap,
                         bool exemption_enabled) {
  require_same_shape(q.shape(), cap.shape(), "exempted_projection: capacity shape mismatch");
  const int ndim = q.ncomp();
  std::array<double*, 3> qc{};
  for (int d = 0; d < ndim; ++d) qc[d] = q.component(d).data();
  std::array<const double*, 3> ec{};
  const bool use_e = exemption_enabled && e != nullptr;
  if (use_e) {
    require_same_shape(q.shape(), e->shape(), "exempted_projection: direction shape mismatch");
    for (int d = 0; d < ndim; ++d) ec[d] = e->component(d).data();
  }
  const double* s = cap.data();
  parallel_for(q.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double v[3];
      for (int d = 0; d < ndim; ++d) v[d] = qc[d][i];
      double lam = 0.0;
      if (use_e) {
        for (int d = 0; d < ndim; ++d) lam += v[d] * ec[d][i];
        if (lam < 0.0) lam = 0.0;
      }
      if (lam > 0.0) {
        for (int d = 0; d < ndim; ++d) v[d] -= lam * ec[d][i];
        detail::project_vec(v, ndim, s[i]);
        for (int d = 0; d < ndim; ++d) v[d] += lam * ec[d][i];
      } else {
        detail::project_vec(v, ndim, s[i]);
      }
      for (int d = 0; d < ndim; ++d) qc[d][i] = v[d];
    }
  });
}

double capacity_excess(const VectorField& q, const VectorField* e, const ScalarField& cap,
                       bool exemption_enabled) {
  require_same_shape(q.shape(), cap.shape(), "capacity_excess: capacity shape mismatch");
  const int ndim = q.ncomp();
  std::array<const double*, 3> qc{};
  for (int d = 0; d < ndim; ++d) qc[d] = q.component(d).data();
  std::array<const double*, 3> ec{};
  const bool use_e = exemption_enabled && e != nullptr;
  if (use_e)
    for (int d = 0; d < ndim; ++d) ec[d] = e->component(d).data();
  const double* s = cap.data();
  return parallel_max(q.size(), [&](std::size_t begin, std::size_t end) {
    double worst = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      double v[3];
      for (int d = 0; d < ndim; ++d) v[d] = qc[d][i];
      if (use_e) {
        double lam = 0.0;
        for (int d = 0; d < ndim; ++d) lam += v[d] * ec[d][i];
        if (lam > 0.0)
          for (int d = 0; d < ndim; ++d) v[d] -= lam * ec[d][i];
      }
      double n2 = 0.0;
      for (int d = 0; d < ndim; ++d) n2 += v[d] * v[d];
      worst = std::max(worst, std::sqrt(n2) - s[i]);
    }
    return worst;
  });
}

}  // namespace starflow
