#include "starflow/fields.hpp"

#include <algorithm>
#include <cmath>

#include "starflow/parallel.hpp"

namespace starflow {

namespace {
void require_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x))
      throw FieldError(FieldError::Code::non_finite, "field contains NaN or Inf");
}
}  // namespace

void require_same_shape(const GridShape& a, const GridShape& b, const char* what) {
  if (!(a == b)) throw FieldError(FieldError::Code::shape_mismatch, what);
}

ScalarField::ScalarField(GridShape shape, std::vector<double> values)
    : shape_(shape), v_(std::move(values)) {
  shape_.validate();
  if (v_.size() != shape_.voxels())
    throw FieldError(FieldError::Code::bad_shape, "raster length does not match grid");
  require_finite(v_);
}

VectorField::VectorField(GridShape shape, std::vector<std::vector<double>> components)
    : shape_(shape) {
  shape_.validate();
  if (components.size() != static_cast<std::size_t>(shape_.ndim))
    throw FieldError(FieldError::Code::bad_shape, "component count does not match grid dimensionality");
  for (int d = 0; d < shape_.ndim; ++d) {
    if (components[d].size() != shape_.voxels())
      throw FieldError(FieldError::Code::bad_shape, "raster length does not match grid");
    require_finite(components[d]);
    comp_[d] = std::move(components[d]);
  }
}

VectorField gradient(const ScalarField& u) {
  const GridShape& g = u.shape();
  VectorField out(g);
  const double* uv = u.data();
  for (int d = 0; d < g.ndim; ++d) {
    const double inv_h = 1.0 / g.spacing[d];
    const std::size_t stride = g.stride(d);
    const std::size_t extent = static_cast<std::size_t>(g.dims[d]);
    double* od = out.component(d).data();
    parallel_for(g.voxels(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t c = (i / stride) % extent;
        od[i] = (c + 1 < extent) ? (uv[i + stride] - uv[i]) * inv_h : 0.0;
      }
    });
  }
  return out;
}

ScalarField divergence(const VectorField& q) {
  const GridShape& g = q.shape();
  ScalarField out(g);
  double* ov = out.data();
  for (int d = 0; d < g.ndim; ++d) {
    const double inv_h = 1.0 / g.spacing[d];
    const std::size_t stride = g.stride(d);
    const std::size_t extent = static_cast<std::size_t>(g.dims[d]);
    const double* qd = q.component(d).data();
    parallel_for(g.voxels(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t c = (i / stride) % extent;
        // Backward difference; the flux entry on the last slice along each
        // axis never leaves the domain, matching the gradient's zero there.
        double acc = 0.0;
        if (c + 1 < extent) acc += qd[i];
        if (c >= 1) acc -= qd[i - stride];
        ov[i] += acc * inv_h;
      }
    });
  }
  return out;
}

VectorField project_ball(VectorField q, const ScalarField& cap) {
  require_same_shape(q.shape(), cap.shape(), "project_ball: capacity shape mismatch");
  if (min_value(cap) < 0.0)
    throw FieldError(FieldError::Code::negative_capacity, "project_ball: negative capacity");
  const int ndim = q.ncomp();
  std::array<double*, 3> qc{};
  for (int d = 0; d < ndim; ++d) qc[d] = q.component(d).data();
  const double* s = cap.data();
  parallel_for(q.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double v[3];
      for (int d = 0; d < ndim; ++d) v[d] = qc[d][i];
      detail::project_vec(v, ndim, s[i]);
      for (int d = 0; d < ndim; ++d) qc[d][i] = v[d];
    }
  });
  return q;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  require_same_shape(a.shape(), b.shape(), "dot: shape mismatch");
  ScalarField out(a.shape());
  double* ov = out.data();
  const int ndim = a.ncomp();
  parallel_for(a.size(), [&](std::size_t begin, std::size_t end) {
    for (int d = 0; d < ndim; ++d) {
      const double* ad = a.component(d).data();
      const double* bd = b.component(d).data();
      for (std::size_t i = begin; i < end; ++i) ov[i] += ad[i] * bd[i];
    }
  });
  return out;
}

ScalarField add(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a.shape(), b.shape(), "add: shape mismatch");
  ScalarField out(a.shape());
  const double* av = a.data();
  const double* bv = b.data();
  double* ov = out.data();
  parallel_for(a.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) ov[i] = av[i] + bv[i];
  });
  return out;
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a.shape(), b.shape(), "sub: shape mismatch");
  ScalarField out(a.shape());
  const double* av = a.data();
  const double* bv = b.data();
  double* ov = out.data();
  parallel_for(a.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) ov[i] = av[i] - bv[i];
  });
  return out;
}

ScalarField scaled(double a, const ScalarField& x) {
  ScalarField out(x.shape());
  const double* xv = x.data();
  double* ov = out.data();
  parallel_for(x.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) ov[i] = a * xv[i];
  });
  return out;
}

void axpy(double a, const ScalarField& x, ScalarField& y) {
  require_same_shape(x.shape(), y.shape(), "axpy: shape mismatch");
  const double* xv = x.data();
  double* yv = y.data();
  parallel_for(x.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) yv[i] += a * xv[i];
  });
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a.shape(), b.shape(), "inner: shape mismatch");
  const double* av = a.data();
  const double* bv = b.data();
  return parallel_sum(a.size(), [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += av[i] * bv[i];
    return acc;
  });
}

double inner(const VectorField& a, const VectorField& b) {
  require_same_shape(a.shape(), b.shape(), "inner: shape mismatch");
  double total = 0.0;
  for (int d = 0; d < a.ncomp(); ++d) {
    const double* av = a.component(d).data();
    const double* bv = b.component(d).data();
    total += parallel_sum(a.size(), [&](std::size_t begin, std::size_t end) {
      double acc = 0.0;
      for (std::size_t i = begin; i < end; ++i) acc += av[i] * bv[i];
      return acc;
    });
  }
  return total;
}

double sum(const ScalarField& a) {
  const double* av = a.data();
  return parallel_sum(a.size(), [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += av[i];
    return acc;
  });
}

double max_abs(const ScalarField& a) {
  const double* av = a.data();
  return parallel_max(a.size(), [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc = std::max(acc, std::abs(av[i]));
    return acc;
  });
}

double min_value(const ScalarField& a) {
  const double* av = a.data();
  return -parallel_max(a.size(), [&](std::size_t begin, std::size_t end) {
    double acc = -av[begin];
    for (std::size_t i = begin; i < end; ++i) acc = std::max(acc, -av[i]);
    return acc;
  });
}

double max_value(const ScalarField& a) {
  const double* av = a.data();
  return parallel_max(a.size(), [&](std::size_t begin, std::size_t end) {
    double acc = av[begin];
    for (std::size_t i = begin; i < end; ++i) acc = std::max(acc, av[i]);
    return acc;
  });
}

double norm2(const ScalarField& a) { return std::sqrt(inner(a, a)); }

double norm2(const VectorField& a) { return std::sqrt(inner(a, a)); }

}  // namespace starflow
