#pragma once

#include <cmath>
#include <vector>

#include "starflow/grid.hpp"

namespace starflow {

/// Dense scalar raster over a GridShape, x-fastest row-major, doubles.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridShape shape, double fill = 0.0)
      : shape_(shape), v_(shape.voxels(), fill) {
    shape_.validate();
  }
  /// Takes ownership of a raster; rejects wrong length and non-finite values.
  ScalarField(GridShape shape, std::vector<double> values);

  const GridShape& shape() const { return shape_; }
  std::size_t size() const { return v_.size(); }

  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  double at(int x, int y, int z = 0) const { return v_[shape_.index(x, y, z)]; }
  double& at(int x, int y, int z = 0) { return v_[shape_.index(x, y, z)]; }

  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  const double* data() const { return v_.data(); }
  double* data() { return v_.data(); }

  void fill(double v) { v_.assign(v_.size(), v); }

  bool operator==(const ScalarField&) const = default;

 private:
  GridShape shape_;
  std::vector<double> v_;
};

/// One scalar raster per grid axis (ndim components).
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(GridShape shape) : shape_(shape) {
    shape_.validate();
    for (int d = 0; d < shape_.ndim; ++d) comp_[d].assign(shape_.voxels(), 0.0);
  }
  VectorField(GridShape shape, std::vector<std::vector<double>> components);

  const GridShape& shape() const { return shape_; }
  int ncomp() const { return shape_.ndim; }
  std::size_t size() const { return comp_[0].size(); }

  const std::vector<double>& component(int d) const { return comp_[d]; }
  std::vector<double>& component(int d) { return comp_[d]; }

  void fill(double v) {
    for (int d = 0; d < shape_.ndim; ++d) comp_[d].assign(comp_[d].size(), v);
  }

  bool operator==(const VectorField&) const = default;

 private:
  GridShape shape_;
  std::array<std::vector<double>, 3> comp_;
};

// --- differential operators -------------------------------------------------

/// Forward difference per axis divided by spacing; the difference at the last
/// voxel along each axis is zero (one-sided zero boundary).
VectorField gradient(const ScalarField& u);

/// Exact negative adjoint of gradient under the unweighted Euclidean inner
/// product: backward differences with zero-flux boundary, so that
/// <div q, u> = -<q, grad u> for all same-shape fields.
ScalarField divergence(const VectorField& q);

// --- pointwise operations ---------------------------------------------------

/// Radial projection onto the pointwise ball |q(x)| <= cap(x). Feasible
/// vectors pass through unchanged; the scaling is biased inward by one part
/// in 2^48 so a second projection is a bitwise no-op.
VectorField project_ball(VectorField q, const ScalarField& cap);

/// Pointwise inner product of two vector fields.
ScalarField dot(const VectorField& a, const VectorField& b);

ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField scaled(double a, const ScalarField& x);
/// y += a*x
void axpy(double a, const ScalarField& x, ScalarField& y);

// --- reductions (deterministic for any thread count) -------------------------

double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
double sum(const ScalarField& a);
double max_abs(const ScalarField& a);
double min_value(const ScalarField& a);
double max_value(const ScalarField& a);
double norm2(const ScalarField& a);
double norm2(const VectorField& a);

void require_same_shape(const GridShape& a, const GridShape& b, const char* what);

namespace detail {

// Scale factor is biased one part in 2^48 inward so the recomputed norm of a
// projected vector stays strictly below the capacity and re-projection is a
// bitwise no-op.
inline constexpr double kInwardBias = 1.0 - 0x1p-48;

/// Projects one vector onto |v| <= cap in place; feasible vectors untouched.
inline void project_vec(double* v, int ndim, double cap) {
  double n2 = 0.0;
  for (int d = 0; d < ndim; ++d) n2 += v[d] * v[d];
  if (n2 > cap * cap) {
    const double f = cap / std::sqrt(n2) * kInwardBias;
    for (int d = 0; d < ndim; ++d) v[d] *= f;
  }
}

}  // namespace detail

}  // namespace starflow
