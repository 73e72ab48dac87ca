#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace starflow {

struct FieldError : std::runtime_error {
  enum class Code {
    bad_shape,
    shape_mismatch,
    negative_capacity,
    non_finite,
  };
  Code code;
  FieldError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

/// Regular voxel grid in 2 or 3 dimensions. Unused axes have extent 1 and
/// spacing 1 so all index arithmetic can treat the grid as 3D.
struct GridShape {
  int ndim = 2;
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};

  GridShape() = default;
  GridShape(int nx, int ny, double sx = 1.0, double sy = 1.0)
      : ndim(2), dims{nx, ny, 1}, spacing{sx, sy, 1.0} {
    validate();
  }
  GridShape(int nx, int ny, int nz, double sx = 1.0, double sy = 1.0, double sz = 1.0)
      : ndim(3), dims{nx, ny, nz}, spacing{sx, sy, sz} {
    validate();
  }

  void validate() const {
    if (ndim != 2 && ndim != 3)
      throw FieldError(FieldError::Code::bad_shape, "grid must be 2D or 3D");
    for (int d = 0; d < 3; ++d) {
      const bool active = d < ndim;
      if (active && dims[d] < 1)
        throw FieldError(FieldError::Code::bad_shape, "grid extent must be positive");
      if (!active && dims[d] != 1)
        throw FieldError(FieldError::Code::bad_shape, "inactive axis must have extent 1");
      if (!(spacing[d] > 0.0))
        throw FieldError(FieldError::Code::bad_shape, "grid spacing must be positive");
    }
  }

  std::size_t voxels() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
  }

  double voxel_volume() const {
    double v = 1.0;
    for (int d = 0; d < ndim; ++d) v *= spacing[d];
    return v;
  }

  /// Linear offset between neighbours along axis d. Rasters are x-fastest
  /// row-major: index = x + nx*(y + ny*z).
  std::size_t stride(int d) const {
    switch (d) {
      case 0: return 1;
      case 1: return static_cast<std::size_t>(dims[0]);
      default: return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]);
    }
  }

  std::size_t index(int x, int y, int z = 0) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(z));
  }

  std::array<int, 3> coords(std::size_t i) const {
    const auto nx = static_cast<std::size_t>(dims[0]);
    const auto ny = static_cast<std::size_t>(dims[1]);
    return {static_cast<int>(i % nx), static_cast<int>((i / nx) % ny),
            static_cast<int>(i / (nx * ny))};
  }

  bool contains(int x, int y, int z = 0) const {
    return x >= 0 && x < dims[0] && y >= 0 && y < dims[1] && z >= 0 && z < dims[2];
  }

  bool operator==(const GridShape&) const = default;
};

}  // namespace starflow
