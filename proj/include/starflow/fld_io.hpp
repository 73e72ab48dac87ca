#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "starflow/fields.hpp"

namespace starflow {

struct FldError : std::runtime_error {
  enum class Code { io_error, bad_header, bad_payload };
  Code code;
  FldError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

/// Raw contents of an FLD file: ASCII header `FLD <ndim> <d0> <d1> [<d2>]
/// <ncomp>\n` followed by little-endian float32 rasters, x-fastest row-major,
/// one contiguous block per component. Values are widened to double on read.
struct FldData {
  int ndim = 0;
  std::array<int, 3> dims{1, 1, 1};
  int ncomp = 0;
  std::vector<std::vector<double>> components;

  ScalarField as_scalar(const GridShape& grid) const;
  VectorField as_vector(const GridShape& grid) const;
};

FldData read_fld(const std::filesystem::path& path);

void write_fld(const std::filesystem::path& path, const ScalarField& f);
void write_fld(const std::filesystem::path& path, const VectorField& f);

}  // namespace starflow
