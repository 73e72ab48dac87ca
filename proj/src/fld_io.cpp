#include "starflow/fld_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace starflow {

namespace {

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xff) << 24) | ((v & 0xff00) << 8) | ((v >> 8) & 0xff00) | (v >> 24);
}

void write_header_and_blocks(const std::filesystem::path& path, int ndim,
                             const std::array<int, 3>& dims, int ncomp,
                             const std::vector<const std::vector<double>*>& blocks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FldError(FldError::Code::io_error, "cannot open " + path.string());
  std::ostringstream header;
  header << "FLD " << ndim;
  for (int d = 0; d < ndim; ++d) header << ' ' << dims[d];
  header << ' ' << ncomp << '\n';
  out << header.str();
  std::vector<std::uint32_t> buf;
  for (const auto* block : blocks) {
    buf.resize(block->size());
    for (std::size_t i = 0; i < block->size(); ++i)
      buf[i] = to_le(std::bit_cast<std::uint32_t>(static_cast<float>((*block)[i])));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(std::uint32_t)));
  }
  if (!out) throw FldError(FldError::Code::io_error, "short write to " + path.string());
}

}  // namespace

FldData read_fld(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FldError(FldError::Code::io_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FldError(FldError::Code::bad_header, "missing FLD header");
  std::istringstream hs(line);
  std::string magic;
  FldData fld;
  hs >> magic >> fld.ndim;
  if (magic != "FLD" || (fld.ndim != 2 && fld.ndim != 3))
    throw FldError(FldError::Code::bad_header, "bad FLD header in " + path.string());
  for (int d = 0; d < fld.ndim; ++d) {
    hs >> fld.dims[d];
    if (!hs || fld.dims[d] < 1)
      throw FldError(FldError::Code::bad_header, "bad FLD dims in " + path.string());
  }
  hs >> fld.ncomp;
  if (!hs || fld.ncomp < 1)
    throw FldError(FldError::Code::bad_header, "bad FLD component count in " + path.string());

  const std::size_t n = static_cast<std::size_t>(fld.dims[0]) * fld.dims[1] * fld.dims[2];
  fld.components.resize(fld.ncomp);
  std::vector<std::uint32_t> buf(n);
  for (int c = 0; c < fld.ncomp; ++c) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(std::uint32_t))
      throw FldError(FldError::Code::bad_payload, "truncated FLD payload in " + path.string());
    auto& comp = fld.components[c];
    comp.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      comp[i] = static_cast<double>(std::bit_cast<float>(to_le(buf[i])));
  }
  return fld;
}

ScalarField FldData::as_scalar(const GridShape& grid) const {
  if (ncomp != 1) throw FldError(FldError::Code::bad_payload, "expected 1-component FLD");
  if (ndim != grid.ndim || dims != grid.dims)
    throw FldError(FldError::Code::bad_payload, "FLD dims do not match grid");
  return ScalarField(grid, components[0]);
}

VectorField FldData::as_vector(const GridShape& grid) const {
  if (ncomp != grid.ndim)
    throw FldError(FldError::Code::bad_payload, "expected ndim-component FLD");
  if (ndim != grid.ndim || dims != grid.dims)
    throw FldError(FldError::Code::bad_payload, "FLD dims do not match grid");
  return VectorField(grid, components);
}

void write_fld(const std::filesystem::path& path, const ScalarField& f) {
  write_header_and_blocks(path, f.shape().ndim, f.shape().dims, 1, {&f.values()});
}

void write_fld(const std::filesystem::path& path, const VectorField& f) {
  std::vector<const std::vector<double>*> blocks;
  for (int d = 0; d < f.ncomp(); ++d) blocks.push_back(&f.component(d));
  write_header_and_blocks(path, f.shape().ndim, f.shape().dims, f.ncomp(), blocks);
}

}  // namespace starflow
