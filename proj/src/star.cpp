#include "starflow/star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace starflow {

namespace {

void require_vantage(const GridShape& g, const std::array<int, 3>& v) {
  if (!g.contains(v[0], v[1], v[2]))
    throw StarError(StarError::Code::vantage_out_of_bounds, "vantage outside grid");
  if (g.ndim == 2 && v[2] != 0)
    throw StarError(StarError::Code::vantage_out_of_bounds, "vantage outside grid");
}

struct Offsets {
  // full neighbourhood: 8 offsets in 2D, 26 in 3D
  std::vector<std::array<int, 3>> deltas;
  std::vector<double> step_len;  // physical length per offset
};

Offsets neighbourhood(const GridShape& g) {
  Offsets o;
  const int zmin = g.ndim == 3 ? -1 : 0;
  const int zmax = g.ndim == 3 ? 1 : 0;
  for (int dz = zmin; dz <= zmax; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        o.deltas.push_back({dx, dy, dz});
        const double lx = dx * g.spacing[0];
        const double ly = dy * g.spacing[1];
        const double lz = dz * g.spacing[2];
        o.step_len.push_back(std::sqrt(lx * lx + ly * ly + lz * lz));
      }
  return o;
}

}  // namespace

VectorField simple_star_field(const GridShape& grid, const std::array<int, 3>& vantage) {
  require_vantage(grid, vantage);
  VectorField e(grid);
  std::array<double*, 3> ec{};
  for (int d = 0; d < grid.ndim; ++d) ec[d] = e.component(d).data();
  const std::size_t n = grid.voxels();
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = grid.coords(i);
    double v[3] = {0, 0, 0};
    double len2 = 0.0;
    for (int d = 0; d < grid.ndim; ++d) {
      v[d] = (vantage[d] - c[d]) * grid.spacing[d];
      len2 += v[d] * v[d];
    }
    if (len2 == 0.0) continue;  // the vantage itself is exempt
    const double inv = 1.0 / std::sqrt(len2);
    for (int d = 0; d < grid.ndim; ++d) ec[d][i] = v[d] * inv;
  }
  return e;
}

ScalarField geodesic_distance(const GridShape& grid, const std::array<int, 3>& vantage,
                              const ScalarField& metric) {
  require_vantage(grid, vantage);
  require_same_shape(grid, metric.shape(), "geodesic_distance: metric shape mismatch");
  if (min_value(metric) <= 0.0)
    throw StarError(StarError::Code::non_positive_metric, "metric must be positive everywhere");

  const Offsets nb = neighbourhood(grid);
  const std::size_t n = grid.voxels();
  ScalarField dist(grid, std::numeric_limits<double>::max());
  std::vector<char> done(n, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  const std::size_t start = grid.index(vantage[0], vantage[1], vantage[2]);
  dist[start] = 0.0;
  queue.emplace(0.0, start);
  while (!queue.empty()) {
    const auto [d, i] = queue.top();
    queue.pop();
    if (done[i]) continue;
    done[i] = 1;
    const auto c = grid.coords(i);
    for (std::size_t k = 0; k < nb.deltas.size(); ++k) {
      const int x = c[0] + nb.deltas[k][0];
      const int y = c[1] + nb.deltas[k][1];
      const int z = c[2] + nb.deltas[k][2];
      if (!grid.contains(x, y, z)) continue;
      const std::size_t j = grid.index(x, y, z);
      if (done[j]) continue;
      const double w = 0.5 * (metric[i] + metric[j]) * nb.step_len[k];
      const double nd = d + w;
      if (nd < dist[j]) {
        dist[j] = nd;
        queue.emplace(nd, j);
      }
    }
  }
  return dist;
}

VectorField geodesic_star_field(const GridShape& grid, const std::array<int, 3>& vantage,
                                const ScalarField& metric) {
  const ScalarField g = geodesic_distance(grid, vantage, metric);
  VectorField e(grid);
  std::array<double*, 3> ec{};
  for (int d = 0; d < grid.ndim; ++d) ec[d] = e.component(d).data();
  const std::size_t n = grid.voxels();
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = grid.coords(i);
    double v[3] = {0, 0, 0};
    double len2 = 0.0;
    for (int d = 0; d < grid.ndim; ++d) {
      const int lo = c[d] - 1, hi = c[d] + 1;
      double num, den;
      if (lo >= 0 && hi < grid.dims[d]) {
        num = g[i + grid.stride(d)] - g[i - grid.stride(d)];
        den = 2.0 * grid.spacing[d];
      } else if (hi < grid.dims[d]) {
        num = g[i + grid.stride(d)] - g[i];
        den = grid.spacing[d];
      } else if (lo >= 0) {
        num = g[i] - g[i - grid.stride(d)];
        den = grid.spacing[d];
      } else {
        num = 0.0;
        den = 1.0;
      }
      v[d] = -num / den;
      len2 += v[d] * v[d];
    }
    if (len2 < 1e-18) continue;  // flat spot or distance ridge: leave zero
    const double inv = 1.0 / std::sqrt(len2);
    for (int d = 0; d < grid.ndim; ++d) ec[d][i] = v[d] * inv;
  }
  const std::size_t vi = grid.index(vantage[0], vantage[1], vantage[2]);
  for (int d = 0; d < grid.ndim; ++d) ec[d][vi] = 0.0;
  return e;
}

VectorField normalize_direction_field(VectorField f, double tol) {
  const GridShape& g = f.shape();
  std::array<double*, 3> fc{};
  for (int d = 0; d < g.ndim; ++d) fc[d] = f.component(d).data();
  const std::size_t n = g.voxels();
  for (std::size_t i = 0; i < n; ++i) {
    double len2 = 0.0;
    for (int d = 0; d < g.ndim; ++d) len2 += fc[d][i] * fc[d][i];
    const double len = std::sqrt(len2);
    if (len <= tol) {
      for (int d = 0; d < g.ndim; ++d) fc[d][i] = 0.0;
    } else if (std::abs(len - 1.0) <= tol) {
      const double inv = 1.0 / len;
      for (int d = 0; d < g.ndim; ++d) fc[d][i] *= inv;
    } else {
      throw StarError(StarError::Code::bad_direction_field,
                      "direction magnitude " + std::to_string(len) + " is neither 0 nor 1");
    }
  }
  return f;
}

std::map<LabelId, VectorField> ShapeComplexSpec::resolve(const GridShape& grid) const {
  std::map<LabelId, VectorField> out;
  for (const auto& [label, spec] : entries) {
    switch (spec.kind) {
      case DirectionSpec::Kind::simple:
        out.emplace(label, simple_star_field(grid, spec.vantage));
        break;
      case DirectionSpec::Kind::geodesic:
        out.emplace(label, geodesic_star_field(grid, spec.vantage, spec.metric));
        break;
      case DirectionSpec::Kind::explicit_field: {
        require_same_shape(grid, spec.field.shape(), "explicit direction field shape mismatch");
        out.emplace(label, normalize_direction_field(spec.field));
        break;
      }
    }
    // |e| must be unit or exactly zero after resolution
    const VectorField& e = out.at(label);
    for (std::size_t i = 0; i < grid.voxels(); ++i) {
      double len2 = 0.0;
      for (int d = 0; d < grid.ndim; ++d) len2 += e.component(d)[i] * e.component(d)[i];
      const double len = std::sqrt(len2);
      if (len != 0.0 && std::abs(len - 1.0) > 1e-6)
        throw StarError(StarError::Code::bad_direction_field, "resolved direction not unit-or-zero");
    }
  }
  return out;
}

ScalarField exemption(const VectorField& q, const VectorField& e) {
  ScalarField lam = dot(q, e);
  double* lv = lam.data();
  for (std::size_t i = 0; i < lam.size(); ++i) lv[i] = std::max(0.0, lv[i]);
  return lam;
}

namespace {

// Multilinear interpolation at a continuous position given in voxel
// coordinates; pos must satisfy 0 <= pos[d] <= dims[d]-1.
double interp_raster(const std::vector<double>& raster, const GridShape& g, const double pos[3]) {
  int base[3] = {0, 0, 0};
  double frac[3] = {0, 0, 0};
  for (int d = 0; d < g.ndim; ++d) {
    int b = static_cast<int>(std::floor(pos[d]));
    if (b > g.dims[d] - 2) b = std::max(0, g.dims[d] - 2);
    base[d] = b;
    frac[d] = g.dims[d] == 1 ? 0.0 : pos[d] - b;
  }
  double acc = 0.0;
  const int corners = 1 << g.ndim;
  for (int m = 0; m < corners; ++m) {
    double w = 1.0;
    int c[3] = {base[0], base[1], base[2]};
    for (int d = 0; d < g.ndim; ++d) {
      if (m & (1 << d)) {
        w *= frac[d];
        c[d] = std::min(base[d] + 1, g.dims[d] - 1);
      } else {
        w *= 1.0 - frac[d];
      }
    }
    acc += w * raster[g.index(c[0], c[1], c[2])];
  }
  return acc;
}

double interp(const ScalarField& f, const double pos[3]) {
  return interp_raster(f.values(), f.shape(), pos);
}

double interp_component(const VectorField& f, int comp, const double pos[3]) {
  return interp_raster(f.component(comp), f.shape(), pos);
}

}  // namespace

// A walk counts as crossing the complement only when the interpolated mask
// drops below this. Rays grazing a staircase boundary (shadow edges radial
// from the vantage) dip to just under one half from quantization alone;
// genuine exits pass within half a voxel of an unmasked centre and read
// well below one quarter.
constexpr double kMaskCrossing = 0.25;

StarConvexityReport check_star_convex(const ScalarField& mask, const VectorField& e) {
  require_same_shape(mask.shape(), e.shape(), "check_star_convex: shape mismatch");
  const GridShape& g = mask.shape();
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i] != 0.0 && mask[i] != 1.0)
      throw StarError(StarError::Code::non_binary_mask, "mask values must be exactly 0 or 1");

  // Half-voxel physical step; generous cap against pathological fields that
  // neither reach a zero of e nor leave the grid.
  double min_spacing = g.spacing[0];
  for (int d = 1; d < g.ndim; ++d) min_spacing = std::min(min_spacing, g.spacing[d]);
  const double step = 0.5 * min_spacing;
  const long max_steps = 20L * (g.dims[0] + g.dims[1] + g.dims[2]);

  StarConvexityReport report;
  const std::size_t n = g.voxels();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i] != 1.0) continue;
    const auto c0 = g.coords(i);
    double edir[3] = {0, 0, 0};
    double elen2 = 0.0;
    for (int d = 0; d < g.ndim; ++d) {
      edir[d] = e.component(d)[i];
      elen2 += edir[d] * edir[d];
    }
    if (elen2 == 0.0) continue;
    ++report.checked;

    double pos[3] = {double(c0[0]), double(c0[1]), double(c0[2])};
    bool violated = true;  // cap exhaustion counts as a violation
    for (long s = 0; s < max_steps; ++s) {
      // A zero direction at the nearest voxel (the vantage, or an
      // unconstrained spot) ends the walk at that voxel, whose own mask
      // value is the final sample.
      int v[3] = {0, 0, 0};
      for (int d = 0; d < g.ndim; ++d) v[d] = static_cast<int>(std::lround(pos[d]));
      const std::size_t vi = g.index(v[0], v[1], v[2]);
      double nearest_len2 = 0.0;
      for (int d = 0; d < g.ndim; ++d) {
        const double c = e.component(d)[vi];
        nearest_len2 += c * c;
      }
      if (nearest_len2 == 0.0) {
        violated = mask[vi] != 1.0;
        break;
      }
      // Step along the interpolated direction; nearest-voxel quantization
      // would wobble the walk across staircase boundaries.
      double dir[3] = {0, 0, 0};
      double len2 = 0.0;
      for (int d = 0; d < g.ndim; ++d) {
        dir[d] = interp_component(e, d, pos);
        len2 += dir[d] * dir[d];
      }
      if (len2 < 1e-18) {
        for (int d = 0; d < g.ndim; ++d) {
          dir[d] = e.component(d)[vi];
          len2 += dir[d] * dir[d];
        }
      }
      const double inv_len = 1.0 / std::sqrt(len2);
      bool inside = true;
      for (int d = 0; d < g.ndim; ++d) {
        pos[d] += step * dir[d] * inv_len / g.spacing[d];
        if (pos[d] < 0.0 || pos[d] > g.dims[d] - 1) inside = false;
      }
      if (!inside) {
        violated = false;
        break;
      }
      if (interp(mask, pos) < kMaskCrossing) break;
    }
    if (violated) report.violations.push_back(i);
  }
  return report;
}

}  // namespace starflow
