#include "starflow/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace starflow {

namespace {

/// Uniform doubles derived from raw mt19937_64 words so streams are identical
/// on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }  // [0,1)
  double symmetric() { return 2.0 * unit() - 1.0; }                        // [-1,1)
 private:
  std::mt19937_64 gen_;
};

double dist_point_segment(double px, double py, double ax, double ay, double bx, double by) {
  const double vx = bx - ax, vy = by - ay;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

struct Builder {
  int size;
  double noise;
  Rng rng;
  GridShape grid;

  Builder(int size, double noise, std::uint64_t seed)
      : size(size), noise(noise), rng(seed), grid(size, size) {}

  /// Noisy piecewise-constant image and per-leaf costs |image - mu|.
  std::map<LabelId, ScalarField> absdiff_costs(const std::vector<LabelId>& leaves,
                                               const std::vector<double>& mu,
                                               const ScalarField& region_of /*leaf index*/) {
    ScalarField image(grid);
    for (std::size_t i = 0; i < image.size(); ++i)
      image[i] = mu[static_cast<int>(region_of[i])] + noise * rng.symmetric();
    std::map<LabelId, ScalarField> costs;
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      ScalarField d(grid);
      for (std::size_t i = 0; i < image.size(); ++i) d[i] = std::abs(image[i] - mu[k]);
      costs.emplace(leaves[k], std::move(d));
    }
    return costs;
  }
};

void set_constant_smoothness(Problem& p, double value) {
  for (LabelId l = 1; l < p.hierarchy.label_count(); ++l)
    p.smoothness.emplace(l, ScalarField(p.grid, value));
}

ScalarField metric_from_mask(const GridShape& grid, const ScalarField& mask, double outside) {
  ScalarField m(grid, outside);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (mask[i] == 1.0) m[i] = 1.0;
  return m;
}

SolverConfig phantom_solver_defaults() {
  SolverConfig cfg;
  cfg.c = 0.25;  // stability sweep: best AL/PF agreement at tau = 0.1
  cfg.max_iters = 5000;
  return cfg;
}

Phantom make_annulus(int size, double noise, std::uint64_t seed) {
  Builder b(size, noise, seed);
  const int cx = size / 2, cy = size / 2;
  const double r_in = 0.15 * size, r_out = 0.30 * size;

  Phantom ph;
  ph.name = "annulus";
  Problem& p = ph.problem;
  p.grid = b.grid;
  p.label_names = {"source", "vessel", "background", "interior", "wall"};
  p.hierarchy = LabelHierarchy::build({{0, 1}, {0, 2}, {1, 3}, {1, 4}});
  const LabelId vessel = 1, background = 2, interior = 3, wall = 4;

  ScalarField region(p.grid);  // leaf index: 0=background, 1=interior, 2=wall
  ph.ground_truth = ScalarField(p.grid);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double d = std::hypot(x - cx, y - cy);
      const std::size_t i = p.grid.index(x, y);
      if (d < r_in) {
        region[i] = 1;
        ph.ground_truth[i] = interior;
      } else if (d < r_out) {
        region[i] = 2;
        ph.ground_truth[i] = wall;
      } else {
        region[i] = 0;
        ph.ground_truth[i] = background;
      }
    }
  // smoothness low enough that heavy noise still breaks the unconstrained
  // segmentation's star convexity while the constrained one stays clean
  p.data_costs = b.absdiff_costs({background, interior, wall}, {0.0, 1.0, 0.5}, region);
  set_constant_smoothness(p, 0.10);

  DirectionSpec star;
  star.kind = DirectionSpec::Kind::simple;
  star.vantage = {cx, cy, 0};
  p.shapes.entries.emplace(interior, star);
  p.shapes.entries.emplace(vessel, star);
  p.config = phantom_solver_defaults();
  return ph;
}

Phantom make_cshape(int size, double noise, std::uint64_t seed) {
  Builder b(size, noise, seed);
  const int cx = size / 2, cy = size / 2;
  const double r_in = 0.15 * size, r_out = 0.30 * size;
  const double opening = 0.7;  // half-angle of the cut, radians

  Phantom ph;
  ph.name = "cshape";
  Problem& p = ph.problem;
  p.grid = b.grid;
  p.label_names = {"source", "shape", "background"};
  p.hierarchy = LabelHierarchy::build({{0, 1}, {0, 2}});
  const LabelId shape = 1, background = 2;

  ScalarField mask(p.grid);
  ph.ground_truth = ScalarField(p.grid);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double d = std::hypot(x - cx, y - cy);
      const double ang = std::atan2(double(y - cy), double(x - cx));
      const bool in_c = d >= r_in && d < r_out && std::abs(ang) > opening;
      const std::size_t i = p.grid.index(x, y);
      mask[i] = in_c ? 1.0 : 0.0;
      ph.ground_truth[i] = in_c ? shape : background;
    }
  ScalarField region(p.grid);
  for (std::size_t i = 0; i < region.size(); ++i) region[i] = mask[i] == 1.0 ? 0 : 1;
  p.data_costs = b.absdiff_costs({shape, background}, {1.0, 0.0}, region);
  set_constant_smoothness(p, 0.10);

  // geodesic star from inside the left stroke: geodesics bend along the C,
  // so the clean C passes the checker while noise speckle does not
  DirectionSpec star;
  star.kind = DirectionSpec::Kind::geodesic;
  star.vantage = {cx - static_cast<int>(0.225 * size), cy, 0};
  star.metric = metric_from_mask(p.grid, mask, 20.0);
  p.shapes.entries.emplace(shape, star);
  p.config = phantom_solver_defaults();
  return ph;
}

Phantom make_tube(const std::string& name, int size, double noise, std::uint64_t seed,
                  const std::vector<std::array<double, 4>>& segments,
                  const std::array<int, 3>& vantage) {
  Builder b(size, noise, seed);
  Phantom ph;
  ph.name = name;
  Problem& p = ph.problem;
  p.grid = b.grid;
  p.label_names = {"source", "shape", "background"};
  p.hierarchy = LabelHierarchy::build({{0, 1}, {0, 2}});
  const LabelId shape = 1, background = 2;
  const double halfwidth = 0.06 * size;

  ScalarField mask(p.grid);
  ph.ground_truth = ScalarField(p.grid);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double d = std::numeric_limits<double>::max();
      for (const auto& s : segments)
        d = std::min(d, dist_point_segment(x, y, s[0], s[1], s[2], s[3]));
      const bool inside = d <= halfwidth;
      const std::size_t i = p.grid.index(x, y);
      mask[i] = inside ? 1.0 : 0.0;
      ph.ground_truth[i] = inside ? shape : background;
    }
  ScalarField region(p.grid);
  for (std::size_t i = 0; i < region.size(); ++i) region[i] = mask[i] == 1.0 ? 0 : 1;
  p.data_costs = b.absdiff_costs({shape, background}, {1.0, 0.0}, region);
  set_constant_smoothness(p, 0.25);

  DirectionSpec star;
  star.kind = DirectionSpec::Kind::geodesic;
  star.vantage = vantage;
  star.metric = metric_from_mask(p.grid, mask, 20.0);
  p.shapes.entries.emplace(shape, star);
  p.config = phantom_solver_defaults();
  return ph;
}

Phantom make_ushape(int size, double noise, std::uint64_t seed) {
  const double n = size;
  // two arms joined by a chord-sampled semicircular bend
  std::vector<std::array<double, 4>> segments;
  segments.push_back({0.30 * n, 0.25 * n, 0.30 * n, 0.60 * n});
  segments.push_back({0.70 * n, 0.25 * n, 0.70 * n, 0.60 * n});
  const double cxa = 0.50 * n, cya = 0.60 * n, r = 0.20 * n;
  double prev_x = 0.30 * n, prev_y = 0.60 * n;
  for (int k = 1; k <= 8; ++k) {
    const double ang = M_PI * k / 8.0;
    const double x = cxa - r * std::cos(ang), y = cya + r * std::sin(ang);
    segments.push_back({prev_x, prev_y, x, y});
    prev_x = x;
    prev_y = y;
  }
  return make_tube("ushape", size, noise, seed, segments,
                   {static_cast<int>(0.30 * size), static_cast<int>(0.27 * size), 0});
}

Phantom make_bifurcation(int size, double noise, std::uint64_t seed) {
  const double n = size;
  std::vector<std::array<double, 4>> segments = {
      {0.50 * n, 0.12 * n, 0.50 * n, 0.50 * n},
      {0.50 * n, 0.50 * n, 0.30 * n, 0.85 * n},
      {0.50 * n, 0.50 * n, 0.70 * n, 0.85 * n},
  };
  return make_tube("bifurcation", size, noise, seed, segments,
                   {size / 2, static_cast<int>(0.15 * size), 0});
}

Phantom make_random(int size, double noise, std::uint64_t seed) {
  Builder b(size, noise, seed);
  Phantom ph;
  ph.name = "random";
  Problem& p = ph.problem;
  p.grid = b.grid;
  p.label_names = {"source", "a", "b", "c"};
  p.hierarchy = LabelHierarchy::build({{0, 1}, {0, 2}, {0, 3}});

  auto blur = [&](ScalarField f) {
    for (int pass = 0; pass < 2; ++pass)
      for (int axis = 0; axis < 2; ++axis) {
        ScalarField out(p.grid);
        for (int y = 0; y < size; ++y)
          for (int x = 0; x < size; ++x) {
            double acc = 0.0;
            for (int o = -2; o <= 2; ++o) {
              int xx = x + (axis == 0 ? o : 0), yy = y + (axis == 1 ? o : 0);
              xx = std::clamp(xx, 0, size - 1);
              yy = std::clamp(yy, 0, size - 1);
              acc += f.at(xx, yy);
            }
            out.at(x, y) = acc / 5.0;
          }
        f = std::move(out);
      }
    return f;
  };

  for (LabelId leaf : {1, 2, 3}) {
    ScalarField d(p.grid);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = b.rng.unit();
    d = blur(std::move(d));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += noise * b.rng.symmetric();
    p.data_costs.emplace(leaf, std::move(d));
  }
  set_constant_smoothness(p, 0.5);

  ph.ground_truth = ScalarField(p.grid);
  for (std::size_t i = 0; i < ph.ground_truth.size(); ++i) {
    LabelId best = 1;
    for (LabelId l : {2, 3})
      if (p.data_costs.at(l)[i] < p.data_costs.at(best)[i]) best = l;
    ph.ground_truth[i] = best;
  }
  p.config = phantom_solver_defaults();
  // the smooth costs are nearly tied over wide regions; the pseudo-flow
  // solver needs the longer leash here
  p.config.max_iters = 30000;
  return ph;
}

}  // namespace

Phantom synth(const std::string& name, int size, double noise_level, std::uint64_t seed) {
  if (size < 16)
    throw PhantomError(PhantomError::Code::bad_size, "phantom size must be at least 16 per axis");
  Phantom ph;
  if (name == "annulus")
    ph = make_annulus(size, noise_level, seed);
  else if (name == "cshape")
    ph = make_cshape(size, noise_level, seed);
  else if (name == "ushape")
    ph = make_ushape(size, noise_level, seed);
  else if (name == "bifurcation")
    ph = make_bifurcation(size, noise_level, seed);
  else if (name == "random")
    ph = make_random(size, noise_level, seed);
  else
    throw PhantomError(PhantomError::Code::unknown_phantom, "unknown phantom \"" + name + "\"");
  ph.problem.validate();
  return ph;
}

}  // namespace starflow
