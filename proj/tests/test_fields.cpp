#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "starflow/fld_io.hpp"
#include "starflow/parallel.hpp"

using namespace starflow;

namespace {

double urand(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

ScalarField random_scalar(const GridShape& shape, std::mt19937_64& g) {
  ScalarField f(shape);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.0 * urand(g) - 1.0;
  return f;
}

VectorField random_vector(const GridShape& shape, std::mt19937_64& g) {
  VectorField f(shape);
  for (int d = 0; d < shape.ndim; ++d)
    for (std::size_t i = 0; i < f.size(); ++i) f.component(d)[i] = 2.0 * urand(g) - 1.0;
  return f;
}

}  // namespace

TEST_CASE("gradient forward differences with zero last slice") {
  ScalarField u(GridShape(2, 1), std::vector<double>{0.0, 1.0});
  const VectorField g = gradient(u);
  CHECK(g.component(0)[0] == 1.0);
  CHECK(g.component(0)[1] == 0.0);

  ScalarField c(GridShape(5, 4, 3), 2.5);
  const VectorField gc = gradient(c);
  for (int d = 0; d < 3; ++d)
    for (std::size_t i = 0; i < gc.size(); ++i) CHECK(gc.component(d)[i] == 0.0);

  GridShape s33(3, 3);
  ScalarField ramp(s33);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) ramp.at(x, y) = x;
  const VectorField gr = gradient(ramp);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) {
      CHECK(gr.component(0)[s33.index(x, y)] == (x == 2 ? 0.0 : 1.0));
      CHECK(gr.component(1)[s33.index(x, y)] == 0.0);
    }
}

TEST_CASE("gradient respects spacing") {
  ScalarField u(GridShape(2, 1, 0.5, 1.0), std::vector<double>{0.0, 1.0});
  const VectorField g = gradient(u);
  CHECK(g.component(0)[0] == 2.0);
}

TEST_CASE("divergence is the exact negative adjoint of gradient") {
  std::mt19937_64 rng(12345);
  const GridShape shapes[] = {GridShape(4, 5), GridShape(4, 5, 0.7, 1.3), GridShape(3, 4, 2),
                              GridShape(1, 6), GridShape(2, 2, 2, 0.5, 1.0, 2.0)};
  for (const GridShape& s : shapes) {
    for (int trial = 0; trial < 50; ++trial) {
      const ScalarField u = random_scalar(s, rng);
      const VectorField q = random_vector(s, rng);
      const double lhs = inner(divergence(q), u);
      const double rhs = -inner(q, gradient(u));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, norm2(q) * norm2(u)));
    }
  }
}

TEST_CASE("divergence hand values") {
  // q = gradient([0,1]) = [1,0]  ->  div q = [1,-1]
  ScalarField u(GridShape(2, 1), std::vector<double>{0.0, 1.0});
  const ScalarField d = divergence(gradient(u));
  CHECK(d[0] == 1.0);
  CHECK(d[1] == -1.0);

  // constant 1D field: zero in the interior, boundary contributions at ends
  GridShape line(6, 1);
  VectorField q(line);
  for (std::size_t i = 0; i < q.size(); ++i) q.component(0)[i] = 3.0;
  const ScalarField dc = divergence(q);
  CHECK(dc[0] == 3.0);
  for (std::size_t i = 1; i + 1 < dc.size(); ++i) CHECK(dc[i] == 0.0);
  CHECK(dc[dc.size() - 1] == -3.0);

  const ScalarField dz = divergence(VectorField(GridShape(3, 4, 2)));
  for (std::size_t i = 0; i < dz.size(); ++i) CHECK(dz[i] == 0.0);
}

TEST_CASE("project_ball examples") {
  GridShape one(1, 1);
  VectorField q(one);
  q.component(0)[0] = 3.0;
  q.component(1)[0] = 4.0;

  SUBCASE("feasible on the boundary is untouched") {
    const VectorField r = project_ball(q, ScalarField(one, 5.0));
    CHECK(r.component(0)[0] == 3.0);
    CHECK(r.component(1)[0] == 4.0);
  }
  SUBCASE("radial scaling") {
    const VectorField r = project_ball(q, ScalarField(one, 2.5));
    CHECK(r.component(0)[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.component(1)[0] == doctest::Approx(2.0).epsilon(1e-12));
    const double norm = std::hypot(r.component(0)[0], r.component(1)[0]);
    CHECK(norm <= 2.5);
  }
  SUBCASE("zero vector against zero capacity") {
    VectorField z(one);
    const VectorField r = project_ball(z, ScalarField(one, 0.0));
    CHECK(r.component(0)[0] == 0.0);
    CHECK(r.component(1)[0] == 0.0);
  }
  SUBCASE("negative capacity rejected") {
    CHECK_THROWS_AS(project_ball(q, ScalarField(one, -1.0)), FieldError);
  }
}

TEST_CASE("project_ball is bitwise idempotent") {
  std::mt19937_64 rng(99);
  const GridShape s(7, 5);
  for (int trial = 0; trial < 20; ++trial) {
    VectorField q = random_vector(s, rng);
    for (int d = 0; d < s.ndim; ++d)
      for (std::size_t i = 0; i < q.size(); ++i) q.component(d)[i] *= 10.0;
    ScalarField cap(s);
    for (std::size_t i = 0; i < cap.size(); ++i) cap[i] = urand(rng) * 3.0;
    const VectorField once = project_ball(q, cap);
    const VectorField twice = project_ball(once, cap);
    CHECK(once == twice);
    for (std::size_t i = 0; i < cap.size(); ++i) {
      const double norm = std::hypot(once.component(0)[i], once.component(1)[i]);
      CHECK(norm <= cap[i]);
    }
  }
}

TEST_CASE("dot product examples") {
  GridShape one(1, 1);
  VectorField q(one), e(one);
  q.component(0)[0] = 1.0;
  e.component(0)[0] = 1.0;
  CHECK(dot(q, e)[0] == 1.0);
  e.component(0)[0] = 0.0;
  e.component(1)[0] = 1.0;
  CHECK(dot(q, e)[0] == 0.0);
  q.component(0)[0] = -2.0;
  e.component(0)[0] = 1.0;
  e.component(1)[0] = 0.0;
  CHECK(dot(q, e)[0] == -2.0);

  VectorField wrong(GridShape(2, 1));
  CHECK_THROWS_AS(dot(q, wrong), FieldError);
}

TEST_CASE("elementwise arithmetic") {
  GridShape s(2, 1);
  ScalarField a(s, std::vector<double>{1.0, 2.0});
  ScalarField b(s, std::vector<double>{3.0, 4.0});
  const ScalarField c = add(a, b);
  CHECK(c[0] == 4.0);
  CHECK(c[1] == 6.0);
  const ScalarField d = scaled(2.0, a);
  CHECK(d[0] == 2.0);
  CHECK(d[1] == 4.0);
  ScalarField y = b;
  axpy(0.5, a, y);
  CHECK(y[0] == 3.5);
  CHECK(y[1] == 5.0);

  // value semantics: mutating the source leaves the copy alone
  ScalarField copy = a;
  a[0] = 42.0;
  CHECK(copy[0] == 1.0);

  CHECK_THROWS_AS(add(a, ScalarField(GridShape(3, 1))), FieldError);
}

TEST_CASE("field constructors validate") {
  CHECK_THROWS_AS(ScalarField(GridShape(2, 1), std::vector<double>{1.0}), FieldError);
  CHECK_THROWS_AS(
      ScalarField(GridShape(2, 1), std::vector<double>{1.0, std::numeric_limits<double>::infinity()}),
      FieldError);
  CHECK_THROWS_AS(GridShape(0, 4), FieldError);
  CHECK_THROWS_AS(GridShape(4, 4, -1.0, 1.0), FieldError);
}

TEST_CASE("FLD round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "starflow_fld_test";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(7);

  GridShape s(5, 3, 0.5, 2.0);
  const ScalarField f = random_scalar(s, rng);
  write_fld(dir / "scalar.fld", f);
  const FldData data = read_fld(dir / "scalar.fld");
  CHECK(data.ndim == 2);
  CHECK(data.ncomp == 1);
  CHECK(data.dims[0] == 5);
  CHECK(data.dims[1] == 3);
  const ScalarField back = data.as_scalar(s);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(back[i] == static_cast<double>(static_cast<float>(f[i])));

  // float32 payloads are exact from the second write on
  write_fld(dir / "again.fld", back);
  const ScalarField twice = read_fld(dir / "again.fld").as_scalar(s);
  CHECK(twice == back);

  const VectorField v = random_vector(s, rng);
  write_fld(dir / "vector.fld", v);
  const VectorField vb = read_fld(dir / "vector.fld").as_vector(s);
  for (int d = 0; d < 2; ++d)
    for (std::size_t i = 0; i < v.size(); ++i)
      CHECK(vb.component(d)[i] == static_cast<double>(static_cast<float>(v.component(d)[i])));

  CHECK_THROWS_AS(read_fld(dir / "missing.fld"), FldError);
  CHECK_THROWS_AS(read_fld(dir / "vector.fld").as_scalar(s), FldError);
  CHECK_THROWS_AS(read_fld(dir / "scalar.fld").as_scalar(GridShape(3, 5)), FldError);
}

TEST_CASE("thread count does not change results") {
  std::mt19937_64 rng(31337);
  const GridShape s(512, 512);
  const ScalarField u = random_scalar(s, rng);
  const VectorField q = random_vector(s, rng);
  ScalarField cap(s);
  for (std::size_t i = 0; i < cap.size(); ++i) cap[i] = urand(rng);

  set_max_threads(1);
  const VectorField g1 = gradient(u);
  const ScalarField d1 = divergence(q);
  const VectorField p1 = project_ball(q, cap);
  const double i1 = inner(u, d1);

  set_max_threads(4);
  const VectorField g4 = gradient(u);
  const ScalarField d4 = divergence(q);
  const VectorField p4 = project_ball(q, cap);
  const double i4 = inner(u, d4);
  set_max_threads(1);

  CHECK(g1 == g4);
  CHECK(d1 == d4);
  CHECK(p1 == p4);
  CHECK(i1 == i4);
}
