#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "spfit/errors.hpp"
#include "spfit/mesh.hpp"

using namespace spfit;

namespace {

MeshParams params(int n, double eps) {
  MeshParams p;
  p.n = n;
  p.epsilon = eps;
  return p;
}

const double kEps10 = std::ldexp(1.0, -10);

}  // namespace

TEST_CASE("transition point") {
  CHECK(transition_point(params(64, kEps10)) == doctest::Approx(2 * std::log(64.0) / 1024));
  CHECK(transition_point(params(64, kEps10)) == doctest::Approx(8.1230e-3).epsilon(1e-4));
  CHECK(transition_point(params(64, 0.5)) == 0.25);
  auto p = params(64, kEps10);
  p.m = 4.0;
  CHECK(transition_point(p) == doctest::Approx(std::log(64.0) / 1024));
}

TEST_CASE("generating function") {
  const auto p = params(64, kEps10);
  const double lambda = transition_point(p);
  CHECK(generating_function(p, lambda, 0.0) == 0.0);
  CHECK(generating_function(p, lambda, 1.0) == 1.0);
  CHECK(generating_function(p, lambda, 0.5) == 0.5);
  CHECK(generating_function(p, lambda, 0.25) == doctest::Approx(lambda).epsilon(1e-15));

  const double cubic = 32 * (1 - 4 * lambda);
  const double expected = cubic / 512 + 4 * lambda * 0.375;
  CHECK(generating_function(p, lambda, 0.375) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(generating_function(p, lambda, 0.375) == doctest::Approx(0.072655).epsilon(2e-5));

  CHECK_THROWS_AS(generating_function(p, lambda, -0.01), DomainError);
  CHECK_THROWS_AS(generating_function(p, lambda, 1.01), DomainError);
}

TEST_CASE("generating function is C1 at q and 1/2") {
  for (double eps : {kEps10, 1.0 / 32, std::ldexp(1.0, -40)}) {
    const auto p = params(256, eps);
    const double lambda = transition_point(p);
    const double d = 1e-7;
    for (double t : {p.q, 0.5}) {
      const double left = (generating_function(p, lambda, t) -
                           generating_function(p, lambda, t - d)) / d;
      const double right = (generating_function(p, lambda, t + d) -
                            generating_function(p, lambda, t)) / d;
      CHECK(std::abs(left - right) <= 1e-5 * std::max(std::abs(right), 1.0));
    }
  }
}

TEST_CASE("smoothed Shishkin mesh: small cases") {
  const auto m8 = generate(params(8, kEps10), MeshKind::smoothed_shishkin);
  REQUIRE(m8.intervals() == 8);
  CHECK(m8.node(2) == doctest::Approx(2 * std::log(8.0) / 1024).epsilon(1e-14));
  CHECK(m8.node(2) == doctest::Approx(4.0614e-3).epsilon(1e-4));
  CHECK(m8.node(4) == 0.5);
  CHECK(m8.node(0) == 0.0);
  CHECK(m8.node(8) == 1.0);

  // lambda clamped at q: the mesh is uniform
  const auto clamped = generate(params(64, 0.5), MeshKind::smoothed_shishkin);
  CHECK(clamped.clamped());
  for (int i = 0; i <= 64; ++i) CHECK(std::abs(clamped.node(i) - i / 64.0) <= 1e-14);

  auto up = params(4, 0.5);
  const auto uniform = generate(up, MeshKind::uniform);
  const std::vector<double> expected{0, 0.25, 0.5, 0.75, 1};
  for (int i = 0; i <= 4; ++i) CHECK(uniform.node(i) == expected[static_cast<std::size_t>(i)]);
}

TEST_CASE("mesh invariants for every kind") {
  for (auto kind : {MeshKind::smoothed_shishkin, MeshKind::shishkin, MeshKind::uniform})
    for (int n : {8, 64, 1024})
      for (double eps : {0.5, kEps10, std::ldexp(1.0, -45)}) {
        const auto mesh = generate(params(n, eps), kind);
        CHECK(mesh.node(0) == 0.0);
        CHECK(mesh.node(n) == 1.0);
        CHECK(mesh.node(n / 2) == 0.5);
        for (int i = 0; i < n; ++i) {
          CHECK(mesh.step(i) > 0.0);
          CHECK(mesh.node(i + 1) > mesh.node(i));
          CHECK(std::abs(mesh.step(i) - (mesh.node(i + 1) - mesh.node(i))) <= 1e-15);
        }
        for (int i = 0; i <= n; ++i) {
          CHECK(std::abs(mesh.node(n - i) - (1.0 - mesh.node(i))) <= 1e-14);
          CHECK(mesh.point(n - i).to_right == mesh.node(i));
        }
      }

  const auto sh = generate(params(64, kEps10), MeshKind::shishkin);
  CHECK(sh.node(16) == doctest::Approx(sh.lambda()).epsilon(1e-15));
  CHECK(sh.step(0) == doctest::Approx(sh.lambda() / 16));
  CHECK(sh.step(20) == doctest::Approx((0.5 - sh.lambda()) / 16));
}

TEST_CASE("mesh diagnostics") {
  for (int n : {8, 64, 512}) {
    const auto d = mesh_diagnostics(generate(params(n, 0.5), MeshKind::uniform));
    CHECK(d.max_step_times_n == doctest::Approx(1.0));
    CHECK(d.max_step_jump_times_n2 <= 1e-9);
  }
  // h N <= max phi' and |dh| N^2 <= max |phi''|, both independent of N
  for (double eps : {1.0 / 32, kEps10, std::ldexp(1.0, -25), std::ldexp(1.0, -45)}) {
    for (int n = 8; n <= 8192; n *= 2) {
      const auto p = params(n, eps);
      const auto mesh = generate(p, MeshKind::smoothed_shishkin);
      const double r = mesh.lambda() / p.q;
      const double w = 0.5 - p.q;
      const double slope = r + 1.5 * (1 - r) / w;
      const double curvature = 3 * (1 - r) / (w * w);
      const auto d = mesh_diagnostics(mesh);
      CHECK(d.max_step_times_n <= slope * (1 + 1e-12));
      CHECK(d.max_step_jump_times_n2 <= curvature * (1 + 1e-9) + 1e-9);
      CHECK(d.max_step_times_n <= 6.0);
      CHECK(d.max_step_jump_times_n2 <= 48.0 + 1e-9);
      CHECK(d.left_steps_nondecreasing);
      CHECK(d.right_steps_nonincreasing);
    }
  }
}

TEST_CASE("locate") {
  const auto mesh = generate(params(64, kEps10), MeshKind::smoothed_shishkin);
  CHECK(mesh.locate(0.0) == 0);
  CHECK(mesh.locate(1.0) == 63);
  CHECK(mesh.locate(0.5) == 32);
  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (mesh.node(i) + mesh.node(i + 1));
    CHECK(mesh.locate(mid) == i);
  }
}

TEST_CASE("mesh dump") {
  std::ostringstream out;
  write_mesh(out, generate(params(8, kEps10), MeshKind::smoothed_shishkin));
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto tabs = std::count(line.begin(), line.end(), '\t');
    CHECK(tabs == (lines < 8 ? 2 : 1));
    ++lines;
  }
  CHECK(lines == 9);
  CHECK(out.str().find("4\t0.5\t") != std::string::npos);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate(params(10, 0.1), MeshKind::smoothed_shishkin), ConfigurationError);
  CHECK_THROWS_AS(generate(params(4, 0.1), MeshKind::smoothed_shishkin), ConfigurationError);
  CHECK_THROWS_AS(generate(params(64, 1.0), MeshKind::smoothed_shishkin), ConfigurationError);
  auto p = params(64, 0.1);
  p.q = 0.5;
  CHECK_THROWS_AS(generate(p, MeshKind::smoothed_shishkin), ConfigurationError);
  p = params(64, 0.1);
  p.sigma = 0.0;
  CHECK_THROWS_AS(generate(p, MeshKind::smoothed_shishkin), ConfigurationError);
  CHECK(parse_mesh_kind("shishkin") == MeshKind::shishkin);
  CHECK(to_string(MeshKind::smoothed_shishkin) == "smoothed-shishkin");
  CHECK_THROWS_AS(parse_mesh_kind("bakhvalov"), ConfigurationError);
}
