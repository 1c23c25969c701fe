#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spfit/errors.hpp"
#include "spfit/mesh.hpp"
#include "spfit/problem.hpp"
#include "spfit/scheme.hpp"
#include "spfit/solver.hpp"

using namespace spfit;

namespace {

LayerMesh smoothed(int n, double eps) {
  MeshParams p;
  p.n = n;
  p.epsilon = eps;
  return generate(p, MeshKind::smoothed_shishkin);
}

std::vector<double> random_state(std::size_t size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> y(size);
  for (auto& v : y) v = u(rng);
  y.front() = 0.0;
  y.back() = 0.0;
  return y;
}

}  // namespace

TEST_CASE("settings validation") {
  NewtonSettings s;
  CHECK(s.tol == 1e-12);
  CHECK(s.max_iter == 50);
  CHECK(s.check_m_matrix);
  s.tol = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigurationError);
  s.tol = 1e-10;
  s.max_iter = 0;
  CHECK_THROWS_AS(s.validate(), ConfigurationError);
}

TEST_CASE("example 1 is solved by a single Newton step") {
  for (int ke : {3, 10, 45})
    for (int n : {64, 256, 1024})
      for (double guess : {-0.5, 0.0, 3.0}) {
        const double eps = std::ldexp(1.0, -ke);
        const auto bvp = builtin_example(ExampleId::example1, eps);
        const auto r = newton_solve(bvp, smoothed(n, eps), guess);
        REQUIRE(r.residual_history.size() >= 2);
        CHECK(r.residual_history[1] <= 1e-10);
        // any further step only confirms the first one
        CHECK(r.solution.iterations <= 2);
        if (r.step_history.size() > 1) CHECK(r.step_history[1] <= 1e-12);
        if (n == 64) CHECK(r.solution.iterations == 1);
        CHECK(r.solution.values.front() == 0.0);
        CHECK(r.solution.values.back() == 0.0);
      }
}

TEST_CASE("example 2: convergence, symmetry and quadratic contraction") {
  for (int ke : {3, 7, 15, 45}) {
    const double eps = std::ldexp(1.0, -ke);
    const auto bvp = builtin_example(ExampleId::example2, eps);
    const auto mesh = smoothed(512, eps);
    const auto r = newton_solve(bvp, mesh, bvp.initial_guess);
    const auto& y = r.solution.values;
    CHECK(r.solution.iterations <= 10);
    CHECK(r.solution.residual_norm <= 1e-10);
    CHECK(y.front() == 0.0);
    CHECK(y.back() == 0.0);
    CHECK(r.certificate.ok());
    CHECK(r.warnings.empty());
    for (std::size_t i = 0; i < y.size(); ++i) {
      CHECK(std::isfinite(y[i]));
      CHECK(std::abs(y[i] - y[y.size() - 1 - i]) <= 1e-9);
    }
    const auto& steps = r.step_history;
    for (std::size_t k = 1; k < steps.size(); ++k)
      if (steps[k - 1] < 1e-3 && steps[k] > 1e-13) CHECK(steps[k] <= 1e3 * steps[k - 1] * steps[k - 1]);
  }
  const double eps = 1.0 / 1024;
  const auto ex1 = builtin_example(ExampleId::example1, eps);
  const auto y1 = newton_solve(ex1, smoothed(256, eps), -0.5).solution.values;
  for (std::size_t i = 0; i < y1.size(); ++i) CHECK(std::abs(y1[i] - y1[y1.size() - 1 - i]) <= 1e-9);
}

TEST_CASE("initial guesses") {
  const double eps = 1.0 / 128;
  const auto bvp = builtin_example(ExampleId::example2, eps);
  const auto mesh = smoothed(64, eps);
  const auto from_scalar = newton_solve(bvp, mesh, 1.0).solution.values;
  const auto from_vector = newton_solve(bvp, mesh, std::vector<double>(65, 1.0)).solution.values;
  for (std::size_t i = 0; i < from_scalar.size(); ++i)
    CHECK(from_scalar[i] == doctest::Approx(from_vector[i]).epsilon(1e-12));
  CHECK_THROWS_AS(newton_solve(bvp, mesh, std::vector<double>(10, 1.0)), ConfigurationError);
}

TEST_CASE("non-convergence carries the last iterate") {
  const double eps = 1.0 / 128;
  const auto bvp = builtin_example(ExampleId::example2, eps);
  NewtonSettings s;
  s.max_iter = 1;
  try {
    newton_solve(bvp, smoothed(64, eps), 1.0, s);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.last_iterate().size() == 65);
    CHECK(e.residual_history().size() == 2);
    CHECK(e.last_iterate().front() == 0.0);
  }
}

TEST_CASE("M-matrix certificate") {
  const double eps = 1.0 / 32;
  const auto bvp = builtin_example(ExampleId::example2, eps);
  const auto mesh = smoothed(32, eps);
  const auto c = fitted_coefficients(mesh, bvp.gamma, eps);
  auto h = jacobian(bvp, c, mesh, std::vector<double>(33, 0.5));
  auto cert = certify_m_matrix(h, c, bvp.m);
  CHECK(cert.ok());
  CHECK(cert.rows_checked == 31);
  CHECK(cert.min_row_margin >= 4.0 * bvp.m * (1 - 1e-12));

  h.diag[5] = -h.diag[5];
  h.sub[9] = -1.0;
  h.diag[20] = -1e-3;
  cert = certify_m_matrix(h, c, bvp.m);
  CHECK(cert.sign_violations == 2);
  CHECK(cert.dominance_violations == 1);
  CHECK(cert.bound_violations >= 1);
  CHECK_FALSE(cert.ok());

  // f_y far above gamma turns the off-diagonals negative; reported, not fatal
  auto hot = bvp;
  hot.f_y = [](Abscissa, double) { return 40.0; };
  const auto hh = jacobian(hot, c, mesh, std::vector<double>(33, 0.0));
  CHECK(certify_m_matrix(hh, c, hot.m).sign_violations > 0);

  // underflowed weights at tiny eps are not violations
  const double tiny = std::ldexp(1.0, -45);
  const auto ex1 = builtin_example(ExampleId::example1, tiny);
  const auto r = newton_solve(ex1, smoothed(1024, tiny), -0.5);
  CHECK(r.certificate.ok());
  CHECK(r.certificate.underflow_zeros > 0);
}

TEST_CASE("stability inequality") {
  std::mt19937_64 rng(2024);
  for (auto id : {ExampleId::example1, ExampleId::example2})
    for (int ke : {3, 7, 15}) {
      const double eps = std::ldexp(1.0, -ke);
      const auto bvp = builtin_example(id, eps);
      const auto mesh = smoothed(64, eps);
      const auto same = random_state(65, rng);
      const auto zero = stability_check(bvp, mesh, same, same);
      CHECK(zero.ratio == 0.0);
      CHECK(zero.difference_norm == 0.0);
      for (int trial = 0; trial < 100; ++trial) {
        const auto u = random_state(65, rng);
        const auto v = random_state(65, rng);
        CHECK(stability_check(bvp, mesh, u, v).ratio <= 1.0);
      }
    }

  // exact solution against the discrete one: ||u - ybar|| <= ||F u|| / m
  for (auto id : {ExampleId::example1, ExampleId::example2}) {
    const double eps = 1.0 / 128;
    const auto bvp = builtin_example(id, eps);
    const auto mesh = smoothed(128, eps);
    const auto sol = newton_solve(bvp, mesh, bvp.initial_guess).solution;
    std::vector<double> u(129);
    for (int i = 0; i <= 128; ++i) u[static_cast<std::size_t>(i)] = bvp.exact(mesh.point(i));
    const auto rep = stability_check(bvp, mesh, u, sol.values);
    CHECK(rep.ratio <= 1.0);
    CHECK(rep.difference_norm > 0.0);
  }
}
