#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlmh/diagnostics.hpp"
#include "nlmh/error.hpp"
#include "nlmh/spectral.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nlmh;
constexpr double pi = std::numbers::pi;

namespace {

SimConfig cfg_at(int n, double eps) {
  SimConfig cfg;
  cfg.grid = Grid(n);
  cfg.epsilon = eps;
  return cfg;
}

double flory_f(double s) {
  return 0.5 * ((1 + s) * std::log1p(s) + (1 - s) * std::log1p(-s)) - s * s;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("zero and constant states") {
  for (double eps : {0.0, 2.0}) {
    const SimConfig cfg = cfg_at(16, eps);
    const auto K = make_kernel(cfg);
    const DiagnosticsRecord z = record(SimState(cfg.grid), cfg, K ? &*K : nullptr);
    CHECK(z.mass == 0.0);
    CHECK(z.kinetic == 0.0);
    CHECK(z.interfacial == 0.0);
    CHECK(z.bulk == 0.0);
    CHECK(z.total == 0.0);
    CHECK(z.grad_mu_sq == 0.0);
    CHECK(z.grad_v_sq == 0.0);
    CHECK(z.max_abs_c == 0.0);

    const SimState m(VectorField(cfg.grid), ScalarField(cfg.grid, 0.4), 0.0);
    const DiagnosticsRecord r = record(m, cfg, K ? &*K : nullptr);
    CHECK(r.mass == doctest::Approx(0.4));
    CHECK(r.total == doctest::Approx(4 * pi * pi * flory_f(0.4)).epsilon(1e-12));
    CHECK(r.grad_mu_sq < 1e-24);
    CHECK(r.grad_v_sq == 0.0);
    CHECK(std::abs(r.interfacial) < 1e-12);
  }
}

TEST_CASE("energy parts add up and match physical-space quadrature") {
  // Local model: interfacial energy 1/2 |grad c|^2 from the analytic gradient.
  const SimConfig loc = cfg_at(32, 0.0);
  const SimState s = make_initial_data(loc.grid, InitialDataSpec{});
  const DiagnosticsRecord r = record(s, loc, nullptr);
  CHECK(r.total == doctest::Approx(r.kinetic + r.interfacial + r.bulk).epsilon(1e-12));
  const Grid& g = loc.grid;
  const double h2 = g.spacing() * g.spacing();
  double kin = 0.0, inter = 0.0, bulk = 0.0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const double x = g.x(i), y = g.x(j);
      kin += 0.5 * (s.v.x(i, j) * s.v.x(i, j) + s.v.y(i, j) * s.v.y(i, j));
      const double cx = -0.3 * std::sin(x) * std::cos(y), cy = -0.3 * std::cos(x) * std::sin(y);
      inter += 0.5 * (cx * cx + cy * cy);
      bulk += flory_f(s.c(i, j));
    }
  CHECK(r.kinetic == doctest::Approx(h2 * kin).epsilon(1e-10));
  CHECK(r.interfacial == doctest::Approx(h2 * inter).epsilon(1e-10));
  CHECK(r.bulk == doctest::Approx(h2 * bulk).epsilon(1e-10));
  CHECK(r.max_abs_c == doctest::Approx(0.4));
  CHECK(r.grad_v_sq == doctest::Approx(4.0 * r.kinetic).epsilon(1e-12));

  // Nonlocal: interfacial energy against the double sum.
  const SimConfig nl = cfg_at(16, 2.0);
  const auto K = make_kernel(nl);
  const SimState t = make_initial_data(nl.grid, InitialDataSpec{});
  const DiagnosticsRecord q = record(t, nl, &*K);
  CHECK(q.interfacial == doctest::Approx(oracle::brute_energy(t.c, 2.0)).epsilon(1e-10));
  CHECK(q.total == doctest::Approx(q.kinetic + q.interfacial + q.bulk).epsilon(1e-12));
}

TEST_CASE("dissipation residual") {
  DiagnosticsRecord a, b;
  a.t = 0.0;
  b.t = 0.5;
  a.total = b.total = 3.0;
  CHECK(dissipation_residual(a, b) == 0.0);
  b.total = 2.0;
  a.grad_mu_sq = 1.0;
  b.grad_mu_sq = 0.5;
  a.grad_v_sq = 0.25;
  b.grad_v_sq = 0.75;
  CHECK(dissipation_residual(a, b) == doctest::Approx(-2.0 + 0.5 + 0.75));
  b.t = 0.0;
  CHECK_THROWS_AS(dissipation_residual(a, b), Error);

  // Equilibrium run: every residual vanishes.
  SimConfig cfg = cfg_at(16, 0.0);
  cfg.t_end = 0.01;
  cfg.record_every = 1;
  std::vector<DiagnosticsRecord> recs;
  run(cfg, SimState(VectorField(cfg.grid), ScalarField(cfg.grid, 0.2), 0.0),
      [&](const SimState& s, std::size_t) { recs.push_back(record(s, cfg, nullptr)); });
  for (std::size_t i = 1; i < recs.size(); ++i) CHECK(std::abs(dissipation_residual(recs[i - 1], recs[i])) < 1e-10);
}

TEST_CASE("residual is first order in dt") {
  // Max residual over a short local run, dt and dt/2.
  auto max_residual = [](double dt) {
    SimConfig cfg = cfg_at(32, 0.0);
    cfg.dt = dt;
    cfg.t_end = 0.05;
    cfg.record_every = 1;
    std::vector<DiagnosticsRecord> recs;
    run(cfg, make_initial_data(cfg.grid, InitialDataSpec{}),
        [&](const SimState& s, std::size_t) { recs.push_back(record(s, cfg, nullptr)); });
    double m = 0.0;
    for (std::size_t i = 1; i < recs.size(); ++i)
      m = std::max(m, std::abs(dissipation_residual(recs[i - 1], recs[i])));
    return m;
  };
  const double ratio = max_residual(1e-3) / max_residual(5e-4);
  CHECK(ratio >= 2.0 * 0.7);
  CHECK(ratio <= 2.0 * 1.3);
}

TEST_CASE("error norms") {
  const SimConfig cfg = cfg_at(64, 0.5);
  const auto K = make_kernel(cfg);
  const SimState a = make_initial_data(cfg.grid, InitialDataSpec{});
  const ErrorRecord same = error_norms(a, a, *K);
  CHECK(same.v_sigma == 0.0);
  CHECK(same.c_dual == 0.0);
  CHECK(same.v_l2 == 0.0);
  CHECK(same.c_l2 == 0.0);
  CHECK(same.e_eps_diff == 0.0);

  SimState b = a;
  for (double& v : b.c.values) v += 0.01;
  const ErrorRecord shifted = error_norms(b, a, *K);
  CHECK(shifted.c_dual < 1e-14);
  CHECK(shifted.c_l2 == doctest::Approx(2 * pi * 0.01).epsilon(1e-12));
  CHECK(shifted.e_eps_diff < 1e-14);

  InitialDataSpec other;
  other.recipe = InitRecipe::RandomSeparated;
  const SimState c = make_initial_data(cfg.grid, other);
  const ErrorRecord e = error_norms(c, a, *K);
  const VectorField dv = leray_project(c.v - a.v);
  CHECK(e.v_sigma == doctest::Approx(std::hypot(hminus1_norm(dv.x), hminus1_norm(dv.y))).epsilon(1e-12));
  CHECK(e.v_l2 == doctest::Approx(l2_norm(c.v - a.v)));
  CHECK(e.e_eps_diff == doctest::Approx(nonlocal_energy(c.c - a.c, *K)));
  for (double x : {e.v_sigma, e.c_dual, e.v_l2, e.c_l2, e.e_eps_diff}) CHECK(x >= 0.0);

  SimState late = a;
  late.t = 0.1;
  try {
    error_norms(late, a, *K);
    FAIL("expected TimeMismatch");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::TimeMismatch);
  }
  const SimState coarse = make_initial_data(Grid(32), InitialDataSpec{});
  try {
    error_norms(coarse, a, *K);
    FAIL("expected GridMismatch");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::GridMismatch);
  }
}

}
