#include "nlmh/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "nlmh/error.hpp"
#include "nlmh/io.hpp"
#include "nlmh/spectral.hpp"

namespace nlmh {

// ---------------------------------------------------------------- fits

RateFit fit_rate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw Error(ErrorCode::InputRejected, "fit_rate: xs and ys differ in length");
  if (xs.size() < 3) throw Error(ErrorCode::InputRejected, "fit_rate needs at least 3 points");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw Error(ErrorCode::InputRejected, "fit_rate: non-finite data");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw Error(ErrorCode::DegenerateInput, "fit_rate: all xs coincide");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

RateFit fit_rate_pooled(const std::vector<std::vector<double>>& xs,
                        const std::vector<std::vector<double>>& ys) {
  if (xs.size() != ys.size() || xs.empty())
    throw Error(ErrorCode::InputRejected, "pooled fit needs matching, non-empty series");
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  std::size_t points = 0;
  std::vector<double> mxs, mys;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    if (xs[s].size() != ys[s].size() || xs[s].size() < 2)
      throw Error(ErrorCode::InputRejected, "each pooled series needs >= 2 matching points");
    const double n = static_cast<double>(xs[s].size());
    const double mx = std::accumulate(xs[s].begin(), xs[s].end(), 0.0) / n;
    const double my = std::accumulate(ys[s].begin(), ys[s].end(), 0.0) / n;
    for (std::size_t i = 0; i < xs[s].size(); ++i) {
      if (!std::isfinite(xs[s][i]) || !std::isfinite(ys[s][i]))
        throw Error(ErrorCode::InputRejected, "pooled fit: non-finite data");
      sxx += (xs[s][i] - mx) * (xs[s][i] - mx);
      sxy += (xs[s][i] - mx) * (ys[s][i] - my);
      syy += (ys[s][i] - my) * (ys[s][i] - my);
    }
    points += xs[s].size();
    mxs.push_back(mx);
    mys.push_back(my);
  }
  if (points < 3) throw Error(ErrorCode::InputRejected, "pooled fit needs at least 3 points");
  if (sxx <= 0.0) throw Error(ErrorCode::DegenerateInput, "pooled fit: all xs coincide");
  RateFit f;
  f.slope = sxy / sxx;
  double icpt = 0.0;
  for (std::size_t s = 0; s < mxs.size(); ++s) icpt += mys[s] - f.slope * mxs[s];
  f.intercept = icpt / static_cast<double>(mxs.size());
  f.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

// ---------------------------------------------------------------- operator

std::vector<ScalarField> default_operator_fields(const Grid& g) {
  std::vector<ScalarField> fields;
  fields.push_back(sample(g, [](double x, double y) { return std::cos(x) * std::cos(y); }));
  fields.push_back(sample(g, [](double x, double y) {
    return std::sin(2.0 * x) + 0.5 * std::cos(y) + 0.25 * std::cos(x + 2.0 * y);
  }));
  fields.push_back(random_zero_mean_field(g, 7));
  return fields;
}

OperatorRateReport operator_rate_test(const Grid& g, const KernelProfile& profile,
                                      std::span<const double> eps_list,
                                      std::span<const ScalarField> fields) {
  if (fields.empty()) throw Error(ErrorCode::InputRejected, "operator test needs test fields");
  OperatorRateReport report;
  std::vector<KernelSymbol> kernels;
  for (double eps : eps_list) kernels.push_back(build_kernel(g, eps, profile));

  std::vector<std::vector<double>> xs(fields.size()), ys(fields.size());
  for (std::size_t f = 0; f < fields.size(); ++f) {
    require_same_grid(g, fields[f].grid);
    const double h3 = sobolev_norm(fields[f], 3);
    const double scale = l2_norm(fields[f]);
    for (std::size_t e = 0; e < kernels.size(); ++e) {
      const double d = operator_defect(fields[f], kernels[e]);
      if (!(d > 1e-12 * scale))
        throw Error(ErrorCode::InputRejected,
                    "test field " + std::to_string(f) + " has no operator defect (constant?)");
      report.rows.push_back({f, eps_list[e], d, h3});
      xs[f].push_back(std::log(eps_list[e]));
      ys[f].push_back(std::log(d / h3));
    }
    report.per_field.push_back(fit_rate(xs[f], ys[f]));
  }
  report.fit = fit_rate_pooled(xs, ys);
  return report;
}

// ---------------------------------------------------------------- sweep

namespace {

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  if (count <= 1 || std::thread::hardware_concurrency() <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < count; ++i)
    jobs.push_back(std::async(std::launch::async, [&fn, i] { fn(i); }));
  for (auto& j : jobs) j.get();
}

void update_summary(RunSummary& s, const DiagnosticsRecord& r) {
  if (!s.diagnostics.empty()) {
    const DiagnosticsRecord& prev = s.diagnostics.back();
    if (r.total > prev.total + 1e-6 * std::abs(prev.total)) ++s.energy_increases;
    s.max_mass_drift = std::max(s.max_mass_drift, std::abs(r.mass - s.diagnostics.front().mass));
  }
  s.min_separation = std::min(s.min_separation, 1.0 - r.max_abs_c);
  s.diagnostics.push_back(r);
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) sum += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

}  // namespace

SweepReport solution_rate_sweep(const SweepPlan& plan) {
  const std::vector<double>& eps = plan.eps_list;
  if (eps.size() < 3)
    throw Error(ErrorCode::InputRejected, "sweep needs at least 3 eps values to fit a rate");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1]))
      throw Error(ErrorCode::InputRejected, "sweep eps_list must be strictly decreasing");

  const SimConfig& base = plan.base_cfg;
  const Grid& g = base.grid;
  const std::size_t m = eps.size();

  SimConfig ref_cfg = base;
  ref_cfg.epsilon = 0.0;
  std::vector<SimConfig> cfgs(m, base);
  std::vector<KernelSymbol> kernels;
  for (std::size_t i = 0; i < m; ++i) {
    cfgs[i].epsilon = plan.local_replica ? 0.0 : eps[i];
    kernels.push_back(build_kernel(g, eps[i], base.kernel_profile));
  }

  std::vector<Integrator> integrators;
  integrators.emplace_back(ref_cfg, nullptr);
  for (std::size_t i = 0; i < m; ++i)
    integrators.emplace_back(cfgs[i], plan.local_replica ? nullptr : &kernels[i]);
  auto kernel_of = [&](std::size_t run) -> const KernelSymbol* {
    return run == 0 || plan.local_replica ? nullptr : &kernels[run - 1];
  };
  auto cfg_of = [&](std::size_t run) -> const SimConfig& {
    return run == 0 ? ref_cfg : cfgs[run - 1];
  };

  const SimState init = make_initial_data(g, plan.init);
  std::vector<SimState> states(m + 1, init);

  SweepReport report;
  report.reference.epsilon = 0.0;
  report.runs.resize(m);
  report.errors.resize(m);
  for (std::size_t i = 0; i < m; ++i) report.runs[i].epsilon = eps[i];
  auto summary = [&](std::size_t run) -> RunSummary& {
    return run == 0 ? report.reference : report.runs[run - 1];
  };
  for (std::size_t r = 0; r <= m; ++r) summary(r).init_hash = state_hash(states[r]);
  for (std::size_t r = 1; r <= m; ++r)
    if (summary(r).init_hash != summary(0).init_hash)
      throw Error(ErrorCode::InputRejected, "sweep runs do not share initial data");

  std::vector<DiagnosticsRecord> diag(m + 1);
  std::vector<ErrorRecord> errs(m);
  auto take_diagnostics = [&] {
    parallel_for(m + 1, [&](std::size_t r) { diag[r] = record(states[r], cfg_of(r), kernel_of(r)); });
    for (std::size_t r = 0; r <= m; ++r) update_summary(summary(r), diag[r]);
  };
  auto take_errors = [&] {
    parallel_for(m, [&](std::size_t i) { errs[i] = error_norms(states[i + 1], states[0], kernels[i]); });
    for (std::size_t i = 0; i < m; ++i) report.errors[i].push_back(errs[i]);
  };

  take_diagnostics();
  take_errors();

  const std::size_t steps = steps_to_end(base, 0.0);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double dt = next_dt(base, states[0].t);
    std::vector<std::string> failures(m + 1);
    parallel_for(m + 1, [&](std::size_t r) {
      try {
        if (dt > max_stable_dt(states[r]))
          throw Error(ErrorCode::StepSizeViolation, "dt exceeds the advective bound");
        states[r] = integrators[r].step(states[r], dt);
      } catch (const Error& e) {
        failures[r] = e.what();
      }
    });
    for (std::size_t r = 0; r <= m; ++r)
      if (!failures[r].empty())
        throw Error(ErrorCode::StateRejected,
                    (r == 0 ? std::string("local reference") : "eps=" + format_real(eps[r - 1])) +
                        ": " + failures[r]);
    const bool last = n == steps;
    if (last || n % static_cast<std::size_t>(plan.diag_every) == 0) take_diagnostics();
    if (last || n % static_cast<std::size_t>(base.record_every) == 0) take_errors();
  }

  report.aggregates.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& rec = report.errors[i];
    std::vector<double> t, v2, c2, ee;
    double sup_v = 0.0, sup_c = 0.0;
    for (const ErrorRecord& e : rec) {
      t.push_back(e.t);
      v2.push_back(e.v_l2 * e.v_l2);
      c2.push_back(e.c_l2 * e.c_l2);
      ee.push_back(e.e_eps_diff);
      sup_v = std::max(sup_v, e.v_sigma);
      sup_c = std::max(sup_c, e.c_dual);
    }
    report.aggregates[i] = {sup_v, sup_c, std::sqrt(trapezoid(t, v2)), std::sqrt(trapezoid(t, c2)),
                            std::sqrt(trapezoid(t, ee))};
  }

  bool fittable = true;
  for (const auto& a : report.aggregates)
    for (double v : a) fittable = fittable && v > 0.0;
  if (fittable) {
    std::vector<double> xs;
    for (double e : eps) xs.push_back(std::log(e));
    for (std::size_t j = 0; j < kNormCount; ++j) {
      std::vector<double> ys;
      for (std::size_t i = 0; i < m; ++i) ys.push_back(std::log(report.aggregates[i][j]));
      report.fits[j] = fit_rate(xs, ys);
    }
  }
  return report;
}

// ---------------------------------------------------------------- stability

namespace {

double sigma_dual_sq(const VectorField& dv) {
  const auto w = [](int k1, int k2) {
    const int kk = k1 * k1 + k2 * k2;
    return kk == 0 ? 0.0 : 1.0 / kk;
  };
  const VectorField p = leray_project(dv);
  const double a = spectral_norm(transform_forward(p.x), w);
  const double b = spectral_norm(transform_forward(p.y), w);
  return a * a + b * b;
}

double star_sq(const ScalarField& dc) {
  const double n = spectral_norm(transform_forward(dc), [](int k1, int k2) {
    const int kk = k1 * k1 + k2 * k2;
    return kk == 0 ? 0.0 : 1.0 / kk;
  });
  return n * n;
}

double distance_sq(const SimState& a, const SimState& b) {
  return sigma_dual_sq(a.v - b.v) + star_sq(a.c - b.c);
}

SimState perturbed(const SimState& base, const std::pair<VectorField, ScalarField>& unit, double d) {
  SimState s = base;
  for (std::size_t i = 0; i < s.c.values.size(); ++i) {
    s.c.values[i] += d * unit.second.values[i];
    s.v.x.values[i] += d * unit.first.x.values[i];
    s.v.y.values[i] += d * unit.first.y.values[i];
  }
  return s;
}

// Value equality, so a signed zero produced by adding 0 * x does not count.
bool bit_identical(const SimState& a, const SimState& b) {
  return a.t == b.t && a.c.values == b.c.values && a.v.x.values == b.v.x.values &&
         a.v.y.values == b.v.y.values;
}

}  // namespace

std::pair<VectorField, ScalarField> unit_perturbation(const Grid& g, std::uint64_t seed) {
  ScalarField dc = random_zero_mean_field(g, seed);
  // Stream function from an independent draw; v = (d2 psi, -d1 psi).
  const ScalarField psi = random_zero_mean_field(g, seed ^ 0x9e3779b97f4a7c15ULL);
  const VectorField grad = gradient(psi);
  VectorField dv(grad.y, -1.0 * grad.x);
  dv = leray_project(dv);
  const double total = std::sqrt(sigma_dual_sq(dv)) + std::sqrt(star_sq(dc));
  dc *= 1.0 / total;
  dv.x *= 1.0 / total;
  dv.y *= 1.0 / total;
  return {std::move(dv), std::move(dc)};
}

StabilityReport gronwall_stability_test(const SimConfig& cfg, const InitialDataSpec& init,
                                        std::uint64_t seed, double d0) {
  if (!(d0 > 0.0)) throw Error(ErrorCode::InputRejected, "perturbation size must be > 0");
  const std::optional<KernelSymbol> K = make_kernel(cfg);
  const Integrator integrator(cfg, K ? &*K : nullptr);
  const SimState base = make_initial_data(cfg.grid, init);
  const auto unit = unit_perturbation(cfg.grid, seed);

  // base, +d0, +d0/2, +0
  std::vector<SimState> states = {base, perturbed(base, unit, d0), perturbed(base, unit, 0.5 * d0),
                                  perturbed(base, unit, 0.0)};
  StabilityReport rep;
  auto sample_distance = [&] {
    rep.times.push_back(states[0].t);
    rep.distance_sq.push_back(distance_sq(states[1], states[0]));
    rep.distance_sq_half.push_back(distance_sq(states[2], states[0]));
  };
  sample_distance();
  bool identical = bit_identical(states[0], states[3]);

  const std::size_t steps = steps_to_end(cfg, 0.0);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double dt = next_dt(cfg, states[0].t);
    parallel_for(states.size(), [&](std::size_t r) { states[r] = integrator.step(states[r], dt); });
    identical = identical && bit_identical(states[0], states[3]);
    if (n == steps || n % static_cast<std::size_t>(cfg.record_every) == 0) sample_distance();
  }

  rep.zero_perturbation_identical = identical;
  rep.lambda = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rep.times.size(); ++i)
    rep.lambda = std::max(rep.lambda, std::log(rep.distance_sq[i] / (d0 * d0)) / rep.times[i]);
  rep.halving_ratio = std::sqrt(rep.distance_sq.back() / rep.distance_sq_half.back());
  return rep;
}

// ---------------------------------------------------------------- poincare

ScalarField random_zero_mean_field(const Grid& g, std::uint64_t seed, double decay) {
  std::mt19937_64 rng(seed);
  constexpr int kBand = 8;
  struct Term {
    int k1, k2;
    double a, b;
  };
  std::vector<Term> terms;
  for (int k1 = 0; k1 <= kBand; ++k1)
    for (int k2 = -kBand; k2 <= kBand; ++k2) {
      if ((k1 == 0 && k2 <= 0) || k1 * k1 + k2 * k2 > kBand * kBand) continue;
      const double w = std::pow(static_cast<double>(k1 * k1 + k2 * k2), -0.5 * decay);
      const double a = w * (2.0 * uniform01(rng()) - 1.0);
      const double b = w * (2.0 * uniform01(rng()) - 1.0);
      terms.push_back({k1, k2, a, b});
    }
  ScalarField u = sample(g, [&](double x, double y) {
    double s = 0.0;
    for (const Term& t : terms) {
      const double ph = t.k1 * x + t.k2 * y;
      s += t.a * std::cos(ph) + t.b * std::sin(ph);
    }
    return s;
  });
  const double m = mean(u);
  for (double& v : u.values) v -= m;
  return u;
}

double required_c_gamma(const ScalarField& u, const KernelSymbol& K, double gamma) {
  const double l2 = l2_norm(u);
  if (l2 == 0.0) return 0.0;
  const double dual = hminus1_norm(u);
  const double need = l2 * l2 - gamma * nonlocal_energy(u, K);
  return std::max(0.0, need / (dual * dual));
}

PoincareReport poincare_sampling_test(const Grid& g, const KernelProfile& profile,
                                      std::span<const double> eps_list, int n_samples,
                                      double gamma, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InputRejected, "gamma must be > 0");
  if (n_samples < 1) throw Error(ErrorCode::InputRejected, "need at least one sample");
  PoincareReport rep;
  rep.gamma = gamma;
  std::vector<ScalarField> samples;
  for (int s = 0; s < n_samples; ++s)
    samples.push_back(
        random_zero_mean_field(g, seed + static_cast<std::uint64_t>(s), kPoincareDecay));
  for (double eps : eps_list) {
    const KernelSymbol K = build_kernel(g, eps, profile);
    double c = 0.0;
    for (const ScalarField& u : samples) c = std::max(c, required_c_gamma(u, K, gamma));
    rep.rows.push_back({eps, c});
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : rep.rows) {
    lo = std::min(lo, r.c_gamma);
    hi = std::max(hi, r.c_gamma);
  }
  rep.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

std::uint64_t state_hash(const SimState& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : encode_snapshot(s)) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace nlmh
