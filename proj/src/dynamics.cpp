#include "nlmh/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nlmh/error.hpp"
#include "nlmh/spectral.hpp"

namespace nlmh {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCode::ValidationError, "time.dt must be > 0");
  if (!(t_end >= 0.0)) throw Error(ErrorCode::ValidationError, "time.t_end must be >= 0");
  if (!(stabilization >= 0.0))
    throw Error(ErrorCode::ValidationError, "time.stabilization must be >= 0");
  if (record_every < 1) throw Error(ErrorCode::ValidationError, "time.record_every must be >= 1");
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::EpsilonOutOfRange, "kernel.epsilon must be >= 0");
  potential.validate();
  kernel_profile.validate();
  if (!is_local()) {
    if (!(epsilon < std::numbers::pi))
      throw Error(ErrorCode::EpsilonOutOfRange,
                  "kernel.epsilon=" + std::to_string(epsilon) + " violates the support condition eps < pi");
    if (epsilon < kMinKernelCells * grid.spacing())
      throw Error(ErrorCode::UnderResolvedKernel,
                  "kernel.epsilon=" + std::to_string(epsilon) + " is below 4h=" +
                      std::to_string(kMinKernelCells * grid.spacing()));
  }
}

std::optional<KernelSymbol> make_kernel(const SimConfig& cfg) {
  if (cfg.is_local()) return std::nullopt;
  return build_kernel(cfg.grid, cfg.epsilon, cfg.kernel_profile);
}

double max_stable_dt(const SimState& s) {
  const double vmax = std::max(max_abs(s.v.x), max_abs(s.v.y));
  const double cfl = vmax > 0.0 ? 0.5 * s.c.grid.spacing() / vmax : 0.1;
  return std::min(cfl, 0.1);
}

ScalarField chemical_potential(const ScalarField& c, const SimConfig& cfg, const KernelSymbol* K) {
  if (!cfg.is_local() && K == nullptr)
    throw Error(ErrorCode::MissingKernel, "nonlocal chemical potential needs a kernel symbol");
  ScalarField mu = cfg.is_local() ? -1.0 * laplacian(c) : apply_nonlocal(c, *K);
  mu += f_prime(c, cfg.potential);
  return mu;
}

Integrator::Integrator(const SimConfig& cfg, const KernelSymbol* K) : cfg_(cfg) {
  cfg_.validate();
  if (!cfg_.is_local()) {
    if (K == nullptr)
      throw Error(ErrorCode::MissingKernel, "nonlocal integrator needs a kernel symbol");
    require_same_grid(cfg_.grid, K->grid());
  }
  const Grid& g = cfg_.grid;
  const std::size_t m = g.spectral_size();
  ksq_.resize(m);
  sigma_.resize(m);
  ik1_.resize(m);
  ik2_.resize(m);
  keep_.resize(m);
  for_each_mode(g, [&](int a, int b, int k1, int k2) {
    const std::size_t i = static_cast<std::size_t>(a) * g.spectral_cols() + b;
    ksq_[i] = static_cast<double>(k1 * k1 + k2 * k2);
    sigma_[i] = cfg_.is_local() ? ksq_[i] : K->sigma_at(a, b);
    // Nyquist modes are removed by the 2/3 rule anyway.
    ik1_[i] = Complex(0.0, k1);
    ik2_[i] = Complex(0.0, k2);
    keep_[i] = dealias_keep(g, a, b) ? 1.0 : 0.0;
  });
}

SimState Integrator::step(const SimState& s, double dt) const {
  const Grid& g = cfg_.grid;
  require_same_grid(g, s.c.grid);
  const std::size_t m = g.spectral_size();
  const double S = cfg_.stabilization;

  const SpectralField C = transform_forward(s.c);
  const SpectralField Vx = transform_forward(s.v.x);
  const SpectralField Vy = transform_forward(s.v.y);

  // Dealiased physical factor of a spectral field times a multiplier.
  SpectralField work(g);
  auto factor = [&](const SpectralField& X, const std::vector<Complex>* mult) {
    for (std::size_t i = 0; i < m; ++i)
      work.coeffs[i] = keep_[i] * (mult ? (*mult)[i] * X.coeffs[i] : X.coeffs[i]);
    return transform_backward(work);
  };
  auto product = [](const ScalarField& a, const ScalarField& b, const ScalarField& c,
                    const ScalarField& d) {
    ScalarField r(a.grid);
    for (std::size_t i = 0; i < r.values.size(); ++i)
      r.values[i] = a.values[i] * b.values[i] + c.values[i] * d.values[i];
    return r;
  };

  const ScalarField cx = factor(C, &ik1_);
  const ScalarField cy = factor(C, &ik2_);
  const ScalarField vx = factor(Vx, nullptr);
  const ScalarField vy = factor(Vy, nullptr);

  SpectralField A = transform_forward(product(vx, cx, vy, cy));
  for (std::size_t i = 0; i < m; ++i) A.coeffs[i] *= keep_[i];
  // mean(v.grad c) = -mean(c div v) = 0
  A.coeffs[0] = 0.0;

  const SpectralField P = transform_forward(f_prime(s.c, cfg_.potential));
  SpectralField Mu(g);
  for (std::size_t i = 0; i < m; ++i) Mu.coeffs[i] = sigma_[i] * C.coeffs[i] + P.coeffs[i];

  ScalarField fx(g), fy(g);
  if (cfg_.coupling == CouplingForm::MinusCGradMu) {
    const ScalarField cd = factor(C, nullptr);
    const ScalarField mx = factor(Mu, &ik1_);
    const ScalarField my = factor(Mu, &ik2_);
    for (std::size_t i = 0; i < fx.values.size(); ++i) {
      fx.values[i] = -cd.values[i] * mx.values[i];
      fy.values[i] = -cd.values[i] * my.values[i];
    }
  } else {
    const ScalarField mud = factor(Mu, nullptr);
    for (std::size_t i = 0; i < fx.values.size(); ++i) {
      fx.values[i] = mud.values[i] * cx.values[i];
      fy.values[i] = mud.values[i] * cy.values[i];
    }
  }

  const SpectralField Nx =
      transform_forward(product(vx, factor(Vx, &ik1_), vy, factor(Vx, &ik2_)));
  const SpectralField Ny =
      transform_forward(product(vx, factor(Vy, &ik1_), vy, factor(Vy, &ik2_)));
  const SpectralField Fx = transform_forward(fx);
  const SpectralField Fy = transform_forward(fy);

  SpectralField Cn(g), Rx(g), Ry(g);
  for (std::size_t i = 0; i < m; ++i) {
    const double k2 = ksq_[i];
    Cn.coeffs[i] = (C.coeffs[i] - dt * k2 * (P.coeffs[i] - S * C.coeffs[i]) - dt * A.coeffs[i]) /
                   (1.0 + dt * k2 * (sigma_[i] + S));
    Rx.coeffs[i] = Vx.coeffs[i] + dt * keep_[i] * (Fx.coeffs[i] - Nx.coeffs[i]);
    Ry.coeffs[i] = Vy.coeffs[i] + dt * keep_[i] * (Fy.coeffs[i] - Ny.coeffs[i]);
  }
  Cn.coeffs[0] = C.coeffs[0];

  for_each_mode(g, [&](int a, int b, int k1, int k2) {
    const std::size_t i = static_cast<std::size_t>(a) * g.spectral_cols() + b;
    if (i == 0 || a == g.n() / 2 || b == g.n() / 2) {
      Rx.coeffs[i] = 0.0;
      Ry.coeffs[i] = 0.0;
      return;
    }
    const double kk = ksq_[i];
    const Complex kdotr = static_cast<double>(k1) * Rx.coeffs[i] + static_cast<double>(k2) * Ry.coeffs[i];
    const double damp = 1.0 / (1.0 + dt * kk);
    Rx.coeffs[i] = (Rx.coeffs[i] - static_cast<double>(k1) * kdotr / kk) * damp;
    Ry.coeffs[i] = (Ry.coeffs[i] - static_cast<double>(k2) * kdotr / kk) * damp;
  });

  SimState next(VectorField(transform_backward(Rx), transform_backward(Ry)), transform_backward(Cn),
                s.t + dt);
  next.v.divergence_free = true;

  const double limit = 1.0 - cfg_.potential.safeguard_delta;
  const double peak = max_abs(next.c);
  if (!(peak < limit))
    throw Error(ErrorCode::StateRejected, "max|c|=" + std::to_string(peak) + " at t=" +
                                              std::to_string(next.t) + " breaks separation");
  return next;
}

SimState step(const SimState& s, const SimConfig& cfg, const KernelSymbol* K) {
  return Integrator(cfg, K).step(s);
}

std::size_t steps_to_end(const SimConfig& cfg, double t) {
  const double remaining = cfg.t_end - t;
  if (remaining <= 1e-9 * cfg.dt) return 0;
  return static_cast<std::size_t>(std::ceil(remaining / cfg.dt - 1e-9));
}

double next_dt(const SimConfig& cfg, double t) {
  const double remaining = cfg.t_end - t;
  return remaining < cfg.dt * (1.0 - 1e-9) ? remaining : cfg.dt;
}

SimState run(const SimConfig& cfg, const SimState& init, const StateSink& sink,
             const KernelSymbol* K) {
  const Integrator integrator(cfg, K);
  const std::size_t steps = steps_to_end(cfg, init.t);
  SimState state = init;
  if (sink) sink(state, 0);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double dt = next_dt(cfg, state.t);
    if (dt > max_stable_dt(state))
      throw Error(ErrorCode::StepSizeViolation,
                  "dt=" + std::to_string(dt) + " exceeds the advective bound " +
                      std::to_string(max_stable_dt(state)));
    state = integrator.step(state, dt);
    if (sink && (n % static_cast<std::size_t>(cfg.record_every) == 0 || n == steps))
      sink(state, n);
  }
  return state;
}

SimState run(const SimConfig& cfg, const SimState& init, const StateSink& sink) {
  const std::optional<KernelSymbol> K = make_kernel(cfg);
  return run(cfg, init, sink, K ? &*K : nullptr);
}

double uniform01(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

namespace {

// Upper half-plane wavevectors with 0 < |k| <= kmax.
std::vector<std::pair<int, int>> band(int kmax) {
  std::vector<std::pair<int, int>> modes;
  for (int k1 = 0; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      if (k1 * k1 + k2 * k2 <= kmax * kmax) modes.emplace_back(k1, k2);
    }
  return modes;
}

struct Mode {
  int k1, k2;
  double a, b;
};

std::vector<Mode> random_modes(std::mt19937_64& rng, int kmax) {
  std::vector<Mode> out;
  for (auto [k1, k2] : band(kmax)) {
    const double a = 2.0 * uniform01(rng()) - 1.0;
    const double b = 2.0 * uniform01(rng()) - 1.0;
    out.push_back({k1, k2, a, b});
  }
  return out;
}

}  // namespace

SimState make_initial_data(const Grid& g, const InitialDataSpec& spec) {
  if (!(std::abs(spec.mean_c) + spec.amplitude <= 1.0 - spec.delta0) || spec.amplitude < 0.0 ||
      !(spec.delta0 > 0.0))
    throw Error(ErrorCode::SeparationViolation,
                "initial data needs |mean_c| + amplitude <= 1 - delta0");

  if (spec.recipe == InitRecipe::TaylorGreenMix) {
    const double av = spec.velocity_amplitude;
    VectorField v(sample(g, [av](double x, double y) { return av * std::sin(x) * std::cos(y); }),
                  sample(g, [av](double x, double y) { return -av * std::cos(x) * std::sin(y); }));
    v.divergence_free = true;
    ScalarField c = sample(g, [&](double x, double y) {
      return spec.mean_c + spec.amplitude * std::cos(x) * std::cos(y);
    });
    return SimState(std::move(v), std::move(c), 0.0);
  }

  std::mt19937_64 rng(spec.seed);
  constexpr int kBand = 4;
  const std::vector<Mode> cm = random_modes(rng, kBand);
  const std::vector<Mode> sm = random_modes(rng, kBand);

  ScalarField shape = sample(g, [&](double x, double y) {
    double s = 0.0;
    for (const Mode& md : cm) {
      const double ph = md.k1 * x + md.k2 * y;
      s += md.a * std::cos(ph) + md.b * std::sin(ph);
    }
    return s;
  });
  const double peak = max_abs(shape);
  ScalarField c(g, spec.mean_c);
  if (peak > 0.0)
    for (std::size_t i = 0; i < c.values.size(); ++i)
      c.values[i] += spec.amplitude * shape.values[i] / peak;

  // v = (d psi/dx2, -d psi/dx1) for a band-limited stream function psi.
  VectorField v(sample(g, [&](double x, double y) {
                  double s = 0.0;
                  for (const Mode& md : sm) {
                    const double ph = md.k1 * x + md.k2 * y;
                    s += md.k2 * (-md.a * std::sin(ph) + md.b * std::cos(ph));
                  }
                  return s;
                }),
                sample(g, [&](double x, double y) {
                  double s = 0.0;
                  for (const Mode& md : sm) {
                    const double ph = md.k1 * x + md.k2 * y;
                    s -= md.k1 * (-md.a * std::sin(ph) + md.b * std::cos(ph));
                  }
                  return s;
                }));
  const double vpeak = std::max(max_abs(v.x), max_abs(v.y));
  if (vpeak > 0.0) {
    v.x *= spec.velocity_amplitude / vpeak;
    v.y *= spec.velocity_amplitude / vpeak;
  }
  v.divergence_free = true;
  return SimState(std::move(v), std::move(c), 0.0);
}

}  // namespace nlmh
