#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nlmh/grid.hpp"
#include "nlmh/kernel.hpp"
#include "nlmh/potential.hpp"

namespace nlmh {

enum class CouplingForm { MuGradC, MinusCGradMu };

/// Numerical parameters of one run. rho = nu = m = 1 throughout.
struct SimConfig {
  Grid grid{128};
  double epsilon = 0.2;  ///< 0 selects the local model
  double dt = 1e-3;
  double t_end = 0.5;
  double stabilization = 2.0;  ///< S; defaults to theta0
  PotentialParams potential;
  KernelProfile kernel_profile = KernelProfile::quartic_bump();
  CouplingForm coupling = CouplingForm::MinusCGradMu;
  int record_every = 10;

  bool is_local() const noexcept { return epsilon == 0.0; }
  /// Throws ValidationError (or the kernel's range errors) on bad values.
  void validate() const;
};

struct SimState {
  VectorField v;
  ScalarField c;
  double t = 0.0;

  explicit SimState(const Grid& g) : v(g), c(g) {}
  SimState(VectorField vel, ScalarField phase, double time)
      : v(std::move(vel)), c(std::move(phase)), t(time) {}
};

/// Kernel symbol for a nonlocal config, nullopt for the local model.
std::optional<KernelSymbol> make_kernel(const SimConfig& cfg);

/// Advective bound min(0.5 h / max|v|, 0.1).
double max_stable_dt(const SimState& s);

/// mu = L_eps c + f'(c), or -Laplace c + f'(c) when eps = 0.
ScalarField chemical_potential(const ScalarField& c, const SimConfig& cfg,
                               const KernelSymbol* K);

/// First-order stabilized semi-implicit pseudospectral scheme.
///
/// Cahn-Hilliard:
///   chat' = [chat - dt|k|^2 (f'(c)^ - S chat) - dt (v.grad c)^]
///           / (1 + dt|k|^2 (sigma(k) + S))
/// Navier-Stokes:
///   vhat' = P[vhat - dt ((v.grad)v)^ + dt force^] / (1 + dt|k|^2)
/// Quadratic products use the 2/3 rule; f'(c) is evaluated pointwise on the
/// full grid. The k = 0 mode of c is carried over unchanged.
///
/// Holds precomputed multipliers only, so one instance may be stepped from
/// several threads.
class Integrator {
 public:
  Integrator(const SimConfig& cfg, const KernelSymbol* K);

  SimState step(const SimState& s) const { return step(s, cfg_.dt); }
  /// Throws StateRejected if max|c'| >= 1 - safeguard_delta.
  SimState step(const SimState& s, double dt) const;

  const SimConfig& config() const noexcept { return cfg_; }

 private:
  SimConfig cfg_;
  std::vector<double> ksq_;
  std::vector<double> sigma_;
  std::vector<Complex> ik1_;
  std::vector<Complex> ik2_;
  std::vector<double> keep_;
};

SimState step(const SimState& s, const SimConfig& cfg, const KernelSymbol* K);

/// Called with the state and its step index: at the start, every
/// record_every steps, and at t_end.
using StateSink = std::function<void(const SimState&, std::size_t)>;

/// Advances to cfg.t_end; the last step is shortened if dt does not divide
/// the remaining time. Throws StepSizeViolation if dt exceeds
/// max_stable_dt at any step.
SimState run(const SimConfig& cfg, const SimState& init, const StateSink& sink,
             const KernelSymbol* K);
SimState run(const SimConfig& cfg, const SimState& init, const StateSink& sink = nullptr);

/// Number of steps run() takes from time t to cfg.t_end.
std::size_t steps_to_end(const SimConfig& cfg, double t);
/// Step size taken at time t: cfg.dt unless less than one step remains.
/// Remainders within 1e-9 dt of a full step still take exactly cfg.dt, so a
/// restarted run reproduces the uninterrupted one bit for bit.
double next_dt(const SimConfig& cfg, double t);

enum class InitRecipe { TaylorGreenMix, RandomSeparated };

struct InitialDataSpec {
  InitRecipe recipe = InitRecipe::TaylorGreenMix;
  std::uint64_t seed = 0;
  double mean_c = 0.1;
  double amplitude = 0.3;
  double velocity_amplitude = 1.0;
  double delta0 = 0.5;
};

/// Throws SeparationViolation unless |mean_c| + amplitude <= 1 - delta0.
SimState make_initial_data(const Grid& g, const InitialDataSpec& spec);

/// Uniform double in [0, 1) from a 64-bit generator, independent of the
/// standard library's distribution implementations.
double uniform01(std::uint64_t bits) noexcept;

}  // namespace nlmh
