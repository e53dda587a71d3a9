#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlmh/diagnostics.hpp"
#include "nlmh/dynamics.hpp"

namespace nlmh {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of ys against xs (both typically logarithms).
/// Throws InputRejected for fewer than 3 points or non-finite data and
/// DegenerateInput when all xs coincide.
RateFit fit_rate(std::span<const double> xs, std::span<const double> ys);

/// Common-slope fit over several series with one intercept each. The
/// returned intercept is the mean of the per-series intercepts and r^2 is
/// computed on the within-series (demeaned) variation.
RateFit fit_rate_pooled(const std::vector<std::vector<double>>& xs,
                        const std::vector<std::vector<double>>& ys);

// ---------------------------------------------------------------- operator

struct OperatorRateRow {
  std::size_t field = 0;
  double epsilon = 0.0;
  double defect = 0.0;
  double h3_norm = 0.0;
};

struct OperatorRateReport {
  RateFit fit;
  std::vector<RateFit> per_field;
  std::vector<OperatorRateRow> rows;
};

/// Fits log ||L_eps c + Laplace c|| against log eps, pooled over the test
/// fields. A field with vanishing defect (e.g. a constant) is InputRejected.
OperatorRateReport operator_rate_test(const Grid& g, const KernelProfile& profile,
                                      std::span<const double> eps_list,
                                      std::span<const ScalarField> fields);

/// Three smooth band-limited fields used by the default operator test.
std::vector<ScalarField> default_operator_fields(const Grid& g);

// ---------------------------------------------------------------- sweep

inline constexpr std::size_t kNormCount = 5;
inline constexpr const char* kNormNames[kNormCount] = {"v_sigma", "c_dual", "v_l2", "c_l2",
                                                       "e_eps_diff"};

struct SweepPlan {
  std::vector<double> eps_list;  ///< decreasing, each admissible on the grid
  SimConfig base_cfg;            ///< epsilon is overridden per run
  InitialDataSpec init;
  /// Replace every nonlocal run by a second local run (determinism check).
  bool local_replica = false;
  /// Diagnostics are recorded every `diag_every` steps; errors every
  /// base_cfg.record_every steps.
  int diag_every = 1;
};

struct RunSummary {
  double epsilon = 0.0;  ///< 0 for the local reference
  std::uint64_t init_hash = 0;
  std::vector<DiagnosticsRecord> diagnostics;
  std::size_t energy_increases = 0;  ///< steps with E' > E + 1e-6 |E|
  double max_mass_drift = 0.0;
  double min_separation = 1.0;  ///< min over time of 1 - max|c|
};

struct SweepReport {
  RunSummary reference;
  std::vector<RunSummary> runs;  ///< one per eps, same order as eps_list
  std::vector<std::vector<ErrorRecord>> errors;
  /// aggregates[i][j]: norm j for eps i, in kNormNames order:
  ///   sup_t v_sigma, sup_t c_dual, (int v_l2^2 dt)^(1/2),
  ///   (int c_l2^2 dt)^(1/2), (int E_eps(c_eps - c) dt)^(1/2).
  std::vector<std::array<double, kNormCount>> aggregates;
  std::array<RateFit, kNormCount> fits;
};

/// Runs the local reference and every eps in lockstep from identical
/// initial data. A rejected step is rethrown naming the offending eps.
SweepReport solution_rate_sweep(const SweepPlan& plan);

// ---------------------------------------------------------------- stability

struct StabilityReport {
  std::vector<double> times;
  std::vector<double> distance_sq;       ///< ||v~||_sigma^2 + ||c~||_*^2 for d0
  std::vector<double> distance_sq_half;  ///< same for d0/2
  double lambda = 0.0;                   ///< minimal rate with D <= d0^2 e^{lambda t}
  double halving_ratio = 0.0;            ///< final sqrt(D(d0)) / sqrt(D(d0/2))
  bool zero_perturbation_identical = false;
};

/// Mean-zero, divergence-free perturbation (dv, dc) with
/// ||dv||_sigma + ||dc||_* = 1, drawn from `seed`.
std::pair<VectorField, ScalarField> unit_perturbation(const Grid& g, std::uint64_t seed);

StabilityReport gronwall_stability_test(const SimConfig& cfg, const InitialDataSpec& init,
                                        std::uint64_t seed, double d0);

// ---------------------------------------------------------------- poincare

struct PoincareRow {
  double epsilon = 0.0;
  double c_gamma = 0.0;  ///< smallest C making the inequality hold on all samples
};

struct PoincareReport {
  double gamma = 0.0;
  std::vector<PoincareRow> rows;
  double spread = 0.0;  ///< max/min of c_gamma over eps, inf if any is 0
};

/// C needed for ||u||^2 <= gamma E_eps(u) + C ||u||_*^2 on one field.
double required_c_gamma(const ScalarField& u, const KernelSymbol& K, double gamma);

/// Random zero-mean band-limited fields (|k| <= 8). Mode amplitudes are
/// uniform in [-1, 1] times |k|^-decay.
ScalarField random_zero_mean_field(const Grid& g, std::uint64_t seed, double decay = 0.0);

/// Spectral decay of the Poincare samples. With a flat spectrum the high
/// modes dominate and every sample satisfies the inequality with C = 0.
inline constexpr double kPoincareDecay = 2.0;

PoincareReport poincare_sampling_test(const Grid& g, const KernelProfile& profile,
                                      std::span<const double> eps_list, int n_samples,
                                      double gamma, std::uint64_t seed);

/// FNV-1a over the snapshot encoding of a state.
std::uint64_t state_hash(const SimState& s);

}  // namespace nlmh
