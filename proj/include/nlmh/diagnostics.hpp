#pragma once

#include "nlmh/dynamics.hpp"

namespace nlmh {

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;         ///< mean(c)
  double kinetic = 0.0;      ///< 1/2 ||v||^2
  double interfacial = 0.0;  ///< E_eps(c), or 1/2 ||grad c||^2 when local
  double bulk = 0.0;         ///< int f(c)
  double total = 0.0;
  double grad_mu_sq = 0.0;
  double grad_v_sq = 0.0;
  double max_abs_c = 0.0;
};

/// Norms of the nonlocal-minus-local difference at one time.
struct ErrorRecord {
  double t = 0.0;
  double v_sigma = 0.0;     ///< ||v_eps - v||_sigma
  double c_dual = 0.0;      ///< ||(c_eps - c) - mean||_*
  double v_l2 = 0.0;
  double c_l2 = 0.0;
  double e_eps_diff = 0.0;  ///< E_eps(c_eps - c)
};

DiagnosticsRecord record(const SimState& s, const SimConfig& cfg, const KernelSymbol* K);

/// Trapezoidal defect of dE/dt = -||grad v||^2 - ||grad mu||^2 between two
/// consecutive records.
double dissipation_residual(const DiagnosticsRecord& r0, const DiagnosticsRecord& r1);

ErrorRecord error_norms(const SimState& s_eps, const SimState& s_loc, const KernelSymbol& K);

}  // namespace nlmh
