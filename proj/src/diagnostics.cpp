#include "nlmh/diagnostics.hpp"

#include <cmath>
#include <string>

#include "nlmh/error.hpp"
#include "nlmh/spectral.hpp"

namespace nlmh {

namespace {

double grad_sq(const ScalarField& f) {
  const double n = spectral_norm(transform_forward(f), [](int k1, int k2) {
    return static_cast<double>(k1 * k1 + k2 * k2);
  });
  return n * n;
}

}  // namespace

DiagnosticsRecord record(const SimState& s, const SimConfig& cfg, const KernelSymbol* K) {
  if (!cfg.is_local() && K == nullptr)
    throw Error(ErrorCode::MissingKernel, "nonlocal diagnostics need a kernel symbol");
  DiagnosticsRecord r;
  r.t = s.t;
  r.mass = mean(s.c);
  const double vn = l2_norm(s.v);
  r.kinetic = 0.5 * vn * vn;
  r.interfacial = cfg.is_local() ? 0.5 * grad_sq(s.c) : nonlocal_energy(s.c, *K);
  r.bulk = potential_energy(s.c, cfg.potential);
  r.total = r.kinetic + r.interfacial + r.bulk;
  r.grad_mu_sq = grad_sq(chemical_potential(s.c, cfg, K));
  r.grad_v_sq = grad_sq(s.v.x) + grad_sq(s.v.y);
  r.max_abs_c = max_abs(s.c);
  return r;
}

double dissipation_residual(const DiagnosticsRecord& r0, const DiagnosticsRecord& r1) {
  const double dt = r1.t - r0.t;
  if (!(dt > 0.0))
    throw Error(ErrorCode::TimeMismatch, "dissipation residual needs increasing record times");
  return (r1.total - r0.total) / dt + 0.5 * (r0.grad_v_sq + r1.grad_v_sq) +
         0.5 * (r0.grad_mu_sq + r1.grad_mu_sq);
}

ErrorRecord error_norms(const SimState& s_eps, const SimState& s_loc, const KernelSymbol& K) {
  require_same_grid(s_eps.c.grid, s_loc.c.grid);
  require_same_grid(s_eps.c.grid, K.grid());
  if (std::abs(s_eps.t - s_loc.t) > 1e-12 * std::max(1.0, std::abs(s_loc.t)))
    throw Error(ErrorCode::TimeMismatch, "error norms compare states at t=" +
                                             std::to_string(s_eps.t) + " and t=" +
                                             std::to_string(s_loc.t));
  ErrorRecord e;
  e.t = s_loc.t;
  const VectorField dv = leray_project(s_eps.v - s_loc.v);
  const ScalarField dc = s_eps.c - s_loc.c;
  e.v_l2 = l2_norm(s_eps.v - s_loc.v);
  e.c_l2 = l2_norm(dc);
  e.e_eps_diff = nonlocal_energy(dc, K);
  e.v_sigma = stokes_dual_norm(dv);
  // Dropping k = 0 removes the mean exactly.
  e.c_dual = spectral_norm(transform_forward(dc), [](int k1, int k2) {
    const int kk = k1 * k1 + k2 * k2;
    return kk == 0 ? 0.0 : 1.0 / kk;
  });
  return e;
}

}  // namespace nlmh
