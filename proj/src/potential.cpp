#include "nlmh/potential.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlmh/error.hpp"

namespace nlmh {

void PotentialParams::validate() const {
  if (!(theta > 0.0) || !(theta < theta0))
    throw Error(ErrorCode::ValidationError, "potential constants need 0 < theta < theta0");
  if (!(safeguard_delta > 0.0) || !(safeguard_delta < 0.5))
    throw Error(ErrorCode::ValidationError, "safeguard_delta must lie in (0, 0.5)");
}

FloryHuggins::FloryHuggins(const PotentialParams& p) : params_(p) { params_.validate(); }

double FloryHuggins::F_exact(double s) const {
  return 0.5 * params_.theta * ((1.0 + s) * std::log1p(s) + (1.0 - s) * std::log1p(-s));
}

double FloryHuggins::F_prime_exact(double s) const { return params_.theta * std::atanh(s); }

double FloryHuggins::F_second_exact(double s) const {
  return params_.theta / ((1.0 - s) * (1.0 + s));
}

bool FloryHuggins::in_extension(double s, double& s0) const {
  const double a = std::abs(s);
  if (params_.extension == Extension::Reject) {
    if (a >= 1.0 - kHardDomainFloor || !std::isfinite(s))
      throw Error(ErrorCode::DomainViolation, "argument " + std::to_string(s) + " outside (-1, 1)");
    return false;
  }
  if (!std::isfinite(s)) throw Error(ErrorCode::DomainViolation, "non-finite argument");
  const double edge = 1.0 - params_.safeguard_delta;
  if (a <= edge) return false;
  s0 = std::copysign(edge, s);
  return true;
}

double FloryHuggins::F(double s) const {
  if (params_.extension == Extension::Reject && std::abs(s) == 1.0)
    return params_.theta * std::numbers::ln2;
  double s0 = 0.0;
  if (!in_extension(s, s0)) return F_exact(s);
  const double d = s - s0;
  return F_exact(s0) + F_prime_exact(s0) * d + 0.5 * F_second_exact(s0) * d * d;
}

double FloryHuggins::F_prime(double s) const {
  double s0 = 0.0;
  if (!in_extension(s, s0)) return F_prime_exact(s);
  return F_prime_exact(s0) + F_second_exact(s0) * (s - s0);
}

double FloryHuggins::F_second(double s) const {
  double s0 = 0.0;
  if (!in_extension(s, s0)) return F_second_exact(s);
  return F_second_exact(s0);
}

double potential_energy(const ScalarField& c, const PotentialParams& p) {
  const FloryHuggins fh(p);
  double sum = 0.0;
  for (double v : c.values) sum += fh.f(v);
  const double h = c.grid.spacing();
  return h * h * sum;
}

ScalarField f_prime(const ScalarField& c, const PotentialParams& p) {
  const FloryHuggins fh(p);
  ScalarField out(c.grid);
  for (std::size_t i = 0; i < c.values.size(); ++i) out.values[i] = fh.f_prime(c.values[i]);
  return out;
}

}  // namespace nlmh
