#pragma once

#include "nlmh/grid.hpp"

namespace nlmh {

enum class Extension { Reject, QuadraticExtend };

struct PotentialParams {
  double theta = 1.0;
  double theta0 = 2.0;
  double safeguard_delta = 1e-8;
  Extension extension = Extension::QuadraticExtend;

  /// Requires 0 < theta < theta0 and 0 < safeguard_delta < 0.5.
  void validate() const;
};

/// Hard floor used by the Reject policy.
inline constexpr double kHardDomainFloor = 1e-12;

/// Flory-Huggins potential f(s) = F(s) - theta0/2 s^2 with
/// F(s) = theta/2 ((1+s) ln(1+s) + (1-s) ln(1-s)).
///
/// Under QuadraticExtend, F is continued beyond |s| = 1 - delta by its
/// second-order Taylor polynomial at the matching point, so F'' is frozen
/// there and F stays C^2. Under Reject, |s| >= 1 - 1e-12 throws
/// DomainViolation, except that F(+-1) returns the limit theta ln 2.
class FloryHuggins {
 public:
  explicit FloryHuggins(const PotentialParams& p);

  double F(double s) const;
  double F_prime(double s) const;
  double F_second(double s) const;
  double f(double s) const { return F(s) - 0.5 * params_.theta0 * s * s; }
  double f_prime(double s) const { return F_prime(s) - params_.theta0 * s; }

  const PotentialParams& params() const noexcept { return params_; }

 private:
  double F_exact(double s) const;
  double F_prime_exact(double s) const;
  double F_second_exact(double s) const;
  /// Returns the matching point when s lies in the extension region.
  bool in_extension(double s, double& s0) const;

  PotentialParams params_;
};

/// h^2-quadrature of f(c).
double potential_energy(const ScalarField& c, const PotentialParams& p);

/// Pointwise f'(c).
ScalarField f_prime(const ScalarField& c, const PotentialParams& p);

}  // namespace nlmh
