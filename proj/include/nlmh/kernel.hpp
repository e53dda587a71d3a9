#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlmh/grid.hpp"

namespace nlmh {

/// Radial bump psi on [0, 1] defining rho_eps(r) = A_eps r^2 psi(r/eps),
/// hence J_eps(x) = A_eps psi(|x|/eps).
struct KernelProfile {
  std::string name;
  std::function<double(double)> psi;
  double moment_m = 0.0;     ///< int_0^1 s^3 psi(s) ds  (n = 2)
  double mass_moment = 0.0;  ///< int_0^1 s psi(s) ds

  /// psi(s) = (1 - s^2)^2, M = 1/24.
  static KernelProfile quartic_bump();
  /// psi(s) = (1 - s^2)^p for integer p >= 2; moments in closed form.
  static KernelProfile polynomial_bump(int power);
  /// Arbitrary profile; moments by composite Simpson quadrature.
  static KernelProfile from_function(std::string name, std::function<double(double)> psi);
  static KernelProfile by_name(const std::string& name);

  void validate() const;
};

/// C_n = int_{S^{n-1}} sigma_1^2 dH^{n-1}; only n = 2 is supported.
double sphere_second_moment(int dim);

/// Discrete Fourier multiplier of L_eps on a grid, plus kernel metadata.
/// Immutable after construction.
class KernelSymbol {
 public:
  const Grid& grid() const noexcept { return grid_; }
  double epsilon() const noexcept { return epsilon_; }
  double amplitude() const noexcept { return amplitude_; }
  /// h^2 sum_x J(x): the discrete kernel mass (J * 1).
  double j_mass() const noexcept { return j_mass_; }
  /// Multiplier on the half spectrum (same layout as SpectralField).
  const std::vector<double>& sigma() const noexcept { return sigma_; }
  double sigma_at(int row, int col) const noexcept {
    return sigma_[static_cast<std::size_t>(row) * grid_.spectral_cols() + col];
  }
  double min_sigma() const noexcept { return min_sigma_; }
  double max_sigma() const noexcept { return max_sigma_; }

 private:
  friend KernelSymbol build_kernel(const Grid&, double, const KernelProfile&);
  KernelSymbol(const Grid& g) : grid_(g) {}

  Grid grid_;
  double epsilon_ = 0.0;
  double amplitude_ = 0.0;
  double j_mass_ = 0.0;
  double min_sigma_ = 0.0;
  double max_sigma_ = 0.0;
  std::vector<double> sigma_;
};

/// Smallest admissible kernel radius, in grid spacings.
inline constexpr double kMinKernelCells = 4.0;

/// A_eps = 2 / (C_2 eps^4 M).
double kernel_amplitude(double epsilon, const KernelProfile& profile);

/// J_eps sampled at minimum-image distances from the origin.
ScalarField sample_kernel(const Grid& g, double epsilon, const KernelProfile& profile);

/// Throws EpsilonOutOfRange unless 0 < eps < pi and UnderResolvedKernel
/// when eps < 4h.
KernelSymbol build_kernel(const Grid& g, double epsilon, const KernelProfile& profile);

ScalarField apply_nonlocal(const ScalarField& c, const KernelSymbol& K);

/// E_eps(c) = 1/2 sum_k sigma(k) |chat(k)|^2 in the Parseval scaling.
double nonlocal_energy(const ScalarField& c, const KernelSymbol& K);

/// ||L_eps c - (-Laplace c)||_{L2}.
double operator_defect(const ScalarField& c, const KernelSymbol& K);

/// h-quadrature of int_0^inf rho_eps(r) r dr; the target is 2/C_2 = 2/pi.
double kernel_normalization(const Grid& g, double epsilon, const KernelProfile& profile);

}  // namespace nlmh
