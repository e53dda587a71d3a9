#include "nlmh/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlmh/error.hpp"
#include "nlmh/spectral.hpp"

namespace nlmh {

namespace {

double simpson(const std::function<double(double)>& fn, double a, double b, int panels) {
  const double h = (b - a) / (2 * panels);
  double sum = fn(a) + fn(b);
  for (int i = 1; i < 2 * panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
  return sum * h / 3.0;
}

double min_image(int i, int n, double h) { return (i <= n / 2 ? i : i - n) * h; }

}  // namespace

KernelProfile KernelProfile::quartic_bump() { return polynomial_bump(2); }

KernelProfile KernelProfile::polynomial_bump(int power) {
  if (power < 2)
    throw Error(ErrorCode::InvalidArgument, "polynomial bump needs power >= 2 for J in W^{1,1}");
  KernelProfile p;
  p.name = power == 2 ? "quartic_bump" : "poly_bump_" + std::to_string(power);
  p.psi = [power](double s) { return s >= 1.0 ? 0.0 : std::pow(1.0 - s * s, power); };
  // Substituting u = s^2 turns both moments into beta integrals.
  p.moment_m = 0.5 / ((power + 1.0) * (power + 2.0));
  p.mass_moment = 0.5 / (power + 1.0);
  return p;
}

KernelProfile KernelProfile::from_function(std::string name, std::function<double(double)> psi) {
  KernelProfile p;
  p.name = std::move(name);
  p.psi = std::move(psi);
  const auto& f = p.psi;
  p.moment_m = simpson([&](double s) { return s * s * s * f(s); }, 0.0, 1.0, 4096);
  p.mass_moment = simpson([&](double s) { return s * f(s); }, 0.0, 1.0, 4096);
  p.validate();
  return p;
}

KernelProfile KernelProfile::by_name(const std::string& name) {
  if (name == "quartic_bump") return quartic_bump();
  if (name.rfind("poly_bump_", 0) == 0) {
    try {
      return polynomial_bump(std::stoi(name.substr(10)));
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown kernel profile '" + name + "'");
}

void KernelProfile::validate() const {
  if (!psi) throw Error(ErrorCode::InvalidArgument, "kernel profile has no psi");
  if (!(moment_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel moment M must be > 0");
  if (std::abs(psi(1.0)) > 1e-14) throw Error(ErrorCode::InvalidArgument, "psi(1) must vanish");
  for (int i = 0; i <= 1000; ++i)
    if (psi(i / 1000.0) < 0.0) throw Error(ErrorCode::InvalidArgument, "psi must be nonnegative");
}

double sphere_second_moment(int dim) {
  // int_0^{2 pi} cos^2(theta) d theta
  if (dim == 2) return std::numbers::pi;
  throw Error(ErrorCode::InvalidArgument, "only two-dimensional kernels are supported");
}

double kernel_amplitude(double epsilon, const KernelProfile& profile) {
  return 2.0 / (sphere_second_moment(2) * std::pow(epsilon, 4) * profile.moment_m);
}

ScalarField sample_kernel(const Grid& g, double epsilon, const KernelProfile& profile) {
  const double amp = kernel_amplitude(epsilon, profile);
  const int n = g.n();
  const double h = g.spacing();
  ScalarField J(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = std::hypot(min_image(i, n, h), min_image(j, n, h));
      J(i, j) = r < epsilon ? amp * profile.psi(r / epsilon) : 0.0;
    }
  return J;
}

KernelSymbol build_kernel(const Grid& g, double epsilon, const KernelProfile& profile) {
  if (!(epsilon > 0.0) || !(epsilon < std::numbers::pi))
    throw Error(ErrorCode::EpsilonOutOfRange,
                "kernel radius must lie in (0, pi), got " + std::to_string(epsilon));
  if (epsilon < kMinKernelCells * g.spacing())
    throw Error(ErrorCode::UnderResolvedKernel,
                "eps=" + std::to_string(epsilon) + " is below 4h=" +
                    std::to_string(kMinKernelCells * g.spacing()));
  profile.validate();

  KernelSymbol K(g);
  K.epsilon_ = epsilon;
  K.amplitude_ = kernel_amplitude(epsilon, profile);

  const ScalarField J = sample_kernel(g, epsilon, profile);
  const SpectralField Jhat = transform_forward(J);
  const double h2 = g.spacing() * g.spacing();
  K.j_mass_ = h2 * Jhat(0, 0).real();

  K.sigma_.resize(g.spectral_size());
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < K.sigma_.size(); ++i) {
    K.sigma_[i] = K.j_mass_ - h2 * Jhat.coeffs[i].real();
    lo = std::min(lo, K.sigma_[i]);
    hi = std::max(hi, K.sigma_[i]);
  }
  K.sigma_[0] = 0.0;
  for (double s : K.sigma_)
    if (!std::isfinite(s)) throw Error(ErrorCode::NonFinite, "kernel symbol is not finite");
  if (lo < -1e-12 * hi)
    throw Error(ErrorCode::InvalidArgument, "kernel symbol is negative beyond roundoff");
  K.min_sigma_ = lo;
  K.max_sigma_ = hi;
  return K;
}

ScalarField apply_nonlocal(const ScalarField& c, const KernelSymbol& K) {
  require_same_grid(c.grid, K.grid());
  SpectralField C = transform_forward(c);
  for (std::size_t i = 0; i < C.coeffs.size(); ++i) C.coeffs[i] *= K.sigma()[i];
  return transform_backward(C);
}

double nonlocal_energy(const ScalarField& c, const KernelSymbol& K) {
  require_same_grid(c.grid, K.grid());
  const double norm = spectral_norm(transform_forward(c), [&](int k1, int k2) {
    const int row = k1 < 0 ? k1 + c.grid.n() : k1;
    return K.sigma_at(row, k2);
  });
  return 0.5 * norm * norm;
}

double operator_defect(const ScalarField& c, const KernelSymbol& K) {
  require_same_grid(c.grid, K.grid());
  SpectralField C = transform_forward(c);
  for_each_mode(c.grid, [&](int a, int b, int k1, int k2) {
    C(a, b) *= K.sigma_at(a, b) - static_cast<double>(k1 * k1 + k2 * k2);
  });
  return spectral_norm(C);
}

double kernel_normalization(const Grid& g, double epsilon, const KernelProfile& profile) {
  const ScalarField J = sample_kernel(g, epsilon, profile);
  const int n = g.n();
  const double h = g.spacing();
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = min_image(i, n, h), y = min_image(j, n, h);
      sum += J(i, j) * (x * x + y * y);
    }
  // int_{R^2} J |x|^2 dx = 2 pi int_0^inf rho(r) r dr
  return h * h * sum / (2.0 * std::numbers::pi);
}

}  // namespace nlmh
