#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace nlmh {

using Complex = std::complex<double>;

namespace detail {
struct FftPlans;
}

/// Uniform periodic grid on [0, 2*pi)^2 with N points per direction.
///
/// Physical values are stored row-major: index i*N + j holds the value at
/// (x1, x2) = (i*h, j*h). Spectral values use the real-to-complex half
/// spectrum of size N x (N/2+1): entry a*(N/2+1) + b carries wavenumber
/// (k1, k2) = (a <= N/2 ? a : a - N, b). The mode k1 = N/2 is the
/// Nyquist row, b = N/2 the Nyquist column.
///
/// Transform convention: forward is the raw DFT
///   fhat(k) = sum_x f(x) exp(-i k.x),
/// backward divides by N^2. With this scaling Parseval reads
///   h^2 sum_x |f(x)|^2 = (2 pi)^2 / N^4 sum_k |fhat(k)|^2,
/// where the k-sum runs over the full (Hermitian) spectrum.
///
/// Copies share the FFTW plans, which are only executed through the
/// new-array interface and are therefore safe to use from several threads.
class Grid {
 public:
  explicit Grid(int n);

  int n() const noexcept { return n_; }
  double spacing() const noexcept { return 2.0 * std::numbers::pi / n_; }
  static constexpr double length() noexcept { return 2.0 * std::numbers::pi; }
  static constexpr double area() noexcept { return length() * length(); }

  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  int spectral_cols() const noexcept { return n_ / 2 + 1; }
  std::size_t spectral_size() const noexcept {
    return static_cast<std::size_t>(n_) * spectral_cols();
  }

  int k1(int row) const noexcept { return row <= n_ / 2 ? row : row - n_; }
  int k2(int col) const noexcept { return col; }
  double x(int i) const noexcept { return i * spacing(); }

  /// Multiplicity of a half-spectrum column in the full Hermitian spectrum.
  double column_weight(int col) const noexcept {
    return (col == 0 || col == n_ / 2) ? 1.0 : 2.0;
  }

  /// Scale factor turning sum_k |fhat|^2 into a squared L2 norm.
  double parseval_factor() const noexcept {
    const double n2 = static_cast<double>(n_) * n_;
    return area() / (n2 * n2);
  }

  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Consumes a copy of `in`; the argument is left untouched.
  void backward(std::span<const Complex> in, std::span<double> out) const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.n_ == b.n_; }

 private:
  int n_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

  double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n() + j]; }
  double operator()(int i, int j) const {
    return values[static_cast<std::size_t>(i) * grid.n() + j];
  }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);

struct SpectralField {
  Grid grid;
  std::vector<Complex> coeffs;

  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.spectral_size()) {}

  Complex& operator()(int row, int col) {
    return coeffs[static_cast<std::size_t>(row) * grid.spectral_cols() + col];
  }
  Complex operator()(int row, int col) const {
    return coeffs[static_cast<std::size_t>(row) * grid.spectral_cols() + col];
  }
};

struct VectorField {
  ScalarField x;
  ScalarField y;
  /// Set only by operations that guarantee k.v(k) = 0 and a zero mean.
  bool divergence_free = false;

  explicit VectorField(const Grid& g) : x(g), y(g) {}
  VectorField(ScalarField a, ScalarField b) : x(std::move(a)), y(std::move(b)) {}

  const Grid& grid() const noexcept { return x.grid; }
};

VectorField operator-(const VectorField& a, const VectorField& b);

/// Sample a function of (x1, x2) on the grid.
template <class Fn>
ScalarField sample(const Grid& g, Fn&& fn) {
  ScalarField f(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) f(i, j) = fn(g.x(i), g.x(j));
  return f;
}

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace nlmh
