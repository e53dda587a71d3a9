#include "nlmh/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nlmh/error.hpp"

namespace nlmh {

namespace {

constexpr double kMeanTolerance = 1e-10;

void require_finite(const ScalarField& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "field has non-finite entries");
}

void require_zero_mean(const ScalarField& g) {
  const double m = mean(g);
  const double scale = max_abs(g);
  if (std::abs(m) > kMeanTolerance * scale)
    throw Error(ErrorCode::NonZeroMean, "field mean " + std::to_string(m) + " is not zero");
}

// Zero an odd-derivative coefficient on the Nyquist row/column.
bool is_nyquist_row(const Grid& g, int row) { return row == g.n() / 2; }
bool is_nyquist_col(const Grid& g, int col) { return col == g.n() / 2; }

}  // namespace

SpectralField transform_forward(const ScalarField& f) {
  require_finite(f);
  SpectralField F(f.grid);
  f.grid.forward(f.values, F.coeffs);
  return F;
}

ScalarField transform_backward(const SpectralField& F) {
  ScalarField f(F.grid);
  F.grid.backward(F.coeffs, f.values);
  return f;
}

VectorField gradient(const ScalarField& c) {
  const Grid& g = c.grid;
  const SpectralField C = transform_forward(c);
  SpectralField Gx(g), Gy(g);
  for_each_mode(g, [&](int a, int b, int k1, int k2) {
    const Complex ik1 = is_nyquist_row(g, a) ? 0.0 : Complex(0.0, k1);
    const Complex ik2 = is_nyquist_col(g, b) ? 0.0 : Complex(0.0, k2);
    Gx(a, b) = ik1 * C(a, b);
    Gy(a, b) = ik2 * C(a, b);
  });
  return VectorField(transform_backward(Gx), transform_backward(Gy));
}

ScalarField laplacian(const ScalarField& c) {
  SpectralField C = transform_forward(c);
  for_each_mode(c.grid, [&](int a, int b, int k1, int k2) {
    C(a, b) *= -static_cast<double>(k1 * k1 + k2 * k2);
  });
  return transform_backward(C);
}

ScalarField divergence(const VectorField& u) {
  const Grid& g = u.grid();
  const SpectralField X = transform_forward(u.x);
  const SpectralField Y = transform_forward(u.y);
  SpectralField D(g);
  for_each_mode(g, [&](int a, int b, int k1, int k2) {
    const Complex ik1 = is_nyquist_row(g, a) ? 0.0 : Complex(0.0, k1);
    const Complex ik2 = is_nyquist_col(g, b) ? 0.0 : Complex(0.0, k2);
    D(a, b) = ik1 * X(a, b) + ik2 * Y(a, b);
  });
  return transform_backward(D);
}

ScalarField inverse_laplacian_zero_mean(const ScalarField& g) {
  require_zero_mean(g);
  SpectralField G = transform_forward(g);
  for_each_mode(g.grid, [&](int a, int b, int k1, int k2) {
    const int k2sum = k1 * k1 + k2 * k2;
    G(a, b) = k2sum == 0 ? Complex(0.0) : G(a, b) / static_cast<double>(k2sum);
  });
  return transform_backward(G);
}

double hminus1_norm(const ScalarField& g) {
  require_zero_mean(g);
  return spectral_norm(transform_forward(g), [](int k1, int k2) {
    const int k2sum = k1 * k1 + k2 * k2;
    return k2sum == 0 ? 0.0 : 1.0 / k2sum;
  });
}

VectorField leray_project(const VectorField& u) {
  const Grid& g = u.grid();
  SpectralField X = transform_forward(u.x);
  SpectralField Y = transform_forward(u.y);
  for_each_mode(g, [&](int a, int b, int k1, int k2) {
    const int k2sum = k1 * k1 + k2 * k2;
    // Nyquist modes alias +k and -k, so no projection of them is real-consistent.
    if (k2sum == 0 || is_nyquist_row(g, a) || is_nyquist_col(g, b)) {
      X(a, b) = 0.0;
      Y(a, b) = 0.0;
      return;
    }
    const Complex kdotu = static_cast<double>(k1) * X(a, b) + static_cast<double>(k2) * Y(a, b);
    X(a, b) -= static_cast<double>(k1) * kdotu / static_cast<double>(k2sum);
    Y(a, b) -= static_cast<double>(k2) * kdotu / static_cast<double>(k2sum);
  });
  VectorField p(transform_backward(X), transform_backward(Y));
  p.divergence_free = true;
  return p;
}

double relative_divergence(const VectorField& u) {
  const Grid& g = u.grid();
  const SpectralField X = transform_forward(u.x);
  const SpectralField Y = transform_forward(u.y);
  // L2 ratio: per-mode ratios would flag transform roundoff in empty modes.
  double div = 0.0;
  double grad = 0.0;
  for_each_mode(g, [&](int a, int b, int k1, int k2) {
    if (is_nyquist_row(g, a) || is_nyquist_col(g, b)) return;
    const double w = g.column_weight(b);
    div += w * std::norm(static_cast<double>(k1) * X(a, b) + static_cast<double>(k2) * Y(a, b));
    grad += w * (k1 * k1 + k2 * k2) * (std::norm(X(a, b)) + std::norm(Y(a, b)));
  });
  return grad == 0.0 ? 0.0 : std::sqrt(div / grad);
}

double stokes_dual_norm(const VectorField& u) {
  // Roundoff of one transform pair sits near 1e-15; 1e-12 leaves margin.
  if (relative_divergence(u) > 1e-12)
    throw Error(ErrorCode::NotDivergenceFree, "stokes_dual_norm needs a solenoidal field");
  const double mx = mean(u.x), my = mean(u.y);
  const double scale = std::max(max_abs(u.x), max_abs(u.y));
  if (std::abs(mx) > kMeanTolerance * scale || std::abs(my) > kMeanTolerance * scale)
    throw Error(ErrorCode::NonZeroMean, "stokes_dual_norm needs a mean-zero field");
  const double nx = hminus1_norm(u.x);
  const double ny = hminus1_norm(u.y);
  return std::hypot(nx, ny);
}

double sobolev_norm(const ScalarField& c, int s) {
  if (s < 0 || s > 3)
    throw Error(ErrorCode::InvalidArgument, "sobolev order must be in 0..3");
  return spectral_norm(transform_forward(c), [s](int k1, int k2) {
    return std::pow(1.0 + k1 * k1 + k2 * k2, s);
  });
}

double mean(const ScalarField& f) {
  return std::accumulate(f.values.begin(), f.values.end(), 0.0) /
         static_cast<double>(f.values.size());
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  const double h = a.grid.spacing();
  return h * h * std::inner_product(a.values.begin(), a.values.end(), b.values.begin(), 0.0);
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double l2_norm(const VectorField& u) { return std::hypot(l2_norm(u.x), l2_norm(u.y)); }

double spectral_norm(const SpectralField& F, const std::function<double(int, int)>& weight) {
  const Grid& g = F.grid;
  double sum = 0.0;
  for_each_mode(g, [&](int a, int b, int k1, int k2) {
    const double w = weight ? weight(k1, k2) : 1.0;
    sum += g.column_weight(b) * w * std::norm(F(a, b));
  });
  return std::sqrt(g.parseval_factor() * sum);
}

bool dealias_keep(const Grid& g, int row, int col) noexcept {
  const int cutoff = g.n() / 3;
  return std::abs(g.k1(row)) <= cutoff && g.k2(col) <= cutoff;
}

}  // namespace nlmh
