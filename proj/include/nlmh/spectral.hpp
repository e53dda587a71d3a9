#pragma once

#include <functional>

#include "nlmh/grid.hpp"

namespace nlmh {

/// Throws NonFinite if any entry is NaN or infinite.
SpectralField transform_forward(const ScalarField& f);
ScalarField transform_backward(const SpectralField& F);

/// Spectral gradient, i*k_j*chat(k). Odd derivatives drop the Nyquist modes.
VectorField gradient(const ScalarField& c);
ScalarField laplacian(const ScalarField& c);
ScalarField divergence(const VectorField& u);

/// Solves -Laplace(u) = g for zero-mean u. Throws NonZeroMean when
/// |mean(g)| exceeds 1e-10 times max|g|.
ScalarField inverse_laplacian_zero_mean(const ScalarField& g);

/// Dual norm ||g||_* = ||grad N g||_{L2}; same mean precondition as above.
double hminus1_norm(const ScalarField& g);

/// L2 projection onto divergence-free, mean-zero fields. Nyquist modes are
/// dropped.
VectorField leray_project(const VectorField& u);

/// ||u||_sigma = ||grad A_S^{-1} u||. On the torus the Stokes inverse of a
/// divergence-free mean-zero field is the componentwise inverse Laplacian.
double stokes_dual_norm(const VectorField& u);

/// H^s norm with weight (1+|k|^2)^s, s in 0..3.
double sobolev_norm(const ScalarField& c, int s);

double mean(const ScalarField& f);
double max_abs(const ScalarField& f);
double l2_norm(const ScalarField& f);  // physical-space quadrature
double l2_norm(const VectorField& u);
double inner(const ScalarField& a, const ScalarField& b);  // h^2 sum a*b

/// sqrt(parseval_factor * sum_k w(k) |F(k)|^2) over the full spectrum.
double spectral_norm(const SpectralField& F,
                     const std::function<double(int k1, int k2)>& weight = nullptr);

/// ||div u|| / ||grad u|| computed spectrally, Nyquist modes excluded as in
/// divergence(); 0 for a constant field.
double relative_divergence(const VectorField& u);

/// Two-thirds dealiasing rule: keep max(|k1|,|k2|) <= N/3.
bool dealias_keep(const Grid& g, int row, int col) noexcept;

/// Iterate over the half spectrum calling fn(row, col, k1, k2).
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const int n = g.n();
  const int cols = g.spectral_cols();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < cols; ++b) fn(a, b, g.k1(a), g.k2(b));
}

}  // namespace nlmh
