#pragma once

// Independent reference implementations used by the unit tests and the
// acceptance binary. Nothing here calls the library's transforms or kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nlmh/dynamics.hpp"

namespace nlmh::oracle {

inline constexpr double kPi = std::numbers::pi;

// Quartic bump kernel J_eps(x) = 48/(pi eps^4) (1 - |x|^2/eps^2)^2.
inline double kernel_value(double dx, double dy, double eps) {
  const double r = std::hypot(dx, dy) / eps;
  if (r >= 1.0) return 0.0;
  const double psi = (1.0 - r * r) * (1.0 - r * r);
  return 48.0 / (kPi * std::pow(eps, 4)) * psi;
}

inline double min_image(int i, int n, double h) { return (i <= n / 2 ? i : i - n) * h; }

inline double lattice_kernel(int d1, int d2, int n, double h, double eps) {
  return kernel_value(min_image((d1 % n + n) % n, n, h), min_image((d2 % n + n) % n, n, h), eps);
}

// sum_j h^2 J(x_i - x_j)(u_i - u_j), O(N^4).
inline ScalarField brute_apply(const ScalarField& u, double eps) {
  const int n = u.grid.n();
  const double h = u.grid.spacing();
  ScalarField out(u.grid);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      double s = 0.0;
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2)
          s += lattice_kernel(i1 - j1, i2 - j2, n, h, eps) * (u(i1, i2) - u(j1, j2));
      out(i1, i2) = h * h * s;
    }
  return out;
}

// 1/4 sum_i sum_j h^4 J(x_i - x_j)(u_i - u_j)^2, O(N^4).
inline double brute_energy(const ScalarField& u, double eps) {
  const int n = u.grid.n();
  const double h = u.grid.spacing();
  double s = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
          const double d = u(i1, i2) - u(j1, j2);
          s += lattice_kernel(i1 - j1, i2 - j2, n, h, eps) * d * d;
        }
  return 0.25 * std::pow(h, 4) * s;
}

// ---------------------------------------------------------------- RK4 desk oracle
//
// Method-of-lines right-hand side of the local model, written out with a
// naive full-spectrum DFT:
//   c_t = Lap mu - v.grad c,            mu = -Lap c + f'(c)
//   v_t = P[-(v.grad)v - c grad mu] + Lap v
// with the same discrete conventions as the scheme (2/3 rule on quadratic
// products, odd derivatives and the projection drop Nyquist modes).
class DeskModel {
 public:
  using C = std::complex<double>;
  using Spec = std::vector<C>;

  DeskModel(int n, double theta, double theta0) : n_(n), theta_(theta), theta0_(theta0) {
    tw_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) tw_[j] = std::polar(1.0, -2.0 * kPi * j / n);
  }

  struct State {
    std::vector<double> c, vx, vy;
  };

  State rhs(const State& s) const {
    const Spec Cf = fwd(s.c), Vx = fwd(s.vx), Vy = fwd(s.vy);
    const auto cx = bwd(d1(Cf)), cy = bwd(d2(Cf));
    std::vector<double> fp(s.c.size()), adv(s.c.size());
    for (std::size_t i = 0; i < s.c.size(); ++i) {
      fp[i] = theta_ * std::atanh(s.c[i]) - theta0_ * s.c[i];
      adv[i] = s.vx[i] * cx[i] + s.vy[i] * cy[i];
    }
    const Spec A = keep(fwd(adv)), Fp = fwd(fp);
    Spec Mu(Cf.size()), dC(Cf.size());
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        const std::size_t i = idx(a, b);
        const double kk = ksq(a, b);
        Mu[i] = kk * Cf[i] + Fp[i];
        dC[i] = -kk * Mu[i] - A[i];
      }
    const auto mux = bwd(d1(Mu)), muy = bwd(d2(Mu));
    const auto vxx = bwd(d1(Vx)), vxy = bwd(d2(Vx)), vyx = bwd(d1(Vy)), vyy = bwd(d2(Vy));
    std::vector<double> rx(s.c.size()), ry(s.c.size());
    for (std::size_t i = 0; i < s.c.size(); ++i) {
      rx[i] = -s.c[i] * mux[i] - (s.vx[i] * vxx[i] + s.vy[i] * vxy[i]);
      ry[i] = -s.c[i] * muy[i] - (s.vx[i] * vyx[i] + s.vy[i] * vyy[i]);
    }
    Spec Rx = keep(fwd(rx)), Ry = keep(fwd(ry));
    project(Rx, Ry);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        const std::size_t i = idx(a, b);
        Rx[i] -= ksq(a, b) * Vx[i];
        Ry[i] -= ksq(a, b) * Vy[i];
      }
    return {bwd(dC), bwd(Rx), bwd(Ry)};
  }

  // The fourth-order Cahn-Hilliard term is stiff: |k|^4 reaches (N^2/2)^2,
  // so substeps are capped at kMaxSubstep to keep h |k|^4 inside RK4's
  // stability interval (about 2.8) up to N = 32.
  static constexpr double kMaxSubstep = 4e-6;

  State rk4(State s, double dt) const {
    const int substeps = std::max(4, static_cast<int>(std::ceil(dt / kMaxSubstep)));
    const double h = dt / substeps;
    for (int k = 0; k < substeps; ++k) {
      const State k1 = rhs(s);
      const State k2 = rhs(axpy(s, 0.5 * h, k1));
      const State k3 = rhs(axpy(s, 0.5 * h, k2));
      const State k4 = rhs(axpy(s, h, k3));
      for (std::size_t i = 0; i < s.c.size(); ++i) {
        s.c[i] += h / 6 * (k1.c[i] + 2 * k2.c[i] + 2 * k3.c[i] + k4.c[i]);
        s.vx[i] += h / 6 * (k1.vx[i] + 2 * k2.vx[i] + 2 * k3.vx[i] + k4.vx[i]);
        s.vy[i] += h / 6 * (k1.vy[i] + 2 * k2.vy[i] + 2 * k3.vy[i] + k4.vy[i]);
      }
    }
    return s;
  }

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }
  int wave(int a) const { return a <= n_ / 2 ? a : a - n_; }
  double ksq(int a, int b) const {
    const double k1 = wave(a), k2 = wave(b);
    return k1 * k1 + k2 * k2;
  }
  bool nyq(int a) const { return a == n_ / 2; }

  static State axpy(const State& s, double a, const State& d) {
    State r = s;
    for (std::size_t i = 0; i < r.c.size(); ++i) {
      r.c[i] += a * d.c[i];
      r.vx[i] += a * d.vx[i];
      r.vy[i] += a * d.vy[i];
    }
    return r;
  }

  // Separable naive DFT, sign -1 forward.
  Spec dft(const Spec& in, bool inverse) const {
    Spec tmp(in.size()), out(in.size());
    for (int a = 0; a < n_; ++a)
      for (int j = 0; j < n_; ++j) {
        C s = 0.0;
        for (int b = 0; b < n_; ++b) {
          const C w = tw_[static_cast<std::size_t>((b * j) % n_)];
          s += in[idx(a, b)] * (inverse ? std::conj(w) : w);
        }
        tmp[idx(a, j)] = s;
      }
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i) {
        C s = 0.0;
        for (int a = 0; a < n_; ++a) {
          const C w = tw_[static_cast<std::size_t>((a * i) % n_)];
          s += tmp[idx(a, j)] * (inverse ? std::conj(w) : w);
        }
        out[idx(i, j)] = inverse ? s / static_cast<double>(n_ * n_) : s;
      }
    return out;
  }
  Spec fwd(const std::vector<double>& f) const { return dft(Spec(f.begin(), f.end()), false); }
  std::vector<double> bwd(const Spec& F) const {
    const Spec z = dft(F, true);
    std::vector<double> r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i].real();
    return r;
  }
  Spec d1(const Spec& F) const {
    Spec r(F.size());
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) r[idx(a, b)] = nyq(a) ? 0.0 : C(0.0, wave(a)) * F[idx(a, b)];
    return r;
  }
  Spec d2(const Spec& F) const {
    Spec r(F.size());
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) r[idx(a, b)] = nyq(b) ? 0.0 : C(0.0, wave(b)) * F[idx(a, b)];
    return r;
  }
  Spec keep(Spec F) const {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (std::max(std::abs(wave(a)), std::abs(wave(b))) > n_ / 3) F[idx(a, b)] = 0.0;
    return F;
  }
  void project(Spec& X, Spec& Y) const {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        const std::size_t i = idx(a, b);
        const double k1 = wave(a), k2 = wave(b), kk = k1 * k1 + k2 * k2;
        if (kk == 0.0 || nyq(a) || nyq(b)) {
          X[i] = Y[i] = 0.0;
          continue;
        }
        const C kd = k1 * X[i] + k2 * Y[i];
        X[i] -= k1 * kd / kk;
        Y[i] -= k2 * kd / kk;
      }
  }

  int n_;
  double theta_, theta0_;
  std::vector<C> tw_;
};

inline DeskModel::State desk_state(const SimState& s) { return {s.c.values, s.v.x.values, s.v.y.values}; }

// sqrt(||dc||^2 + ||dv||^2) with h^2 quadrature.
inline double desk_distance(const SimState& s, const DeskModel::State& d) {
  const double h = s.c.grid.spacing();
  double sum = 0.0;
  for (std::size_t i = 0; i < d.c.size(); ++i) {
    sum += std::pow(s.c.values[i] - d.c[i], 2) + std::pow(s.v.x.values[i] - d.vx[i], 2) +
           std::pow(s.v.y.values[i] - d.vy[i], 2);
  }
  return std::sqrt(h * h * sum);
}

}  // namespace nlmh::oracle
