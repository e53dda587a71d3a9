#include "nlmh/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <string>

#include "nlmh/error.hpp"

namespace nlmh {

namespace detail {

// FFTW planning is not thread-safe; execution through fftw_execute_dft_*
// with distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftPlans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit FftPlans(int n) {
    std::lock_guard lock(planner_mutex());
    const std::size_t real_size = static_cast<std::size_t>(n) * n;
    const std::size_t cplx_size = static_cast<std::size_t>(n) * (n / 2 + 1);
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(cplx_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
    c2r = fftw_plan_dft_c2r_2d(n, n, c, r, flags);
    fftw_free(r);
    fftw_free(c);
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

}  // namespace detail

Grid::Grid(int n) : n_(n) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw Error(ErrorCode::InvalidArgument,
                "grid size must be a power of two >= 8, got " + std::to_string(n));
  plans_ = std::make_shared<const detail::FftPlans>(n);
}

void Grid::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != size() || out.size() != spectral_size())
    throw Error(ErrorCode::InvalidArgument, "forward transform: buffer size mismatch");
  // r2c does not modify its input.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Grid::backward(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != spectral_size() || out.size() != size())
    throw Error(ErrorCode::InvalidArgument, "backward transform: buffer size mismatch");
  std::vector<Complex> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(size());
  for (double& v : out) v *= scale;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid, o.grid);
  std::transform(values.begin(), values.end(), o.values.begin(), values.begin(),
                 std::plus<>{});
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid, o.grid);
  std::transform(values.begin(), values.end(), o.values.begin(), values.begin(),
                 std::minus<>{});
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& v : values) v *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }

VectorField operator-(const VectorField& a, const VectorField& b) {
  VectorField d(a.x - b.x, a.y - b.y);
  d.divergence_free = a.divergence_free && b.divergence_free;
  return d;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b))
    throw Error(ErrorCode::GridMismatch,
                "grids differ: N=" + std::to_string(a.n()) + " vs N=" + std::to_string(b.n()));
}

}  // namespace nlmh
