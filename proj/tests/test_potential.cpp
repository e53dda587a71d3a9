#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlmh/error.hpp"
#include "nlmh/potential.hpp"
#include "nlmh/spectral.hpp"

using namespace nlmh;
constexpr double pi = std::numbers::pi;

namespace {

PotentialParams reject() {
  PotentialParams p;
  p.extension = Extension::Reject;
  return p;
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("values at the anchors") {
  const FloryHuggins fh{PotentialParams{}};
  CHECK(fh.F(0.0) == 0.0);
  CHECK(fh.F_prime(0.0) == 0.0);
  CHECK(fh.F_second(0.0) == doctest::Approx(1.0));
  CHECK(fh.f_prime(0.0) == 0.0);
  CHECK(fh.f_prime(0.5) == doctest::Approx(0.5 * std::log(3.0) - 1.0).epsilon(1e-14));
  CHECK(fh.f_prime(0.5) == doctest::Approx(-0.450694).epsilon(1e-6));
  const FloryHuggins r{reject()};
  CHECK(r.F(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(r.F(-1.0) == doctest::Approx(std::log(2.0)));

  PotentialParams p;
  p.theta = 0.7;
  p.theta0 = 1.5;
  p.extension = Extension::Reject;
  CHECK(FloryHuggins(p).F(1.0) == doctest::Approx(0.7 * std::log(2.0)));
}

TEST_CASE("closed forms on samples") {
  const FloryHuggins fh{PotentialParams{}};
  for (double s = -0.99; s < 0.995; s += 0.01) {
    CHECK(fh.F(s) == doctest::Approx(0.5 * ((1 + s) * std::log1p(s) + (1 - s) * std::log1p(-s))));
    CHECK(fh.F_prime(s) == doctest::Approx(std::atanh(s)));
    CHECK(fh.F_second(s) == doctest::Approx(1.0 / (1 - s * s)));
    CHECK(fh.f_prime(-s) == doctest::Approx(-fh.f_prime(s)));
  }
}

TEST_CASE("finite differences") {
  const FloryHuggins fh{PotentialParams{}};
  const double h = 1e-5;
  for (double s = -0.95; s <= 0.95; s += 0.05) {
    const double d1 = (fh.F(s + h) - fh.F(s - h)) / (2 * h);
    const double d2 = (fh.F_prime(s + h) - fh.F_prime(s - h)) / (2 * h);
    const double scale = fh.F_second(s);
    CHECK(std::abs(fh.F_prime(s) - d1) <= 1e-6 * scale);
    CHECK(std::abs(fh.F_second(s) - d2) <= 1e-6 * scale * scale);
  }
}

TEST_CASE("convexity bound holds inside and across the extension") {
  const FloryHuggins fh{PotentialParams{}};
  const double theta = fh.params().theta;
  double prev = -1e300;
  for (int i = 0; i <= 20000; ++i) {
    const double s = -1.0 + 1e-6 + i * (2.0 - 2e-6) / 20000;
    CHECK(fh.F_second(s) >= theta);
    const double Fp = fh.f_prime(s) + fh.params().theta0 * s;
    CHECK(Fp > prev);
    prev = Fp;
  }
  for (double s : {1.0, 1.5, -3.0}) {
    CHECK(std::isfinite(fh.F(s)));
    CHECK(fh.F_second(s) >= theta);
  }
}

TEST_CASE("quadratic extension is C2 at the matching point") {
  const FloryHuggins fh{PotentialParams{}};
  const double s0 = 1.0 - fh.params().safeguard_delta;
  const double below = std::nextafter(s0, 0.0);
  const double above = std::nextafter(s0, 2.0);
  // Jumps bounded by the next derivative times the two-ulp gap.
  const double gap = above - below;
  CHECK(std::abs(fh.F(above) - fh.F(below)) <= 2.0 * fh.F_prime(s0) * gap + 1e-15);
  CHECK(std::abs(fh.F_prime(above) - fh.F_prime(below)) <= 2.0 * fh.F_second(s0) * gap);
  CHECK(fh.F_second(above) == doctest::Approx(fh.F_second(below)).epsilon(1e-6));
  // Frozen curvature beyond the matching point.
  CHECK(fh.F_second(1.2) == doctest::Approx(fh.F_second(above)));
  CHECK(fh.F_prime(1.2) - fh.F_prime(above) ==
        doctest::Approx((1.2 - above) * fh.F_second(above)).epsilon(1e-9));
}

TEST_CASE("reject policy") {
  const FloryHuggins r{reject()};
  CHECK(std::isfinite(r.F_prime(1.0 - 1e-10)));
  for (double s : {1.0 - 1e-13, 1.0, 1.5, -1.0}) {
    try {
      r.F_prime(s);
      FAIL("expected DomainViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainViolation);
    }
  }
  CHECK_THROWS_AS(r.F(1.5), Error);
}

TEST_CASE("parameter validation") {
  PotentialParams p;
  p.theta = 2.0;
  p.theta0 = 2.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = PotentialParams{};
  p.theta = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = PotentialParams{};
  p.safeguard_delta = 0.5;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK_NOTHROW(PotentialParams{}.validate());
}

TEST_CASE("bulk energy") {
  const Grid g(16);
  const PotentialParams p;
  CHECK(potential_energy(ScalarField(g), p) == 0.0);
  const double F05 = 0.5 * (1.5 * std::log(1.5) + 0.5 * std::log(0.5));
  CHECK(potential_energy(ScalarField(g, 0.5), p) ==
        doctest::Approx(4 * pi * pi * (F05 - 0.25)).epsilon(1e-13));
  const ScalarField c = sample(g, [](double x, double y) { return 0.6 * std::sin(x) * std::cos(y); });
  CHECK(potential_energy(c, p) == doctest::Approx(potential_energy(-1.0 * c, p)).epsilon(1e-14));
  const ScalarField fp = f_prime(c, p);
  const FloryHuggins fh(p);
  CHECK(fp(3, 5) == doctest::Approx(fh.f_prime(c(3, 5))));
}

}
