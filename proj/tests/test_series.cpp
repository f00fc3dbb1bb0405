#include <doctest.h>

#include <cmath>
#include <random>

#include "crlab/errors.hpp"
#include "crlab/series.hpp"

using namespace crlab;

TEST_SUITE("series") {

TEST_CASE("eval_series examples") {
  const TruncatedSeries id({cplx{1, 0}});
  CHECK(eval_series(id, 0.0) == cplx{});
  CHECK(eval_series(id, 0.5) == cplx{0.5, 0});
  const TruncatedSeries sq({cplx{}, cplx{1, 0}});
  const cplx z{0.5, 0.5};
  // (0.5 + 0.5i)^2 by hand
  const cplx oracle{0.5 * 0.5 - 0.5 * 0.5, 2 * 0.5 * 0.5};
  CHECK(std::abs(eval_series(sq, z) - oracle) < 1e-16);
  CHECK(std::abs(eval_series(sq, z) - cplx{0, 0.5}) < 1e-16);
}

TEST_CASE("eval_series rejects points beyond the evaluation radius") {
  const TruncatedSeries s({cplx{1, 0}});
  CHECK_THROWS_AS(eval_series(s, cplx{1.5, 0}), DomainError);
}

TEST_CASE("eval_series_over_z is a(z)/z and finite at 0") {
  const TruncatedSeries s({cplx{2, 1}, cplx{0, 3}});
  CHECK(eval_series_over_z(s, 0.0) == cplx{2, 1});
  const cplx z{0.3, -0.2};
  CHECK(std::abs(eval_series_over_z(s, z) * z - eval_series(s, z)) < 1e-15);
}

TEST_CASE("transform_coeffs examples") {
  const auto a = transform_coeffs(TruncatedSeries({cplx{1, 0}}), CoeffTransform::div_n);
  CHECK(a.coeff(1) == cplx{1, 0});
  const auto b = transform_coeffs(TruncatedSeries({cplx{}, cplx{2, 0}}), CoeffTransform::div_n);
  CHECK(b.coeff(1) == cplx{});
  CHECK(b.coeff(2) == cplx{1, 0});
  const auto c = transform_coeffs(TruncatedSeries({cplx{1, 0}}), CoeffTransform::div_in);
  CHECK(c.coeff(1) == cplx{0, -1});
}

TEST_CASE("div_in followed by multiplication by i n is the identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<cplx> c(16);
    for (auto& x : c) x = {u(rng), u(rng)};
    const TruncatedSeries s(c);
    const auto t = transform_coeffs(s, CoeffTransform::div_in);
    for (std::size_t n = 1; n <= 16; ++n) {
      const cplx back = t.coeff(n) * cplx(0, static_cast<double>(n));
      CHECK(std::abs(back - s.coeff(n)) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(s.coeff(n)));
    }
  }
}

TEST_CASE("eval_series is linear") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<cplx> c1(16), c2(16);
    for (auto& x : c1) x = {u(rng), u(rng)};
    for (auto& x : c2) x = {u(rng), u(rng)};
    const TruncatedSeries s1(c1), s2(c2);
    const cplx z = std::polar(0.9 * std::sqrt(std::abs(u(rng))), 3.2 * u(rng));
    const cplx lhs = eval_series(s1 + s2, z);
    const cplx rhs = eval_series(s1, z) + eval_series(s2, z);
    // Horner sums carry their own rounding; 4 ulps of the term scale
    double scale = 0.0;
    for (std::size_t n = 1; n <= 16; ++n)
      scale += (std::abs(c1[n - 1]) + std::abs(c2[n - 1])) * std::pow(std::abs(z), static_cast<double>(n));
    CHECK(std::abs(lhs - rhs) <= 4 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300) * 16);
  }
}

TEST_CASE("flatness_probe examples") {
  const std::vector<double> radii{0.3, 0.2, 0.1};
  auto gauss = [](cplx z) { return std::exp(-1.0 / std::norm(z)); };
  auto cube = [](cplx z) { return std::pow(std::abs(z), 3.0); };

  const auto r1 = flatness_probe(gauss, 10, radii, 1.0);
  CHECK(r1.consistent());
  // exp(-1/0.01)/0.1^10
  CHECK(r1.ratios.back() == doctest::Approx(std::exp(-100.0) * 1e10).epsilon(1e-9));
  CHECK(r1.ratios.back() == doctest::Approx(3.72e-34).epsilon(1e-2));

  CHECK(flatness_probe(cube, 2, radii, 1.0).consistent());

  const auto r3 = flatness_probe(cube, 5, radii, 1.0);
  CHECK_FALSE(r3.consistent());
  REQUIRE(r3.violation_radius.has_value());
  CHECK(*r3.violation_radius == doctest::Approx(0.1));
}

TEST_CASE("flatness_probe on profiles and powers") {
  const auto radii = log_radii(0.5, 1e-2, 30);
  for (double s : {1.0, 2.0}) {
    const auto P = FlatProfile::exp_inverse_power(s);
    for (int n = 0; n <= 20; ++n)
      CHECK(flatness_probe([&](cplx z) { return P.value(std::abs(z)); }, n, radii, 1.0).consistent());
  }
  for (int k = 1; k <= 4; ++k)
    for (int n = k + 1; n <= k + 4; ++n)
      CHECK_FALSE(flatness_probe([k](cplx z) { return std::pow(std::abs(z), k); }, n, radii, 1.0).consistent());
}

TEST_CASE("flatness_probe preconditions and probe failures") {
  auto f = [](cplx z) { return std::abs(z); };
  const std::vector<double> bad{0.1, 0.2};
  CHECK_THROWS(flatness_probe(f, 1, bad, 1.0));
  auto nan_at_small = [](cplx z) { return std::abs(z) < 0.15 ? std::nan("") : 0.0; };
  const std::vector<double> ok{0.3, 0.2, 0.1};
  CHECK_THROWS_AS(flatness_probe(nan_at_small, 1, ok, 1.0), ProbeFailure);
}

TEST_CASE("FlatProfile closed-form logarithm") {
  const auto P = FlatProfile::exp_inverse_power(2.0, 3.0);
  CHECK(P.has_closed_log());
  CHECK(P.log_value(0.5) == doctest::Approx(std::log(3.0) - 4.0));
  CHECK(std::isfinite(P.log_value(1e-3)));
  CHECK(P.value(0.0) == 0.0);
  const double h = 1e-6, r = 0.4;
  CHECK(P.derivative(r) == doctest::Approx((P.value(r + h) - P.value(r - h)) / (2 * h)).epsilon(1e-7));
  CHECK(P.log_derivative(r) == doctest::Approx(P.derivative(r) / P.value(r)).epsilon(1e-12));
}

}
