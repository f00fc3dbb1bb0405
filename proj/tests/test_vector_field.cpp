#include <doctest.h>

#include <cmath>
#include <random>

#include "crlab/errors.hpp"
#include "crlab/vector_field.hpp"

using namespace crlab;

namespace {

FamilyParams params_a1(double alpha) {
  FamilyParams p;
  p.a = TruncatedSeries({cplx{1, 0}});
  p.alpha = alpha;
  p.delta0 = std::min(0.5, FamilyParams::max_delta0(alpha));
  return p;
}

}  // namespace

TEST_SUITE("vector_field") {

TEST_CASE("eval_L_alpha examples") {
  CHECK(eval_L_alpha(0.0, cplx{0, 0.7}) == cplx{0, 0.7});
  CHECK(eval_L_alpha(1.3, 0.0) == cplx{});
  CHECK(eval_L_alpha(1.0, 1.0).real() == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK(eval_L_alpha(1.0, 1.0).real() == doctest::Approx(1.718282).epsilon(1e-6));
  // small alpha z1: no cancellation
  const cplx z{0.3, 0.2};
  const double al = 1e-12;
  const cplx oracle = z + 0.5 * al * z * z;
  CHECK(std::abs(eval_L_alpha(al, z) - oracle) < 1e-16);
  CHECK(std::abs(eval_L_alpha(1e-5, z) - (std::exp(1e-5 * z) - 1.0) / 1e-5) < 1e-10);
}

TEST_CASE("tangency residual examples") {
  RadialSpec rs;
  const auto rad = HypersurfaceModel::radial(rs);
  const auto rot = AnalyticVectorField::rotation(2.5);
  for (const auto& pt : sample_points(rad, default_annulus(rad), {-0.2, 0.0, 0.2}))
    CHECK(std::abs(tangency_residual(rad, rot, pt)) < 1e-10);

  // h1 = 1 does not vanish at the origin
  CHECK_THROWS(AnalyticVectorField::custom([](cplx, cplx) { return cplx{1, 0}; }, [](cplx, cplx) { return cplx{}; }));
}

TEST_CASE("constant h1 has residual 1/2 at the base point") {
  // h1 = 1 through a field that vanishes at 0 is impossible; evaluate Re[rho_z1] directly.
  const auto fam = build_family(params_a1(1.0));
  const RhoGradient g = fam.rho_gradient(0.0, 0.0);
  CHECK((g.rho_z1 * 1.0).real() == doctest::Approx(0.5));
}

TEST_CASE("constant-field obstruction on every model's sample set") {
  for (int d = 0; d < 5; ++d) {
    const auto m = build_family(draw_family(static_cast<std::uint64_t>(d)));
    double best = 0.0;
    for (const auto& pt : sample_points(m, default_annulus(m), {0.0})) {
      const RhoGradient g = m.rho_gradient(pt.z1, pt.z2);
      best = std::max(best, std::abs(g.rho_z1.real()));
    }
    CHECK(best >= 0.25);
  }
}

TEST_CASE("H is tangent to its own hypersurface") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int d = 0; d < 10; ++d) {
    const FamilyParams p = draw_family(100 + static_cast<std::uint64_t>(d));
    const auto m = build_family(p);
    const auto H = AnalyticVectorField::H(p.a, p.alpha);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const cplx z2 = std::polar(0.6 * std::sqrt(u(rng)), 6.283 * u(rng));
      const double t = (2 * u(rng) - 1) * 0.9 * p.delta0;
      worst = std::max(worst, std::abs(tangency_residual(m, H, m.point(z2, t))));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("tangency residual is real-linear in the field") {
  const FamilyParams p = draw_family(3);
  const auto m = build_family(p);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 50; ++rep) {
    PolyVectorField f1(3), f2(3);
    for (int j = 0; j <= 3; ++j)
      for (int k = 0; j + k <= 3; ++k) {
        if (j + k == 0) continue;
        f1.set(PolyVectorField::Component::h1, j, k, {u(rng), u(rng)});
        f1.set(PolyVectorField::Component::h2, j, k, {u(rng), u(rng)});
        f2.set(PolyVectorField::Component::h1, j, k, {u(rng), u(rng)});
        f2.set(PolyVectorField::Component::h2, j, k, {u(rng), u(rng)});
      }
    const double c1 = u(rng), c2 = u(rng);
    const SurfacePoint pt = m.point(std::polar(0.3, 3 * u(rng)), 0.1 * u(rng));
    const double r1 = tangency_residual(m, f1, pt), r2 = tangency_residual(m, f2, pt);
    const double lhs = tangency_residual(m, f1 * c1 + f2 * c2, pt);
    const double rhs = c1 * r1 + c2 * r2;
    const double scale = std::abs(c1 * r1) + std::abs(c2 * r2) + std::max(f1.max_abs(), f2.max_abs());
    CHECK(std::abs(lhs - rhs) <= 4 * std::numeric_limits<double>::epsilon() * scale * 8);
  }
}

TEST_CASE("identity residual examples") {
  const FamilyFunctions fn(params_a1(1.0));
  const auto r = identity_residuals(fn, 0.3, 0.1);
  for (double x : r) CHECK(x < 1e-10);
  const auto r0 = identity_residuals(fn, cplx{0.2, 0.1}, 0.0);
  CHECK(r0[3] == 0.0);
  const FamilyFunctions fn0(params_a1(0.0));
  const auto z = identity_residuals(fn0, cplx{0.2, 0.1}, 0.2);
  CHECK(z[2] == 0.0);
  CHECK(z[3] == 0.0);
  CHECK(z[4] < 1e-15);
  CHECK_THROWS_AS(identity_residuals(fn, 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(identity_residuals(fn, 0.3, 0.6), DomainError);
}

TEST_CASE("identity residuals vanish on the 32 x 8 x 5 grid for random draws") {
  for (int d = 0; d < 10; ++d) {
    const FamilyParams p = draw_family(200 + static_cast<std::uint64_t>(d));
    const FamilyFunctions fn(p);
    const auto m = build_family(p);
    const double tm = 0.5 * p.delta0;
    const auto rows = identity_grid(fn, default_annulus(m, 8, 32), {-tm, -tm / 2, 0.0, tm / 2, tm});
    CHECK(rows.size() == 32u * 8u * 5u);
    double worst = 0.0;
    for (const auto& r : rows)
      for (double x : r.res) worst = std::max(worst, x);
    CHECK(worst < 1e-10);
    const auto ser = identity_grid_serial(fn, default_annulus(m, 8, 32), {-tm, 0.0, tm});
    const auto par = identity_grid(fn, default_annulus(m, 8, 32), {-tm, 0.0, tm});
    for (std::size_t i = 0; i < ser.size(); ++i) CHECK(ser[i].res == par[i].res);
  }
}

TEST_CASE("taylor_of_field examples") {
  const auto rot = taylor_of_field(AnalyticVectorField::rotation(1.5), 3);
  CHECK(rot.b(0, 1) == cplx{0, 1.5});
  CHECK(rot.max_abs() == doctest::Approx(1.5));

  const TruncatedSeries a({cplx{1, 0}});
  const auto h0 = taylor_of_field(AnalyticVectorField::H(a, 0.0), 3);
  CHECK(h0.a(1, 1) == cplx{1, 0});
  CHECK(h0.b(0, 1) == cplx{0, 1});
  for (int j = 0; j <= 3; ++j)
    for (int k = 0; j + k <= 3; ++k)
      if (!(j == 1 && k == 1)) CHECK(h0.a(j, k) == cplx{});

  const auto h1 = taylor_of_field(AnalyticVectorField::H(a, 1.0), 2);
  CHECK(h1.a(1, 1) == cplx{1, 0});
  CHECK(h1.a(2, 1) == cplx{});  // total degree 3 is beyond N = 2
  const auto h1b = taylor_of_field(AnalyticVectorField::H(a, 1.0), 3);
  CHECK(h1b.a(2, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("taylor_of_field reproduces H at small arguments") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int d = 0; d < 5; ++d) {
    const FamilyParams p = draw_family(300 + static_cast<std::uint64_t>(d));
    const auto H = AnalyticVectorField::H(p.a, p.alpha);
    const auto T = taylor_of_field(H, 16);
    for (int i = 0; i < 50; ++i) {
      const cplx z1 = std::polar(0.1 * u(rng), 6.283 * u(rng));
      const cplx z2 = std::polar(0.3 * u(rng), 6.283 * u(rng));
      CHECK(std::abs(T.h1(z1, z2) - H.h1(z1, z2)) < 1e-10);
      CHECK(std::abs(T.h2(z1, z2) - H.h2(z1, z2)) < 1e-10);
    }
  }
}

TEST_CASE("custom fields go through the Cauchy integral") {
  const auto f = AnalyticVectorField::custom([](cplx z1, cplx z2) { return z1 * z2 + 2.0 * z2 * z2; },
                                             [](cplx z1, cplx) { return cplx(0, 3) * z1; });
  const auto T = taylor_of_field(f, 4);
  CHECK(std::abs(T.a(1, 1) - 1.0) < 1e-12);
  CHECK(std::abs(T.a(0, 2) - 2.0) < 1e-12);
  CHECK(std::abs(T.b(1, 0) - cplx(0, 3)) < 1e-12);
  CHECK(std::abs(T.a(2, 0)) < 1e-12);
}

TEST_CASE("PolyVectorField structure") {
  PolyVectorField f(2);
  CHECK_THROWS_AS(f.set(PolyVectorField::Component::h1, 0, 0, 1.0), PreconditionError);
  CHECK_THROWS_AS(f.set(PolyVectorField::Component::h1, 2, 1, 1.0), PreconditionError);
  f.set(PolyVectorField::Component::h2, 1, 1, cplx{2, -1});
  CHECK(f.h2(cplx{0.5, 0}, cplx{0, 2}) == cplx{2, -1} * 0.5 * cplx{0, 2});
  CHECK(f.h1(0.0, 0.0) == cplx{});
}

}
