// Acceptance suite: one PASS/FAIL line per criterion, with wall time.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "crlab/cr_dim.hpp"
#include "crlab/flow_lab.hpp"
#include "crlab/hypersurface.hpp"
#include "crlab/vector_field.hpp"

using namespace crlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0.0 || dt < limit_s;
  if (!in_time) o.detail += " (over the " + std::to_string(static_cast<int>(limit_s)) + " s limit)";
  const bool ok = o.pass && in_time;
  failures += !ok;
  std::printf("criterion %d: %s (%.2f s) %s\n", id, ok ? "PASS" : "FAIL", dt, o.detail.c_str());
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

constexpr int kDraws = 10;

FamilyParams draw(int i) { return draw_family(1000 + static_cast<std::uint64_t>(i)); }

std::vector<double> t_grid(double delta0) {
  const double tm = 0.5 * delta0;
  return {-tm, -0.5 * tm, 0.0, 0.5 * tm, tm};
}

// Central differences in the four real coordinates, Wirtinger-combined.
RhoGradient fd_gradient(const HypersurfaceModel& m, cplx z1, cplx z2) {
  const double h = 1e-6;
  auto d = [&](cplx dz1, cplx dz2) { return (m.rho(z1 + dz1, z2 + dz2) - m.rho(z1 - dz1, z2 - dz2)) / (2 * h); };
  return {0.5 * cplx(d({h, 0}, {}), -d({0, h}, {})), 0.5 * cplx(d({}, {h, 0}), -d({}, {0, h}))};
}

FlowSpec case3(int k, int m, int n, cplx a, cplx b) {
  FlowSpec s;
  s.ell = k + 1;
  s.b = b;
  s.m = m;
  s.n = n;
  s.a = a;
  s.z0 = 0.1;
  s.t0 = 1.0 / (k * std::abs(b) * std::pow(0.1, k));
  s.t_end = 1e4 * s.t0;
  s.P = FlatProfile::exp_inverse_power(1.0);
  return s;
}

}  // namespace

int main() {
  criterion(1, 10.0, [] {
    double worst = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const FamilyParams p = draw(i);
      const auto m = build_family(p);
      for (const auto& row : identity_grid(FamilyFunctions(p), default_annulus(m, 8, 32), t_grid(p.delta0)))
        for (double r : row.res) worst = std::max(worst, r);
    }
    return Outcome{worst < 1e-10, "identity suite over 10 draws, max residual " + sci(worst)};
  });

  criterion(2, 0.0, [] {
    double worst = 0.0;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < kDraws; ++i) {
      const FamilyParams p = draw(i);
      const auto m = build_family(p);
      const auto H = AnalyticVectorField::H(p.a, p.alpha);
      for (int n = 0; n < 1000; ++n) {
        const cplx z2 = std::polar(p.eps0 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
        const double t = (2 * u(rng) - 1) * 0.9 * p.delta0;
        worst = std::max(worst, std::abs(tangency_residual(m, H, m.point(z2, t))));
      }
    }
    return Outcome{worst < 1e-9, "tangency of H on its own hypersurface, 10 x 1000 points, max " + sci(worst)};
  });

  criterion(3, 0.0, [] {
    double worst = 0.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < kDraws; ++i) {
      const FamilyParams p = draw(i);
      const auto m = build_family(p);
      for (int n = 0; n < 200; ++n) {
        const cplx z2 = std::polar(0.1 + 0.5 * u(rng), 2 * std::numbers::pi * u(rng));
        const double t = (2 * u(rng) - 1) * 0.5 * p.delta0;
        const SurfacePoint pt = m.point(z2, t);
        const RhoGradient g = m.rho_gradient(pt.z1, pt.z2);
        const RhoGradient f = fd_gradient(m, pt.z1, pt.z2);
        const double num = std::hypot(std::abs(g.rho_z1 - f.rho_z1), std::abs(g.rho_z2 - f.rho_z2));
        const double den = std::hypot(std::abs(g.rho_z1), std::abs(g.rho_z2));
        worst = std::max(worst, num / den);
      }
    }
    return Outcome{worst < 1e-6, "gradient vs central differences, 10 x 200 points, max relative " + sci(worst)};
  });

  criterion(4, 0.0, [] {
    double worst_fit = 0.0, worst_ref = 0.0;
    for (int k = 1; k <= 4; ++k)
      for (cplx b : {cplx(-1, 0), cplx(-1, 1), cplx(-0.3, 1)}) {
        const BranchReference ref{1.0, b, k, 0, BranchReference::window_for(b)};
        FlowSpec s;
        s.ell = k + 1;
        s.b = b;
        s.t0 = 1.0;
        s.z0 = reference_omega(ref, 1.0);

        s.t_end = 1e4;
        s.g0 = {0.5, 1};
        const auto tr = integrate_flow(s, {}, 1e-11);
        if (tr.terminated != Termination::reached_t_end) return Outcome{false, "trajectory terminated early"};
        const auto fit = fit_power_law(tr, 1e2, 1e4);
        worst_fit = std::max(worst_fit, std::abs(fit.slope * k + 1.0));

        s.g0 = {};
        s.t_end = 100.0;
        const auto tr0 = integrate_flow(s, {}, 1e-11);
        for (std::size_t i = 0; i < tr0.times.size(); ++i) {
          const cplx w = reference_omega(ref, tr0.times[i]);
          worst_ref = std::max(worst_ref, std::abs(tr0.points[i] - w) / std::abs(w));
        }
      }
    return Outcome{worst_fit < 0.02 && worst_ref < 1e-6,
                   "worst exponent deviation " + sci(100 * worst_fit) + "% of 1/k, worst closed-form deviation " +
                       sci(worst_ref)};
  });

  criterion(5, 60.0, [] {
    std::vector<std::pair<FlowSpec, CaseLabel>> runs;
    FlowSpec c1;
    c1.ell = 0;
    c1.b = 1.0;
    c1.g0 = {0.5, 1};
    c1.z0 = 0.0;
    c1.t_end = 0.1;
    c1.P = FlatProfile::exp_inverse_power(1.0);
    runs.emplace_back(c1, CaseLabel::ell0);
    FlowSpec c2;
    c2.ell = 1;
    c2.b = {-1.0, 0.5};
    c2.z0 = 0.3;
    c2.t_end = 10.0;
    c2.m = 0;
    c2.P = FlatProfile::exp_inverse_power(1.0);
    runs.emplace_back(c2, CaseLabel::ell1);
    runs.emplace_back(case3(2, 1, 1, 1.0, -1.0), CaseLabel::subcase_3_1);
    runs.emplace_back(case3(2, 3, 0, 1.0, -1.0), CaseLabel::subcase_3_2_1);
    runs.emplace_back(case3(2, 2, 0, 1.0, -1.0), CaseLabel::subcase_3_2_2);
    runs.emplace_back(case3(2, 0, 0, -1.0, -1.0), CaseLabel::subcase_3_2_3);
    runs.emplace_back(case3(3, 1, 0, 1.0, -1.0), CaseLabel::subcase_3_2_4);
    bool ok = true;
    double worst_x = 0.0;
    std::string detail;
    for (const auto& [spec, label] : runs) {
      const auto r = lemma3_scenario(spec, label);
      const bool pass = r.agreement && !r.inconclusive && r.u_crosscheck < 1e-4;
      ok = ok && pass;
      worst_x = std::max(worst_x, r.u_crosscheck);
      detail += std::string(to_string(label)) + "=" + to_string(r.growth_class) + (pass ? "" : "(!)") + " ";
    }
    return Outcome{ok, detail + "max u' cross-check " + sci(worst_x)};
  });

  criterion(6, 0.0, [] {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    double least = 1.0;
    int pairs = 0;
    for (int k = 2; k <= 12; ++k)
      for (int m = 1; m < k; ++m) {
        if (std::gcd(m, k) != 1) continue;
        ++pairs;
        for (int rep = 0; rep < 100; ++rep) {
          cplx a{u(rng), u(rng)}, b{u(rng), u(rng)};
          least = std::min(least, select_branch(a, b, m, k).second);
        }
      }
    return Outcome{least > 0.0, std::to_string(pairs) + " coprime pairs x 100 draws, least cosine " + sci(least)};
  });

  criterion(7, 120.0, [] {
    constexpr int N = 6;
    RadialSpec rs;
    rs.P = FlatProfile::exp_inverse_power(2.0);
    const auto rad = HypersurfaceModel::radial(rs);
    const auto srad = assemble(rad, N, CollocationGrid::standard(rad, N));
    const auto rrad = nullspace(srad);
    double angle_a = 10.0;
    if (rrad.null_dim == 1)
      angle_a = line_angle(rrad.basis_vectors[0],
                           flatten(taylor_of_field(AnalyticVectorField::rotation(1.0), N), srad.columns));
    const bool a_ok = rrad.null_dim == 1 && rrad.gap_ratio >= 1e4 && angle_a < 1e-3;

    FamilyParams fp;
    fp.a = TruncatedSeries({cplx{1, 0}});
    fp.alpha = 1.0;
    fp.delta0 = 0.5;
    const auto fam = build_family(fp);
    const auto sfam = assemble(fam, N, CollocationGrid::standard(fam, N));
    const auto rfam = nullspace(sfam);
    double angle_b = 10.0;
    if (rfam.null_dim == 1)
      angle_b = line_angle(rfam.basis_vectors[0],
                           flatten(taylor_of_field(AnalyticVectorField::H(fp.a, 1.0), N), sfam.columns));
    const bool b_ok = rfam.null_dim == 1 && rfam.gap_ratio >= 1e4 && angle_b < 1e-3;

    int max_dim = 0, ones = 0, determined = 0;
    for (int i = 0; i < 20; ++i) {
      const auto m = build_family(draw_family(7000 + static_cast<std::uint64_t>(i)));
      const auto r = nullspace(assemble(m, N, CollocationGrid::standard(m, N)));
      max_dim = std::max(max_dim, r.null_dim);
      ones += r.null_dim == 1;
      determined += r.verdict == DimVerdict::determined;
    }
    const bool c_ok = max_dim <= 1;
    return Outcome{a_ok && b_ok && c_ok,
                   "radial null_dim " + std::to_string(rrad.null_dim) + " gap " + sci(rrad.gap_ratio) + " angle " +
                       sci(angle_a) + "; family null_dim " + std::to_string(rfam.null_dim) + " gap " +
                       sci(rfam.gap_ratio) + " angle " + sci(angle_b) + "; 20 draws max null_dim " +
                       std::to_string(max_dim) + " (" + std::to_string(ones) + " of dim 1, " +
                       std::to_string(determined) + " determined)"};
  });

  criterion(8, 0.0, [] {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto P = FlatProfile::exp_inverse_power(2.0);
    const auto radii = log_radii(0.5, 0.05, 10);
    int total = 0, certified = 0;
    for (int k : {0, 1, 2, 3})
      for (int rep = 0; rep < 25; ++rep) {
        cplx b{u(rng), u(rng)};
        if (k == 1 && std::abs(b.real()) < 1e-3) continue;
        const Perturbation g{cplx(u(rng), u(rng)), k + 1 + rep % 3};
        const auto r = lemma25_probe(b, k, g, P, radii);
        ++total;
        certified += r.certified && !r.inconclusive;
      }
    return Outcome{certified == total, std::to_string(certified) + " of " + std::to_string(total) +
                                           " probes certified nonzero (k in {0,1,2,3})"};
  });

  criterion(9, 0.0, [] {
    bool ok = true;
    for (int i = 0; i < kDraws; ++i) {
      const auto m = build_family(draw(i));
      FlatnessOptions fo;
      fo.domain_radius = m.eps0();
      const auto radii = log_radii(0.5 * m.eps0(), 0.02 * m.eps0(), 24);
      for (int n = 0; n <= 12; ++n) {
        ok = ok && flatness_probe([&](cplx z) { return m.P(z); }, n, radii, 1.0, fo).consistent();
        ok = ok && flatness_probe([&](cplx z) { return std::abs(m.P_z2(z)); }, n, radii, 1.0, fo).consistent();
      }
    }
    const std::vector<double> r3{0.3, 0.2, 0.1};
    const auto cube = flatness_probe([](cplx z) { return std::pow(std::abs(z), 3.0); }, 5, r3, 1.0);
    return Outcome{ok && !cube.consistent(), std::string("P and |P_z| flat for n <= 12 on 10 draws: ") +
                                                 (ok ? "yes" : "no") + "; |z|^3 at n = 5: " +
                                                 (cube.consistent() ? "consistent" : "violates")};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
