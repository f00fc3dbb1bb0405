#include "crlab/flow_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "crlab/errors.hpp"

namespace crlab {

namespace {

constexpr double kPi = std::numbers::pi;

cplx ipow(cplx z, int p) {
  cplx out{1.0, 0.0};
  for (int i = 0; i < p; ++i) out *= z;
  return out;
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, stderr_ = 0.0, r2 = 0.0;
  int n = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.n = static_cast<int>(x.size());
  if (f.n < 2) return f;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / f.n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / f.n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < f.n; ++i) {
    const double dx = x[static_cast<std::size_t>(i)] - mx, dy = y[static_cast<std::size_t>(i)] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double ssr = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  f.stderr_ = f.n > 2 ? std::sqrt(ssr / (f.n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace

cplx Perturbation::operator()(cplx z) const {
  if (is_zero()) return {};
  return scale * ipow(z, power);
}

cplx FlowSpec::rhs(cplx z) const { return b * ipow(z, ell) * (1.0 + g0(z)); }

void FlowSpec::validate() const {
  if (ell < 0 || m < 0 || n < 0) throw PreconditionError("ell, m and n must be non-negative");
  if (ell == 1 && b.real() == 0.0) throw PreconditionError("excluded pair: ell = 1 with Re b = 0");
  if (m == 0 && a.real() == 0.0) throw PreconditionError("excluded pair: m = 0 with Re a = 0");
  if (!g0.is_zero() && g0.power < 1) throw PreconditionError("g0 must be O(|z|)");
  if (!g1.is_zero() && g1.power < ell) throw PreconditionError("g1 must be O(|z|^ell)");
  if (!g2.is_zero() && g2.power <= m) throw PreconditionError("g2 must be o(|z|^m)");
  if (!(t_end > t0)) throw PreconditionError("t_end must exceed t0");
}

std::vector<double> sample_times(double t0, double t_end, int n, SampleSpacing spacing) {
  if (n < 2) throw PreconditionError("need at least two output times");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (spacing == SampleSpacing::linear) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = t0 + (t_end - t0) * i / (n - 1);
  } else if (t0 > 0.0) {
    const double l0 = std::log(t0), l1 = std::log(t_end);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(l0 + (l1 - l0) * i / (n - 1));
  } else if (t0 == 0.0) {
    out[0] = 0.0;
    const double l0 = std::log(1e-6 * t_end), l1 = std::log(t_end);
    for (int i = 1; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(l0 + (l1 - l0) * (i - 1) / (n - 2));
  } else {
    throw PreconditionError("log spacing needs t0 >= 0");
  }
  out.front() = t0;
  out.back() = t_end;
  return out;
}

Trajectory integrate_flow(const FlowSpec& spec, const Annulus& annulus, double tol,
                          const IntegratorOptions& opts) {
  spec.validate();
  if (!(tol >= 1e-12 && tol <= 1e-6)) throw PreconditionError("tol must lie in [1e-12, 1e-6]");
  const double r0 = std::abs(spec.z0);
  if (r0 < annulus.r_min || r0 > annulus.r_max) throw PreconditionError("z0 outside the annulus");

  // Dormand-Prince 5(4)
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double rtol = tol, atol = tol * 1e-3;
  Trajectory tr;
  tr.stats.tol = tol;
  const auto outs = sample_times(spec.t0, spec.t_end, opts.n_samples, opts.spacing);
  tr.times.reserve(outs.size());
  tr.points.reserve(outs.size());
  tr.times.push_back(outs[0]);
  tr.points.push_back(spec.z0);

  double t = spec.t0;
  cplx y = spec.z0;
  cplx k1 = spec.rhs(y);
  ++tr.stats.rhs_evals;
  double h = 0.01 * std::max(std::abs(y), 1e-3) / std::max(std::abs(k1), 1e-300);
  h = std::min(h, spec.t_end - spec.t0);
  tr.stats.min_step = std::numeric_limits<double>::infinity();

  std::size_t next = 1;
  long steps = 0;
  while (next < outs.size()) {
    if (++steps > opts.max_steps) throw NumericalError("integrate_flow exceeded the step budget");
    const double target = outs[next];
    bool hits = false;
    double hs = h;
    if (t + hs >= target - 1e-12 * std::abs(target)) {
      hs = target - t;
      hits = true;
    }
    if (hs < 1e-14 * std::max(1.0, std::abs(t))) {
      tr.terminated = Termination::step_underflow;
      break;
    }
    const cplx k2 = spec.rhs(y + hs * (a21 * k1));
    const cplx k3 = spec.rhs(y + hs * (a31 * k1 + a32 * k2));
    const cplx k4 = spec.rhs(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const cplx k5 = spec.rhs(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const cplx k6 = spec.rhs(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const cplx ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const cplx k7 = spec.rhs(ynew);
    tr.stats.rhs_evals += 6;
    const cplx errv = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double sc = atol + rtol * std::max(std::abs(y), std::abs(ynew));
    const double err = std::abs(errv) / sc;
    if (!std::isfinite(err)) {
      ++tr.stats.rejected;
      h = 0.2 * hs;
      continue;
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err > 1.0) {
      ++tr.stats.rejected;
      h = hs * fac;
      continue;
    }
    ++tr.stats.accepted;
    tr.stats.min_step = std::min(tr.stats.min_step, hs);
    tr.stats.max_step = std::max(tr.stats.max_step, hs);
    const double rn = std::abs(ynew);
    if (rn < annulus.r_min || rn > annulus.r_max) {
      tr.terminated = Termination::exited_annulus;
      break;
    }
    t = hits ? target : t + hs;
    y = ynew;
    k1 = k7;
    // A step shortened to land on an output time does not shrink the proposal.
    h = hits ? std::max(h, hs * fac) : hs * fac;
    if (hits) {
      tr.times.push_back(t);
      tr.points.push_back(y);
      ++next;
    }
  }
  if (tr.stats.accepted == 0) tr.stats.min_step = 0.0;
  return tr;
}

// ---------------------------------------------------------------------------

BranchWindow BranchReference::window_for(cplx b) {
  return b.imag() != 0.0 ? BranchWindow::arg_in_0_2pi : BranchWindow::arg_in_minus_half_pi_3half_pi;
}

double windowed_arg(cplx w, BranchWindow window) {
  if (w == cplx{}) throw BranchError("root of zero requested");
  double th = std::atan2(w.imag(), w.real());
  if (window == BranchWindow::arg_in_0_2pi) {
    if (w.imag() == 0.0 && w.real() > 0.0) throw BranchError("argument on the cut [0, +inf)");
    if (th < 0.0) th += 2.0 * kPi;
  } else {
    if (w.real() == 0.0 && w.imag() < 0.0) throw BranchError("argument on the cut (-i inf, 0]");
    if (th < -0.5 * kPi) th += 2.0 * kPi;
  }
  return th;
}

namespace {

cplx omega_of(cplx w, int k, int j, BranchWindow window) {
  const double th = windowed_arg(w, window);
  const double mag = std::pow(std::abs(w), -1.0 / k);
  return std::polar(mag, -th / k - 2.0 * kPi * j / k);
}

}  // namespace

BranchReference BranchReference::through(cplx b, int k, cplx z0, double t0) {
  if (k < 1) throw PreconditionError("branch reference needs k >= 1");
  if (z0 == cplx{}) throw PreconditionError("branch reference needs z0 != 0");
  BranchReference ref;
  ref.b = b;
  ref.k = k;
  ref.window = window_for(b);
  ref.c = 1.0 / ipow(z0, k) + static_cast<double>(k) * b * t0;
  double best = std::numeric_limits<double>::infinity();
  int best_j = 0;
  for (int j = 0; j < k; ++j) {
    ref.j = j;
    const double d = std::abs(reference_omega(ref, t0) - z0);
    if (d < best) {
      best = d;
      best_j = j;
    }
  }
  ref.j = best_j;
  return ref;
}

cplx reference_omega(const BranchReference& ref, double t) {
  const cplx w = ref.c - static_cast<double>(ref.k) * ref.b * t;
  try {
    return omega_of(w, ref.k, ref.j, ref.window);
  } catch (const BranchError& e) {
    std::ostringstream msg;
    msg.precision(17);
    msg << e.what() << " at t = " << t;
    throw BranchError(msg.str());
  }
}

bool crosses_cut(const BranchReference& ref, double t_lo, double t_hi) {
  const cplx d = -static_cast<double>(ref.k) * ref.b;
  const cplx c = ref.c;
  // Cut as the set {w : across(w) == 0, along(w) >= 0}.
  const bool real_cut = ref.window == BranchWindow::arg_in_0_2pi;
  const double c_across = real_cut ? c.imag() : c.real();
  const double d_across = real_cut ? d.imag() : d.real();
  auto along = [&](double t) {
    const cplx w = c + d * t;
    return real_cut ? w.real() : -w.imag();
  };
  if (d_across == 0.0) {
    if (c_across != 0.0) return false;
    return along(t_lo) >= 0.0 || along(t_hi) >= 0.0;
  }
  const double ts = -c_across / d_across;
  return ts >= t_lo && ts <= t_hi && along(ts) >= 0.0;
}

std::vector<cplx> measure_epsilon(const BranchReference& ref, const Trajectory& traj) {
  std::vector<cplx> out;
  out.reserve(traj.times.size());
  const cplx kb = static_cast<double>(ref.k) * ref.b;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t <= 0.0) continue;
    out.push_back((ref.c - 1.0 / ipow(traj.points[i], ref.k)) / (kb * t) - 1.0);
  }
  return out;
}

// ---------------------------------------------------------------------------

PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 50) throw PreconditionError("fit_power_law needs at least 50 samples in the window");
  const LineFit f = fit_line(lx, ly);
  PowerLawFit out;
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.stderr_ = f.stderr_;
  out.samples = f.n;
  out.is_power_law = f.stderr_ <= 0.05;
  return out;
}

PowerLawFit fit_power_law(const Trajectory& traj, double t_lo, double t_hi) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] >= t_lo && traj.times[i] <= t_hi) {
      t.push_back(traj.times[i]);
      y.push_back(std::abs(traj.points[i]));
    }
  }
  return fit_power_law(t, y);
}

cplx log_P_z(const FlatProfile& P, cplx z) {
  const double r = std::abs(z);
  if (r == 0.0) return {};
  return P.log_derivative(r) * std::conj(z) / (2.0 * r);
}

cplx P_z(const FlatProfile& P, cplx z) {
  const double r = std::abs(z);
  if (r == 0.0) return {};
  return P.derivative(r) * std::conj(z) / (2.0 * r);
}

UProbe u_probe(const FlatProfile& P, const Trajectory& traj) {
  UProbe out;
  const std::size_t n = traj.times.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::abs(traj.points[i]);
    if (!P.has_closed_log() && r > 0.0 && P.value(r) == 0.0) {
      out.truncated = true;
      out.truncated_at = i;
      break;
    }
    out.times.push_back(traj.times[i]);
    out.u.push_back(0.5 * P.log_value(r));
  }
  const std::size_t m = out.u.size();
  out.du.assign(m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double um = out.u[i - 1], u0 = out.u[i], up = out.u[i + 1];
    if (!std::isfinite(um) || !std::isfinite(u0) || !std::isfinite(up)) continue;
    const double h1 = out.times[i] - out.times[i - 1], h2 = out.times[i + 1] - out.times[i];
    out.du[i] = -h2 / (h1 * (h1 + h2)) * um + (h2 - h1) / (h1 * h2) * u0 + h1 / (h2 * (h1 + h2)) * up;
  }
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::ell0: return "ell0";
    case CaseLabel::ell1: return "ell1";
    case CaseLabel::subcase_3_1: return "subcase_3_1";
    case CaseLabel::subcase_3_2_1: return "subcase_3_2_1";
    case CaseLabel::subcase_3_2_2: return "subcase_3_2_2";
    case CaseLabel::subcase_3_2_3: return "subcase_3_2_3";
    case CaseLabel::subcase_3_2_4: return "subcase_3_2_4";
    case CaseLabel::lemma_2_5: return "lemma_2_5";
  }
  return "?";
}

const char* to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::bounded: return "bounded";
    case GrowthClass::logarithmic: return "logarithmic";
    case GrowthClass::linear: return "linear";
    case GrowthClass::power: return "power";
    case GrowthClass::undetermined: return "undetermined";
  }
  return "?";
}

std::optional<CaseLabel> case_from_string(const std::string& s) {
  for (auto c : {CaseLabel::ell0, CaseLabel::ell1, CaseLabel::subcase_3_1, CaseLabel::subcase_3_2_1,
                 CaseLabel::subcase_3_2_2, CaseLabel::subcase_3_2_3, CaseLabel::subcase_3_2_4,
                 CaseLabel::lemma_2_5})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

GrowthFit classify_growth(const std::vector<double>& t, const std::vector<double>& u,
                          const std::vector<double>& du, double t_lo, double t_hi) {
  std::vector<double> tw, uw, lt, ldu;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi || !std::isfinite(u[i])) continue;
    tw.push_back(t[i]);
    uw.push_back(u[i]);
    if (t[i] > 0.0 && std::isfinite(du[i]) && du[i] != 0.0) {
      lt.push_back(std::log(t[i]));
      ldu.push_back(std::log(std::abs(du[i])));
    }
  }
  GrowthFit g;
  if (tw.size() < 3) return g;
  for (std::size_t i = 1; i < uw.size(); ++i) g.total_variation += std::abs(uw[i] - uw[i - 1]);
  const LineFit pw = fit_line(lt, ldu);
  g.exponent = 1.0 + pw.slope;
  std::vector<double> logt;
  for (double x : tw) logt.push_back(std::log(std::max(x, std::numeric_limits<double>::min())));
  g.r2_log = fit_line(logt, uw).r2;
  const LineFit lin = fit_line(tw, uw);
  g.r2_linear = lin.r2;
  g.linear_slope = lin.slope;
  if (g.total_variation < 1.0)
    g.growth = GrowthClass::bounded;
  else if (g.r2_log > 0.99 && std::abs(g.exponent) < 0.05)
    g.growth = GrowthClass::logarithmic;
  else if (g.r2_linear > 0.99)
    g.growth = GrowthClass::linear;
  else
    g.growth = GrowthClass::power;
  return g;
}

std::pair<int, double> select_branch(cplx a, cplx b, int m, int k) {
  if (a == cplx{} || b == cplx{}) throw PreconditionError("select_branch needs ab != 0");
  if (k < 1) throw PreconditionError("select_branch needs k >= 1");
  const double arg_ab = std::arg(a / b);
  const double arg_mb = windowed_arg(-b, BranchReference::window_for(b));
  int best_j = 0;
  double best = -2.0;
  for (int j = 0; j < k; ++j) {
    const double c = std::cos(arg_ab + (static_cast<double>(k - m) / k) * arg_mb - 2.0 * kPi * m * j / k);
    if (c > best) {
      best = c;
      best_j = j;
    }
  }
  return {best_j, best};
}

namespace {

void check_label(const FlowSpec& s, CaseLabel label) {
  auto fail = [&](const char* why) {
    throw PreconditionError(std::string("parameters do not match ") + to_string(label) + ": " + why);
  };
  const int k = s.k();
  switch (label) {
    case CaseLabel::ell0:
      if (s.ell != 0) fail("needs ell = 0");
      break;
    case CaseLabel::ell1:
      if (s.ell != 1) fail("needs ell = 1");
      break;
    case CaseLabel::subcase_3_1:
      if (s.ell < 2 || s.n < 1) fail("needs ell >= 2 and n >= 1");
      break;
    case CaseLabel::subcase_3_2_1:
      if (s.ell < 2 || s.n != 0 || s.m <= k) fail("needs ell >= 2, n = 0, m > k");
      break;
    case CaseLabel::subcase_3_2_2:
      if (s.ell < 2 || s.n != 0 || s.m != k) fail("needs ell >= 2, n = 0, m = k");
      break;
    case CaseLabel::subcase_3_2_3:
      if (s.ell < 2 || s.n != 0 || s.m != 0) fail("needs ell >= 2, n = 0, m = 0");
      break;
    case CaseLabel::subcase_3_2_4:
      if (s.ell < 2 || s.n != 0 || s.m <= 0 || s.m >= k) fail("needs ell >= 2, n = 0, 0 < m < k");
      break;
    case CaseLabel::lemma_2_5:
      fail("use lemma25_probe");
  }
}

}  // namespace

GrowthReport lemma3_scenario(const FlowSpec& spec_in, CaseLabel label, const ScenarioOptions& opts) {
  spec_in.validate();
  check_label(spec_in, label);
  if (spec_in.a == cplx{} || spec_in.b == cplx{}) throw PreconditionError("scenario needs ab != 0");

  GrowthReport rep;
  rep.case_label = label;
  FlowSpec run = spec_in;
  IntegratorOptions iopt;
  iopt.n_samples = opts.n_samples;
  double w_lo = run.t0, w_hi = run.t_end;
  bool toward_eq_is_backward = false;
  std::optional<BranchReference> ref;

  switch (label) {
    case CaseLabel::ell0:
      rep.predicted = "bounded";
      iopt.spacing = SampleSpacing::log;
      toward_eq_is_backward = true;
      break;
    case CaseLabel::ell1: {
      rep.predicted = "bounded|logarithmic|linear";
      iopt.spacing = SampleSpacing::linear;
      const cplx b = spec_in.b;
      rep.r1 = b.imag() == 0.0 ? 0.5 : std::min(0.5, std::abs(b.real()) / (4.0 * std::abs(b.imag())));
      if (b.real() > 0.0) {
        run.b = -b;
        rep.mirrored_time = true;
      }
      break;
    }
    default: {
      const int k = run.k();
      iopt.spacing = SampleSpacing::log;
      if (run.t0 <= 0.0) throw PreconditionError("ell >= 2 scenarios need t0 > 0");
      BranchReference r = BranchReference::through(run.b, k, run.z0, run.t0);
      if (label == CaseLabel::subcase_3_2_4) {
        auto [j, cosv] = select_branch(run.a, run.b, run.m, k);
        r.j = j;
        rep.max_cosine = cosv;
      } else {
        r.j = 0;
      }
      rep.branch = r.j;
      if (crosses_cut(r, run.t0, run.t_end)) {
        rep.inconclusive = true;
        rep.note = "c - k b t meets the branch cut inside the time span";
        return rep;
      }
      run.z0 = reference_omega(r, run.t0);
      ref = r;
      w_lo = run.t_end / 100.0;
      switch (label) {
        case CaseLabel::subcase_3_1:
        case CaseLabel::subcase_3_2_1:
          rep.predicted = "bounded";
          break;
        case CaseLabel::subcase_3_2_2:
          rep.predicted = "logarithmic";
          break;
        case CaseLabel::subcase_3_2_3:
          rep.predicted = run.a.real() < 0.0 ? "linear, increasing" : "linear, decreasing";
          break;
        default: {
          std::ostringstream p;
          p << "power(" << 1.0 - static_cast<double>(run.m) / k << "), increasing";
          rep.predicted = p.str();
        }
      }
    }
  }

  const Trajectory traj = integrate_flow(run, Annulus{}, opts.tol, iopt);
  if (traj.terminated != Termination::reached_t_end) {
    rep.inconclusive = true;
    rep.note = traj.terminated == Termination::exited_annulus ? "trajectory left the annulus"
                                                              : "step underflow";
    return rep;
  }
  if (rep.r1) {
    double mx = 0.0;
    for (cplx z : traj.points) mx = std::max(mx, std::abs(z));
    if (mx >= *rep.r1) rep.note = "trajectory is not contained in the r1 disc";
  }
  if (ref) {
    double e = 0.0;
    const auto eps = measure_epsilon(*ref, traj);
    for (std::size_t i = 1; i < eps.size(); ++i) e = std::max(e, std::abs(eps[i]));
    rep.eps_max = e;
  }

  const UProbe up = u_probe(run.P, traj);
  if (up.truncated) {
    rep.inconclusive = true;
    rep.note = "P underflows along the trajectory";
    return rep;
  }

  const std::size_t N = up.times.size();
  // Two-way u': finite differences of u against the chain rule Re[(log P)_z gamma'].
  double cr_max = 0.0;
  std::vector<double> cr(N);
  for (std::size_t i = 0; i < N; ++i) {
    cr[i] = (log_P_z(run.P, traj.points[i]) * run.rhs(traj.points[i])).real();
    if (std::isfinite(up.du[i])) cr_max = std::max(cr_max, std::abs(cr[i]));
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (!std::isfinite(up.du[i])) continue;
    const double den = std::max(std::abs(cr[i]), 1e-12 * cr_max);
    if (den > 0.0) gap = std::max(gap, std::abs(up.du[i] - cr[i]) / den);
  }
  rep.u_crosscheck = gap;
  rep.crosscheck_ok = gap <= opts.crosscheck_tol;

  // u' implied by the identity: P^n (Re g2 - Re(a gamma^m)) - Re g1.
  const double sgn = rep.mirrored_time ? -1.0 : 1.0;
  std::vector<double> du_id(N), u_id(N, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < N; ++i) {
    const cplx z = traj.points[i];
    const double pn = run.n == 0 ? 1.0 : std::exp(run.n * run.P.log_value(std::abs(z)));
    du_id[i] = sgn * (pn * (run.g2(z).real() - (run.a * ipow(z, run.m)).real()) - run.g1(z).real());
  }
  std::size_t i0 = 0;
  while (i0 < N && !std::isfinite(up.u[i0])) ++i0;
  if (N - i0 < 3) {
    rep.inconclusive = true;
    rep.note = "too few finite samples of u";
    return rep;
  }
  u_id[i0] = up.u[i0];
  for (std::size_t i = i0 + 1; i < N; ++i)
    u_id[i] = u_id[i - 1] + 0.5 * (du_id[i] + du_id[i - 1]) * (up.times[i] - up.times[i - 1]);

  rep.fit = classify_growth(up.times, u_id, du_id, std::max(w_lo, up.times[i0]), w_hi);
  rep.growth_class = rep.fit.growth;
  rep.fitted_exponent = rep.fit.exponent;

  const double du_act = up.u[N - 1] - up.u[i0];
  const double du_hyp = u_id[N - 1] - u_id[i0];
  rep.delta_u_actual = toward_eq_is_backward ? -du_act : du_act;
  rep.delta_u_identity = toward_eq_is_backward ? -du_hyp : du_hyp;
  rep.contradiction = rep.delta_u_actual < -1.0 &&
                      (rep.delta_u_identity > 0.0 ||
                       std::abs(rep.delta_u_actual) > 10.0 * (std::abs(rep.delta_u_identity) + 1.0));

  bool class_ok = false;
  const GrowthFit& f = rep.fit;
  switch (label) {
    case CaseLabel::ell0:
    case CaseLabel::subcase_3_1:
    case CaseLabel::subcase_3_2_1:
      class_ok = f.growth == GrowthClass::bounded;
      rep.margin = 1.0 - f.total_variation;
      break;
    case CaseLabel::ell1:
      class_ok = f.growth != GrowthClass::power && f.growth != GrowthClass::undetermined;
      rep.margin = std::max({1.0 - f.total_variation, f.r2_log - 0.99, f.r2_linear - 0.99});
      break;
    case CaseLabel::subcase_3_2_2:
      class_ok = f.growth == GrowthClass::logarithmic;
      rep.margin = std::min(f.r2_log - 0.99, 0.05 - std::abs(f.exponent));
      break;
    case CaseLabel::subcase_3_2_3: {
      const bool sign_ok = (f.linear_slope > 0.0) == (run.a.real() < 0.0);
      class_ok = f.growth == GrowthClass::linear && sign_ok;
      rep.margin = f.r2_linear - 0.99;
      break;
    }
    case CaseLabel::subcase_3_2_4: {
      const double want = 1.0 - static_cast<double>(run.m) / run.k();
      // the window part of u_id must increase
      std::size_t iw = i0;
      while (iw < N && up.times[iw] < w_lo) ++iw;
      const bool up_ok = iw < N && u_id[N - 1] > u_id[iw];
      class_ok = f.growth == GrowthClass::power && std::abs(f.exponent - want) < 0.05 && up_ok &&
                 rep.max_cosine.value_or(0.0) > 0.0;
      rep.margin = 0.05 - std::abs(f.exponent - want);
      break;
    }
    case CaseLabel::lemma_2_5:
      break;
  }
  const bool eps_ok = !rep.eps_max || *rep.eps_max < opts.eps_bound;
  if (!eps_ok) rep.note = "averaged perturbation eps exceeds its bound";
  if (!rep.crosscheck_ok && rep.note.empty()) rep.note = "u' cross-check failed";
  rep.agreement = class_ok && rep.crosscheck_ok && eps_ok && rep.contradiction;
  return rep;
}

GrowthReport lemma25_probe(cplx b, int k, const Perturbation& g, const FlatProfile& P,
                           const std::vector<double>& radii, int n_angles) {
  if (k < 0) throw PreconditionError("k must be non-negative");
  if (k == 1 && b.real() == 0.0) throw PreconditionError("excluded input: k = 1 with Re b = 0");
  if (!g.is_zero() && g.power < k + 1) throw PreconditionError("g must be O(|z|^(k+1))");
  if (radii.empty() || n_angles < 1) throw PreconditionError("lemma25_probe needs radii and angles");

  GrowthReport rep;
  rep.case_label = CaseLabel::lemma_2_5;
  rep.predicted = b == cplx{} ? "residual within the g floor" : "residual not identically zero";
  bool any_scale = false;
  double best = 0.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw PreconditionError("probe radii must be positive");
    std::vector<cplx> zs(static_cast<std::size_t>(n_angles)), pz(zs.size());
    double scale = 0.0;
    for (int i = 0; i < n_angles; ++i) {
      const cplx z = std::polar(r, 2.0 * kPi * i / n_angles);
      zs[static_cast<std::size_t>(i)] = z;
      pz[static_cast<std::size_t>(i)] = P_z(P, z);
      scale = std::max(scale, std::abs(ipow(z, k) * pz[static_cast<std::size_t>(i)]));
    }
    if (scale == 0.0) continue;
    any_scale = true;
    const double floor_b = 1e-3 * std::abs(b) * scale;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const cplx z = zs[i];
      const double res = ((b * ipow(z, k) + g(z)) * pz[i]).real();
      const double fl = std::abs(g(z)) * std::abs(pz[i]) * (1.0 + 1e-12) + floor_b;
      if (fl > 0.0) best = std::max(best, std::abs(res) / fl);
      if (!rep.certified && fl > 0.0 && std::abs(res) > fl) {
        rep.certified = true;
        rep.certified_radius = r;
        rep.certified_point = z;
      }
    }
  }
  if (!any_scale) {
    rep.inconclusive = true;
    rep.note = "P_z underflows on every probe circle";
    return rep;
  }
  rep.margin = best - 1.0;
  rep.agreement = rep.certified == (b != cplx{});
  return rep;
}

}  // namespace crlab
