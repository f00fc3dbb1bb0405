#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "crlab/series.hpp"

namespace crlab {

/// g(z) = scale * z^power; used for the perturbations g0, g1, g2.
struct Perturbation {
  cplx scale{};
  int power = 1;

  cplx operator()(cplx z) const;
  bool is_zero() const { return scale == cplx{}; }
};

/// dz/dt = b z^ell (1 + g0(z)), together with the data of the identity
///   Re[a z^m + P^{-n}(b z^ell (1 + g0) P_z/P + g1)] = g2
/// that the scenario runner tests along the flow.
struct FlowSpec {
  cplx b{-1.0, 0.0};
  int ell = 1;
  Perturbation g0;
  cplx z0{1.0, 0.0};
  double t0 = 0.0;
  double t_end = 1.0;
  cplx a{1.0, 0.0};
  int m = 1;
  int n = 0;
  FlatProfile P = FlatProfile::exp_inverse_power(1.0);
  Perturbation g1;
  Perturbation g2;

  /// k = ell - 1 for the ell >= 2 case.
  int k() const { return ell - 1; }
  cplx rhs(cplx z) const;
  /// Rejects (ell = 1, Re b = 0), (m = 0, Re a = 0), negative exponents and
  /// perturbations below their required vanishing order.
  void validate() const;
};

struct Annulus {
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
};

enum class SampleSpacing { linear, log };

struct IntegratorOptions {
  int n_samples = 2001;
  SampleSpacing spacing = SampleSpacing::log;
  long max_steps = 5'000'000;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double min_step = 0.0;
  double max_step = 0.0;
  double tol = 0.0;
};

enum class Termination { reached_t_end, exited_annulus, step_underflow };

struct Trajectory {
  std::vector<double> times;
  std::vector<cplx> points;
  StepStats stats;
  Termination terminated = Termination::reached_t_end;
};

/// Output times on [t0, t_end]. Log spacing with t0 = 0 uses 0 followed by a
/// geometric sequence starting at 1e-6 t_end.
std::vector<double> sample_times(double t0, double t_end, int n, SampleSpacing spacing);

/// Dormand-Prince 5(4) integration of spec.rhs from (t0, z0), stepping
/// exactly onto every output time. Stops early when |z| leaves the annulus
/// (the outside point is not recorded) or the step falls below
/// 1e-14 max(1, |t|).
Trajectory integrate_flow(const FlowSpec& spec, const Annulus& annulus, double tol,
                          const IntegratorOptions& opts = {});

// ---------------------------------------------------------------------------

enum class BranchWindow { arg_in_0_2pi, arg_in_minus_half_pi_3half_pi };

/// omega_j(t) = tau^{-j} (c - k b t)^{-1/k}, tau = exp(2 pi i / k), with the
/// argument of c - k b t taken in the window.
struct BranchReference {
  cplx c;
  cplx b;
  int k = 1;
  int j = 0;
  BranchWindow window = BranchWindow::arg_in_0_2pi;

  /// (0, 2 pi) when Im b != 0, (-pi/2, 3pi/2) otherwise.
  static BranchWindow window_for(cplx b);
  /// c = z0^{-k} + k b t0 and the branch index whose omega_j(t0) is closest to z0.
  static BranchReference through(cplx b, int k, cplx z0, double t0);
};

/// Argument of w in the window; BranchError when w is zero or on the cut.
double windowed_arg(cplx w, BranchWindow window);

cplx reference_omega(const BranchReference& ref, double t);

/// True when c - k b t meets the cut (or 0) for some t in [t_lo, t_hi].
bool crosses_cut(const BranchReference& ref, double t_lo, double t_hi);

/// eps(t) = (c - gamma^{-k})/(k b t) - 1 along the trajectory (t > 0 samples).
std::vector<cplx> measure_epsilon(const BranchReference& ref, const Trajectory& traj);

// ---------------------------------------------------------------------------

struct PowerLawFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  int samples = 0;
  /// stderr <= 0.05
  bool is_power_law = false;
};

/// Least-squares slope of log|gamma| against log t on samples with t in the
/// window. Needs at least 50 such samples.
PowerLawFit fit_power_law(const Trajectory& traj, double t_lo, double t_hi);
PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y);

struct UProbe {
  std::vector<double> times;
  std::vector<double> u;
  /// Three-point finite difference on the (possibly non-uniform) time grid;
  /// NaN at the ends and next to non-finite u.
  std::vector<double> du;
  bool truncated = false;
  std::optional<std::size_t> truncated_at;
};

/// u(t) = 1/2 log P(gamma(t)). Profiles with a closed-form logarithm never
/// underflow; otherwise the probe stops at the first sample where P == 0.
UProbe u_probe(const FlatProfile& P, const Trajectory& traj);

/// (log P)_z at z for a radial profile.
cplx log_P_z(const FlatProfile& P, cplx z);
/// P_z at z for a radial profile.
cplx P_z(const FlatProfile& P, cplx z);

// ---------------------------------------------------------------------------

enum class CaseLabel {
  ell0,
  ell1,
  subcase_3_1,
  subcase_3_2_1,
  subcase_3_2_2,
  subcase_3_2_3,
  subcase_3_2_4,
  lemma_2_5
};

enum class GrowthClass { bounded, logarithmic, linear, power, undetermined };

const char* to_string(CaseLabel c);
const char* to_string(GrowthClass g);
std::optional<CaseLabel> case_from_string(const std::string& s);

struct GrowthFit {
  GrowthClass growth = GrowthClass::undetermined;
  double exponent = 0.0;  ///< p in |u| ~ t^p, from 1 + slope of log|u'|
  double total_variation = 0.0;
  double r2_log = 0.0;
  double r2_linear = 0.0;
  double linear_slope = 0.0;
};

/// Labels u on the samples with t in [t_lo, t_hi]:
/// bounded if the total variation is below 1, logarithmic if u fits a + b log t
/// with R^2 > 0.99 and |p| < 0.05, linear if u fits a + b t with R^2 > 0.99,
/// else power(p).
GrowthFit classify_growth(const std::vector<double>& t, const std::vector<double>& u,
                          const std::vector<double>& du, double t_lo, double t_hi);

struct GrowthReport {
  CaseLabel case_label = CaseLabel::ell0;
  GrowthClass growth_class = GrowthClass::undetermined;
  std::optional<double> fitted_exponent;
  std::string predicted;
  bool agreement = false;
  double margin = 0.0;
  bool inconclusive = false;
  std::string note;

  GrowthFit fit;
  /// max relative gap between finite-difference u' and the chain rule
  double u_crosscheck = 0.0;
  bool crosscheck_ok = false;
  /// change of the measured u and of the identity-implied u toward the equilibrium
  double delta_u_actual = 0.0;
  double delta_u_identity = 0.0;
  bool contradiction = false;

  std::optional<int> branch;
  std::optional<double> max_cosine;
  std::optional<double> eps_max;
  std::optional<double> r1;
  bool mirrored_time = false;

  // circle probe only
  bool certified = false;
  std::optional<double> certified_radius;
  std::optional<cplx> certified_point;
};

struct ScenarioOptions {
  double tol = 1e-11;
  int n_samples = 4001;
  double crosscheck_tol = 1e-4;
  double eps_bound = 0.1;
};

/// Branch maximizing cos(arg(a/b) + ((k-m)/k) arg(-b) - 2 pi m j / k), with
/// arg(-b) in the window of b. Returns (j, cosine).
std::pair<int, double> select_branch(cplx a, cplx b, int m, int k);

/// Runs the trajectory of the case, integrates the u' implied by the
/// identity, classifies its growth and compares with the predicted class.
/// An early-terminated trajectory yields an inconclusive report.
GrowthReport lemma3_scenario(const FlowSpec& spec, CaseLabel label,
                             const ScenarioOptions& opts = {});

/// Certifies that Re[(b z^k + g) P_z] is not identically zero: some point on
/// some circle has |residual| > |g||P_z| + 1e-3 |b| max_circle |z^k P_z|.
GrowthReport lemma25_probe(cplx b, int k, const Perturbation& g, const FlatProfile& P,
                           const std::vector<double>& radii, int n_angles = 64);

}  // namespace crlab
