#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "crlab/series.hpp"

namespace crlab {

/// Parameters of one member M(a, alpha, p, q) of the tangent-field family.
///
/// `p` is given through its exponential g = e^p, so p(r) = log g(r); `q` is
/// used as a radial function directly (q(0) must vanish).
struct FamilyParams {
  TruncatedSeries a;
  double alpha = 0.0;
  FlatProfile p = FlatProfile::exp_inverse_power(2.0);
  FlatProfile q = FlatProfile::zero();
  double eps0 = 0.6;
  double delta0 = 0.5;

  /// Largest admissible delta0 for the given alpha (1/(2|alpha|), or +inf).
  static double max_delta0(double alpha);
};

/// Closed-form ingredients of M(a, alpha, p, q) and their Wirtinger
/// derivatives in z2. Everything here is a pure function of the parameters.
class FamilyFunctions {
 public:
  explicit FamilyFunctions(FamilyParams params);

  const FamilyParams& params() const { return params_; }
  double alpha() const { return params_.alpha; }

  cplx a(cplx z2) const { return eval_series_over_z(params_.a, z2) * z2; }
  /// a(z2)/z2, finite at 0.
  cplx a_over_z(cplx z2) const { return eval_series_over_z(params_.a, z2); }

  double R(cplx z2) const;
  cplx R_z2(cplx z2) const;
  double Q0(cplx z2) const;
  cplx Q0_z2(cplx z2) const;
  double P1(cplx z2) const;
  cplx P1_z2(cplx z2) const;
  double P(cplx z2) const;
  cplx P_z2(cplx z2) const;
  double f(cplx z2, double t) const;
  double f_t(cplx z2, double t) const;
  cplx f_z2(cplx z2, double t) const;

 private:
  FamilyParams params_;
  TruncatedSeries a_div_in_;
  TruncatedSeries a_div_n_;
};

/// Radially symmetric model: P(z2) = P(|z2|), Q(z2, t) = kappa |z2|^2 + lambda t.
struct RadialSpec {
  FlatProfile P = FlatProfile::exp_inverse_power(2.0);
  double q_kappa = 0.0;
  double q_lambda = 0.0;
  double eps0 = 1.0;
  double delta0 = 0.5;
};

/// Arbitrary P(z2), Q(z2, t); every derivative is a central finite difference.
struct CustomSpec {
  std::function<double(cplx)> P;
  std::function<double(cplx, double)> Q;
  double eps0 = 1.0;
  double delta0 = 0.5;
  double fd_step = 1e-6;
  std::string description = "custom";
};

struct SurfacePoint {
  cplx z1;
  cplx z2;
  double t = 0.0;  ///< Im z1
};

/// Wirtinger derivatives (d rho/d z1, d rho/d z2).
struct RhoGradient {
  cplx rho_z1;
  cplx rho_z2;
};

/// Annulus sampling grid: radii linearly spaced in [r_min, r_max] and
/// n_angles equally spaced angles starting at 0.
struct AnnulusGrid {
  double r_min = 0.1;
  double r_max = 0.6;
  int n_radii = 8;
  int n_angles = 32;

  std::vector<double> radii() const;
  std::vector<double> angles() const;
};

/// Real hypersurface rho = Re z1 + P(z2) + h(z2, Im z1) = 0 near the origin,
/// with h(z2, t) = f(z2, t) for the family and t Q(z2, t) otherwise.
/// Immutable; copies share the underlying evaluators.
class HypersurfaceModel {
 public:
  enum class Provenance { family, radial_symmetric, custom };

  static HypersurfaceModel radial(const RadialSpec& spec);
  static HypersurfaceModel custom(CustomSpec spec);

  Provenance provenance() const;
  double eps0() const;
  double delta0() const;
  /// Present for family models.
  const FamilyFunctions* family() const;

  double P(cplx z2) const;
  cplx P_z2(cplx z2) const;
  /// Height of the graph: P(z2) + h(z2, t), so that Re z1 = -height on M.
  double height(cplx z2, double t) const;

  double rho(cplx z1, cplx z2) const;
  RhoGradient rho_gradient(cplx z1, cplx z2) const;

  /// Exact on-surface point over (z2, t) by back-substitution.
  SurfacePoint point(cplx z2, double t) const;

  class Impl;

 private:
  explicit HypersurfaceModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  void check_domain(cplx z1, cplx z2) const;

  std::shared_ptr<const Impl> impl_;
  friend HypersurfaceModel build_family(const FamilyParams& params);
};

/// Radial model with P multiplied by 1 + eps Re(z2^power): breaks the
/// rotation symmetry. Gradients by finite differences. Needs |eps| eps0^power < 1.
HypersurfaceModel perturbed_radial(const RadialSpec& spec, double eps, int power);

/// Builds M(a, alpha, p, q). Throws ConstructionError when the parameter
/// invariants fail (|R| > 1 on the disc, cos R vanishing, 1 + alpha P1 <= 0,
/// delta0 too large, P not positive off the origin).
HypersurfaceModel build_family(const FamilyParams& params);

/// On-surface points for every (radius, angle, t); ordering is t-major, then
/// radius, then angle. The serial variant is the reference for the parallel one.
std::vector<SurfacePoint> sample_points(const HypersurfaceModel& model, const AnnulusGrid& grid,
                                        const std::vector<double>& t_values);
std::vector<SurfacePoint> sample_points_serial(const HypersurfaceModel& model,
                                               const AnnulusGrid& grid,
                                               const std::vector<double>& t_values);

/// Default sampling annulus [0.1 eps0, 0.6 eps0].
AnnulusGrid default_annulus(const HypersurfaceModel& model, int n_radii = 8, int n_angles = 32);

/// Random family parameters: 1..max_terms coefficients uniform in the closed
/// unit disc, alpha uniform in [-alpha_max, alpha_max], p = exp_inverse_power(2),
/// q = zero, delta0 = min(0.5, 1/(2|alpha|)). Deterministic in the seed.
FamilyParams draw_family(std::uint64_t seed, int max_terms = 8, double alpha_max = 2.0);

}  // namespace crlab
