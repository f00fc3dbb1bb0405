#pragma once

#include <array>
#include <functional>
#include <vector>

#include "crlab/hypersurface.hpp"
#include "crlab/series.hpp"

namespace crlab {

/// L^alpha(z1) = (exp(alpha z1) - 1)/alpha, and z1 at alpha = 0.
cplx eval_L_alpha(double alpha, cplx z1);

/// Holomorphic vector field h1 d/dz1 + h2 d/dz2 given in closed form.
class AnalyticVectorField {
 public:
  enum class Kind { H_a_alpha, rotation, custom };
  using Component = std::function<cplx(cplx, cplx)>;

  /// H^{a,alpha} = L^alpha(z1) a(z2) d/dz1 + i z2 d/dz2.
  static AnalyticVectorField H(TruncatedSeries a, double alpha);
  /// i beta z2 d/dz2.
  static AnalyticVectorField rotation(double beta);
  /// Must vanish at the origin; checked on construction.
  static AnalyticVectorField custom(Component h1, Component h2);

  Kind kind() const { return kind_; }
  const TruncatedSeries& series() const { return a_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  cplx h1(cplx z1, cplx z2) const;
  cplx h2(cplx z1, cplx z2) const;

 private:
  Kind kind_ = Kind::custom;
  TruncatedSeries a_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  Component c1_, c2_;
};

/// Truncated bivariate Taylor field: h1 = sum a_jk z1^j z2^k, h2 = sum b_jk z1^j z2^k.
///
/// Coefficients with j + k > degree are not stored; a_00 and b_00 are fixed
/// at zero.
class PolyVectorField {
 public:
  enum class Component { h1, h2 };

  explicit PolyVectorField(int degree = 0);

  int degree() const { return degree_; }

  cplx a(int j, int k) const { return get(Component::h1, j, k); }
  cplx b(int j, int k) const { return get(Component::h2, j, k); }
  cplx get(Component c, int j, int k) const;
  /// Throws PreconditionError for (0, 0) with a nonzero value or j + k > degree.
  void set(Component c, int j, int k, cplx value);

  cplx h1(cplx z1, cplx z2) const { return eval(Component::h1, z1, z2); }
  cplx h2(cplx z1, cplx z2) const { return eval(Component::h2, z1, z2); }
  cplx eval(Component c, cplx z1, cplx z2) const;

  PolyVectorField operator+(const PolyVectorField& o) const;
  PolyVectorField operator*(double s) const;

  /// Largest coefficient magnitude.
  double max_abs() const;

 private:
  std::size_t index(int j, int k) const;
  int degree_;
  std::vector<cplx> a_;
  std::vector<cplx> b_;
};

/// Re[rho_z1 h1 + rho_z2 h2] at an on-surface point; zero iff the field is tangent there.
double tangency_residual(const HypersurfaceModel& model, const AnalyticVectorField& field,
                         const SurfacePoint& pt);
double tangency_residual(const HypersurfaceModel& model, const PolyVectorField& field,
                         const SurfacePoint& pt);

/// Absolute residuals of the five closed-form identities of the family
/// (indices 0..4 correspond to identities (i)..(v)). The two alpha != 0 only
/// identities are reported as exact zeros when alpha == 0.
std::array<double, 5> identity_residuals(const FamilyFunctions& fn, cplx z2, double t);
std::array<double, 5> identity_residuals(const FamilyParams& params, cplx z2, double t);

struct IdentityRow {
  cplx z2;
  double t;
  std::array<double, 5> res;
};

/// identity_residuals over an annulus grid times t values (t-major order).
std::vector<IdentityRow> identity_grid(const FamilyFunctions& fn, const AnnulusGrid& grid,
                                       const std::vector<double>& t_values);
std::vector<IdentityRow> identity_grid_serial(const FamilyFunctions& fn, const AnnulusGrid& grid,
                                              const std::vector<double>& t_values);

struct TaylorOptions {
  /// Cauchy-integral radii used for custom fields.
  double radius_z1 = 0.25;
  double radius_z2 = 0.25;
};

/// Bivariate Taylor coefficients of a field about the origin up to total
/// degree N. Closed forms for H^{a,alpha} and rotation; custom fields go
/// through the trapezoidal Cauchy integral on a bicircle.
PolyVectorField taylor_of_field(const AnalyticVectorField& field, int degree,
                                const TaylorOptions& opts = {});

}  // namespace crlab
