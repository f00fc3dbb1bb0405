#include "crlab/hypersurface.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "crlab/errors.hpp"
#include "crlab/parallel.hpp"

namespace crlab {

namespace {

constexpr cplx kI{0.0, 1.0};

// z̄/(2|z|): the Wirtinger derivative of |z|.
cplx d_abs(cplx z) {
  const double r = std::abs(z);
  return r > 0.0 ? std::conj(z) / (2.0 * r) : cplx{};
}

}  // namespace

double FamilyParams::max_delta0(double alpha) {
  return alpha == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (2.0 * std::abs(alpha));
}

// ---------------------------------------------------------------------------
// FamilyFunctions

FamilyFunctions::FamilyFunctions(FamilyParams params)
    : params_(std::move(params)),
      a_div_in_(transform_coeffs(params_.a, CoeffTransform::div_in)),
      a_div_n_(transform_coeffs(params_.a, CoeffTransform::div_n)) {}

double FamilyFunctions::R(cplx z2) const {
  return params_.q.value(std::abs(z2)) - (z2 * eval_series_over_z(a_div_n_, z2)).real();
}

cplx FamilyFunctions::R_z2(cplx z2) const {
  return params_.q.derivative(std::abs(z2)) * d_abs(z2) - 0.5 * a_over_z(z2);
}

double FamilyFunctions::Q0(cplx z2) const { return std::tan(R(z2)); }

cplx FamilyFunctions::Q0_z2(cplx z2) const {
  const double q0 = Q0(z2);
  return (1.0 + q0 * q0) * R_z2(z2);
}

double FamilyFunctions::P1(cplx z2) const {
  const double r = std::abs(z2);
  if (r == 0.0) return 0.0;
  const double logp = params_.p.log_value(r);
  if (!std::isfinite(logp)) return 0.0;
  const double re_t = (z2 * eval_series_over_z(a_div_in_, z2)).real();
  const double c = std::cos(R(z2));
  if (c == 0.0) throw SingularSliceError("cos R(z2) vanished while evaluating P1");
  return std::exp(logp + re_t - std::log(std::abs(c)));
}

cplx FamilyFunctions::P1_z2(cplx z2) const {
  const double p1 = P1(z2);
  if (p1 == 0.0) return {};
  const double r = std::abs(z2);
  const cplx log_grad = params_.p.log_derivative(r) * d_abs(z2) + a_over_z(z2) / (2.0 * kI) +
                        Q0(z2) * R_z2(z2);
  return p1 * log_grad;
}

double FamilyFunctions::P(cplx z2) const {
  const double p1 = P1(z2);
  const double al = params_.alpha;
  return al == 0.0 ? p1 : std::log1p(al * p1) / al;
}

cplx FamilyFunctions::P_z2(cplx z2) const {
  return P1_z2(z2) / (1.0 + params_.alpha * P1(z2));
}

double FamilyFunctions::f(cplx z2, double t) const {
  const double al = params_.alpha;
  const double rr = R(z2);
  if (al == 0.0) return std::tan(rr) * t;
  const double num = std::cos(rr + al * t);
  const double den = std::cos(rr);
  if (num == 0.0 || den == 0.0) throw SingularSliceError("cos(R + alpha t) vanished");
  return -std::log(std::abs(num / den)) / al;
}

double FamilyFunctions::f_t(cplx z2, double t) const {
  const double rr = R(z2);
  const double arg = rr + params_.alpha * t;
  if (std::cos(arg) == 0.0) throw SingularSliceError("cos(R + alpha t) vanished");
  return std::tan(arg);
}

cplx FamilyFunctions::f_z2(cplx z2, double t) const {
  const double al = params_.alpha;
  const double rr = R(z2);
  const cplx rz = R_z2(z2);
  if (al == 0.0) {
    const double q0 = std::tan(rr);
    return t * (1.0 + q0 * q0) * rz;
  }
  return rz * ((std::tan(rr + al * t) - std::tan(rr)) / al);
}

// ---------------------------------------------------------------------------
// Model implementations

class HypersurfaceModel::Impl {
 public:
  virtual ~Impl() = default;
  virtual Provenance provenance() const = 0;
  virtual double eps0() const = 0;
  virtual double delta0() const = 0;
  virtual const FamilyFunctions* family() const { return nullptr; }
  virtual double P(cplx z2) const = 0;
  virtual cplx P_z2(cplx z2) const = 0;
  virtual double height(cplx z2, double t) const = 0;
  virtual RhoGradient gradient(cplx z2, double t) const = 0;
};

namespace {

class FamilyImpl final : public HypersurfaceModel::Impl {
 public:
  explicit FamilyImpl(FamilyParams p) : fn_(std::move(p)) {}
  HypersurfaceModel::Provenance provenance() const override {
    return HypersurfaceModel::Provenance::family;
  }
  double eps0() const override { return fn_.params().eps0; }
  double delta0() const override { return fn_.params().delta0; }
  const FamilyFunctions* family() const override { return &fn_; }
  double P(cplx z2) const override { return fn_.P(z2); }
  cplx P_z2(cplx z2) const override { return fn_.P_z2(z2); }
  double height(cplx z2, double t) const override { return fn_.P(z2) + fn_.f(z2, t); }
  RhoGradient gradient(cplx z2, double t) const override {
    return {0.5 + fn_.f_t(z2, t) / (2.0 * kI), fn_.P_z2(z2) + fn_.f_z2(z2, t)};
  }

 private:
  FamilyFunctions fn_;
};

class RadialImpl final : public HypersurfaceModel::Impl {
 public:
  explicit RadialImpl(RadialSpec s) : spec_(std::move(s)) {}
  HypersurfaceModel::Provenance provenance() const override {
    return HypersurfaceModel::Provenance::radial_symmetric;
  }
  double eps0() const override { return spec_.eps0; }
  double delta0() const override { return spec_.delta0; }
  double P(cplx z2) const override { return spec_.P.value(std::abs(z2)); }
  cplx P_z2(cplx z2) const override { return spec_.P.derivative(std::abs(z2)) * d_abs(z2); }
  double height(cplx z2, double t) const override {
    return P(z2) + t * (spec_.q_kappa * std::norm(z2) + spec_.q_lambda * t);
  }
  RhoGradient gradient(cplx z2, double t) const override {
    // d/dt [t Q] = kappa r^2 + 2 lambda t; d/dz2 [t kappa |z2|^2] = t kappa conj(z2).
    const double ht = spec_.q_kappa * std::norm(z2) + 2.0 * spec_.q_lambda * t;
    return {0.5 + ht / (2.0 * kI), P_z2(z2) + t * spec_.q_kappa * std::conj(z2)};
  }

 private:
  RadialSpec spec_;
};

class CustomImpl final : public HypersurfaceModel::Impl {
 public:
  explicit CustomImpl(CustomSpec s) : spec_(std::move(s)) {}
  HypersurfaceModel::Provenance provenance() const override {
    return HypersurfaceModel::Provenance::custom;
  }
  double eps0() const override { return spec_.eps0; }
  double delta0() const override { return spec_.delta0; }
  double P(cplx z2) const override { return spec_.P(z2); }
  cplx P_z2(cplx z2) const override {
    const double h = spec_.fd_step;
    const double dx = (spec_.P(z2 + h) - spec_.P(z2 - h)) / (2.0 * h);
    const double dy = (spec_.P(z2 + kI * h) - spec_.P(z2 - kI * h)) / (2.0 * h);
    return 0.5 * cplx(dx, -dy);
  }
  double height(cplx z2, double t) const override {
    return spec_.P(z2) + (spec_.Q ? t * spec_.Q(z2, t) : 0.0);
  }
  RhoGradient gradient(cplx z2, double t) const override {
    const double h = spec_.fd_step;
    auto extra = [&](cplx w, double s) { return spec_.Q ? s * spec_.Q(w, s) : 0.0; };
    const double ht = (extra(z2, t + h) - extra(z2, t - h)) / (2.0 * h);
    auto hz = [&](cplx w) { return spec_.P(w) + extra(w, t); };
    const double dx = (hz(z2 + h) - hz(z2 - h)) / (2.0 * h);
    const double dy = (hz(z2 + kI * h) - hz(z2 - kI * h)) / (2.0 * h);
    return {0.5 + ht / (2.0 * kI), 0.5 * cplx(dx, -dy)};
  }

 private:
  CustomSpec spec_;
};

}  // namespace

// ---------------------------------------------------------------------------

HypersurfaceModel HypersurfaceModel::radial(const RadialSpec& spec) {
  if (!(spec.eps0 > 0.0) || !(spec.delta0 > 0.0))
    throw ConstructionError("radial model needs positive eps0 and delta0");
  if (spec.P.kind() == FlatProfile::Kind::zero)
    throw ConstructionError("radial model needs P > 0 away from the origin");
  return HypersurfaceModel(std::make_shared<RadialImpl>(spec));
}

HypersurfaceModel HypersurfaceModel::custom(CustomSpec spec) {
  if (!spec.P) throw ConstructionError("custom model needs a P closure");
  if (!(spec.eps0 > 0.0) || !(spec.delta0 > 0.0))
    throw ConstructionError("custom model needs positive eps0 and delta0");
  if (!(spec.fd_step > 0.0)) throw ConstructionError("custom model needs a positive fd step");
  return HypersurfaceModel(std::make_shared<CustomImpl>(std::move(spec)));
}

HypersurfaceModel perturbed_radial(const RadialSpec& spec, double eps, int power) {
  if (power < 1) throw ConstructionError("perturbation power must be >= 1");
  if (!(std::abs(eps) * std::pow(spec.eps0, power) < 1.0))
    throw ConstructionError("perturbation would make P vanish inside the disc");
  CustomSpec c;
  const FlatProfile prof = spec.P;
  c.P = [prof, eps, power](cplx z) {
    return prof.value(std::abs(z)) * (1.0 + eps * std::pow(z, power).real());
  };
  const double kappa = spec.q_kappa, lambda = spec.q_lambda;
  c.Q = [kappa, lambda](cplx z, double t) { return kappa * std::norm(z) + lambda * t; };
  c.eps0 = spec.eps0;
  c.delta0 = spec.delta0;
  std::ostringstream d;
  d << "radial " << prof.description() << " x (1 + " << eps << " Re z2^" << power << ")";
  c.description = d.str();
  return HypersurfaceModel::custom(std::move(c));
}

HypersurfaceModel::Provenance HypersurfaceModel::provenance() const { return impl_->provenance(); }
double HypersurfaceModel::eps0() const { return impl_->eps0(); }
double HypersurfaceModel::delta0() const { return impl_->delta0(); }
const FamilyFunctions* HypersurfaceModel::family() const { return impl_->family(); }
double HypersurfaceModel::P(cplx z2) const { return impl_->P(z2); }
cplx HypersurfaceModel::P_z2(cplx z2) const { return impl_->P_z2(z2); }
double HypersurfaceModel::height(cplx z2, double t) const { return impl_->height(z2, t); }

void HypersurfaceModel::check_domain(cplx z1, cplx z2) const {
  const double e = eps0();
  if (std::abs(z2) > e * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "|z2| = " << std::abs(z2) << " outside the model disc of radius " << e;
    throw DomainError(msg.str());
  }
  if (!(std::abs(z1.imag()) < delta0())) {
    std::ostringstream msg;
    msg << "|Im z1| = " << std::abs(z1.imag()) << " outside (-delta0, delta0), delta0 = " << delta0();
    throw DomainError(msg.str());
  }
}

double HypersurfaceModel::rho(cplx z1, cplx z2) const {
  check_domain(z1, z2);
  return z1.real() + impl_->height(z2, z1.imag());
}

RhoGradient HypersurfaceModel::rho_gradient(cplx z1, cplx z2) const {
  check_domain(z1, z2);
  return impl_->gradient(z2, z1.imag());
}

SurfacePoint HypersurfaceModel::point(cplx z2, double t) const {
  return {cplx(-impl_->height(z2, t), t), z2, t};
}

HypersurfaceModel build_family(const FamilyParams& params) {
  if (!(params.eps0 > 0.0) || !(params.delta0 > 0.0))
    throw ConstructionError("family needs positive eps0 and delta0");
  if (params.delta0 > FamilyParams::max_delta0(params.alpha) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "delta0 = " << params.delta0 << " exceeds 1/(2|alpha|) = "
        << FamilyParams::max_delta0(params.alpha);
    throw ConstructionError(msg.str());
  }
  if (params.a.is_zero()) throw ConstructionError("family needs a nonzero series a(z)");
  if (params.p.kind() == FlatProfile::Kind::zero)
    throw ConstructionError("family needs e^p > 0 away from the origin (p profile is zero)");
  if (params.eps0 > params.a.eval_radius())
    throw ConstructionError("eps0 exceeds the evaluation radius of a(z)");

  auto impl = std::make_shared<FamilyImpl>(params);
  const FamilyFunctions& fn = *impl->family();

  // Sample the closed disc: R bounded by 1, cos R nonzero, 1 + alpha P1 > 0, P > 0.
  constexpr int kRadii = 32, kAngles = 64;
  for (int i = 1; i <= kRadii; ++i) {
    const double r = params.eps0 * i / kRadii;
    for (int j = 0; j < kAngles; ++j) {
      const cplx z = std::polar(r, 2.0 * std::numbers::pi * j / kAngles);
      const double rr = fn.R(z);
      std::ostringstream where;
      where << "z2 = (" << z.real() << ", " << z.imag() << ")";
      if (std::abs(rr) >= std::numbers::pi / 2.0)
        throw ConstructionError("cos R(z2) vanishes: |R| >= pi/2 at " + where.str());
      if (std::abs(rr) > 1.0 + 1e-12)
        throw ConstructionError("|R(z2)| = " + std::to_string(std::abs(rr)) + " > 1 at " + where.str());
      const double p1 = fn.P1(z);
      if (!(1.0 + params.alpha * p1 > 0.0))
        throw ConstructionError("1 + alpha P1 <= 0 at " + where.str());
      const double logp = params.p.log_value(r);
      if (std::isfinite(logp) && logp > std::log(std::numeric_limits<double>::min()) &&
          !(fn.P(z) > 0.0))
        throw ConstructionError("P(z2) is not positive at " + where.str());
    }
  }
  return HypersurfaceModel(std::move(impl));
}

// ---------------------------------------------------------------------------

std::vector<double> AnnulusGrid::radii() const {
  std::vector<double> out(static_cast<std::size_t>(n_radii));
  for (int i = 0; i < n_radii; ++i)
    out[static_cast<std::size_t>(i)] =
        n_radii == 1 ? r_min : r_min + (r_max - r_min) * i / (n_radii - 1);
  return out;
}

std::vector<double> AnnulusGrid::angles() const {
  std::vector<double> out(static_cast<std::size_t>(n_angles));
  for (int j = 0; j < n_angles; ++j)
    out[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / n_angles;
  return out;
}

AnnulusGrid default_annulus(const HypersurfaceModel& model, int n_radii, int n_angles) {
  return {0.1 * model.eps0(), 0.6 * model.eps0(), n_radii, n_angles};
}

namespace {

void check_grid(const HypersurfaceModel& model, const AnnulusGrid& grid,
                const std::vector<double>& t_values) {
  if (grid.n_radii < 1 || grid.n_angles < 1) throw PreconditionError("empty sampling grid");
  if (grid.r_min < 0.0 || grid.r_max < grid.r_min || grid.r_max > model.eps0())
    throw PreconditionError("sampling annulus must lie inside the model disc");
  for (double t : t_values)
    if (!(std::abs(t) < model.delta0())) throw PreconditionError("t value outside (-delta0, delta0)");
}

}  // namespace

std::vector<SurfacePoint> sample_points_serial(const HypersurfaceModel& model,
                                               const AnnulusGrid& grid,
                                               const std::vector<double>& t_values) {
  check_grid(model, grid, t_values);
  const auto radii = grid.radii();
  const auto angles = grid.angles();
  std::vector<SurfacePoint> out;
  out.reserve(radii.size() * angles.size() * t_values.size());
  for (double t : t_values)
    for (double r : radii)
      for (double th : angles) out.push_back(model.point(std::polar(r, th), t));
  return out;
}

std::vector<SurfacePoint> sample_points(const HypersurfaceModel& model, const AnnulusGrid& grid,
                                        const std::vector<double>& t_values) {
  check_grid(model, grid, t_values);
  const auto radii = grid.radii();
  const auto angles = grid.angles();
  const long nr = static_cast<long>(radii.size()), na = static_cast<long>(angles.size());
  const long total = static_cast<long>(t_values.size()) * nr * na;
  std::vector<SurfacePoint> out(static_cast<std::size_t>(total));
  parallel_for(total, [&](long idx) {
    const auto it = static_cast<std::size_t>(idx / (nr * na));
    const auto ir = static_cast<std::size_t>((idx / na) % nr);
    const auto ia = static_cast<std::size_t>(idx % na);
    out[static_cast<std::size_t>(idx)] = model.point(std::polar(radii[ir], angles[ia]), t_values[it]);
  });
  return out;
}

FamilyParams draw_family(std::uint64_t seed, int max_terms, double alpha_max) {
  if (max_terms < 1) throw PreconditionError("draw_family needs max_terms >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> terms(1, max_terms);
  const int n = terms(rng);
  std::vector<cplx> a(static_cast<std::size_t>(n));
  for (auto& c : a) c = std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
  FamilyParams p;
  p.a = TruncatedSeries(std::move(a));
  p.alpha = alpha_max * (2.0 * unit(rng) - 1.0);
  p.delta0 = std::min(0.5, FamilyParams::max_delta0(p.alpha));
  return p;
}

}  // namespace crlab
