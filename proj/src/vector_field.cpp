#include "crlab/vector_field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "crlab/errors.hpp"
#include "crlab/parallel.hpp"

namespace crlab {

namespace {

constexpr cplx kI{0.0, 1.0};

// exp(w) - 1 without cancellation for small |w|.
cplx expm1_c(cplx w) {
  const double x = w.real(), y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

}  // namespace

cplx eval_L_alpha(double alpha, cplx z1) {
  if (alpha == 0.0) return z1;
  const cplx w = alpha * z1;
  if (std::abs(w) < 1e-8) return z1 * (1.0 + w / 2.0 + w * w / 6.0);
  return expm1_c(w) / alpha;
}

// ---------------------------------------------------------------------------

AnalyticVectorField AnalyticVectorField::H(TruncatedSeries a, double alpha) {
  AnalyticVectorField f;
  f.kind_ = Kind::H_a_alpha;
  f.a_ = std::move(a);
  f.alpha_ = alpha;
  return f;
}

AnalyticVectorField AnalyticVectorField::rotation(double beta) {
  AnalyticVectorField f;
  f.kind_ = Kind::rotation;
  f.beta_ = beta;
  return f;
}

AnalyticVectorField AnalyticVectorField::custom(Component h1, Component h2) {
  if (!h1 || !h2) throw ConstructionError("custom field needs both components");
  if (std::abs(h1({}, {})) > 1e-14 || std::abs(h2({}, {})) > 1e-14)
    throw ConstructionError("custom field must vanish at the origin");
  AnalyticVectorField f;
  f.kind_ = Kind::custom;
  f.c1_ = std::move(h1);
  f.c2_ = std::move(h2);
  return f;
}

cplx AnalyticVectorField::h1(cplx z1, cplx z2) const {
  switch (kind_) {
    case Kind::H_a_alpha:
      return eval_L_alpha(alpha_, z1) * (z2 * eval_series_over_z(a_, z2));
    case Kind::rotation:
      return {};
    case Kind::custom:
      return c1_(z1, z2);
  }
  return {};
}

cplx AnalyticVectorField::h2(cplx z1, cplx z2) const {
  switch (kind_) {
    case Kind::H_a_alpha:
      return kI * z2;
    case Kind::rotation:
      return kI * beta_ * z2;
    case Kind::custom:
      return c2_(z1, z2);
  }
  return {};
}

// ---------------------------------------------------------------------------

PolyVectorField::PolyVectorField(int degree) : degree_(degree) {
  if (degree < 0) throw PreconditionError("field degree must be non-negative");
  const auto n = static_cast<std::size_t>((degree + 1) * (degree + 1));
  a_.assign(n, cplx{});
  b_.assign(n, cplx{});
}

std::size_t PolyVectorField::index(int j, int k) const {
  return static_cast<std::size_t>(j * (degree_ + 1) + k);
}

cplx PolyVectorField::get(Component c, int j, int k) const {
  if (j < 0 || k < 0 || j + k > degree_) return {};
  return c == Component::h1 ? a_[index(j, k)] : b_[index(j, k)];
}

void PolyVectorField::set(Component c, int j, int k, cplx value) {
  if (j < 0 || k < 0 || j + k > degree_) {
    std::ostringstream msg;
    msg << "coefficient (" << j << ", " << k << ") outside total degree " << degree_;
    throw PreconditionError(msg.str());
  }
  if (j == 0 && k == 0) {
    if (value != cplx{}) throw PreconditionError("a_00 and b_00 are fixed at zero");
    return;
  }
  (c == Component::h1 ? a_ : b_)[index(j, k)] = value;
}

cplx PolyVectorField::eval(Component c, cplx z1, cplx z2) const {
  const auto& coef = c == Component::h1 ? a_ : b_;
  // Horner in z2 for each power of z1, then Horner in z1.
  cplx acc{};
  for (int j = degree_; j >= 0; --j) {
    cplx row{};
    for (int k = degree_ - j; k >= 0; --k) row = row * z2 + coef[index(j, k)];
    acc = acc * z1 + row;
  }
  return acc;
}

PolyVectorField PolyVectorField::operator+(const PolyVectorField& o) const {
  PolyVectorField out(std::max(degree_, o.degree_));
  for (int j = 0; j <= out.degree_; ++j)
    for (int k = 0; j + k <= out.degree_; ++k) {
      if (j == 0 && k == 0) continue;
      out.set(Component::h1, j, k, a(j, k) + o.a(j, k));
      out.set(Component::h2, j, k, b(j, k) + o.b(j, k));
    }
  return out;
}

PolyVectorField PolyVectorField::operator*(double s) const {
  PolyVectorField out(*this);
  for (auto& c : out.a_) c *= s;
  for (auto& c : out.b_) c *= s;
  return out;
}

double PolyVectorField::max_abs() const {
  double m = 0.0;
  for (cplx c : a_) m = std::max(m, std::abs(c));
  for (cplx c : b_) m = std::max(m, std::abs(c));
  return m;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Field>
double residual_impl(const HypersurfaceModel& model, const Field& field, const SurfacePoint& pt) {
  const RhoGradient g = model.rho_gradient(pt.z1, pt.z2);
  return (g.rho_z1 * field.h1(pt.z1, pt.z2) + g.rho_z2 * field.h2(pt.z1, pt.z2)).real();
}

}  // namespace

double tangency_residual(const HypersurfaceModel& model, const AnalyticVectorField& field,
                         const SurfacePoint& pt) {
  return residual_impl(model, field, pt);
}

double tangency_residual(const HypersurfaceModel& model, const PolyVectorField& field,
                         const SurfacePoint& pt) {
  return residual_impl(model, field, pt);
}

std::array<double, 5> identity_residuals(const FamilyFunctions& fn, cplx z2, double t) {
  const auto& prm = fn.params();
  if (z2 == cplx{}) throw DomainError("identity residuals need z2 != 0");
  if (std::abs(z2) > prm.eps0 * (1.0 + 1e-12)) throw DomainError("z2 outside the model disc");
  if (!(std::abs(t) < prm.delta0)) throw DomainError("t outside (-delta0, delta0)");

  const double al = prm.alpha;
  const cplx a = fn.a(z2);
  const double q0 = fn.Q0(z2);
  const double ft = fn.f_t(z2, t);  // throws on a singular slice
  const cplx half_q = 0.5 + q0 / (2.0 * kI);

  std::array<double, 5> res{};
  res[0] = std::abs((kI * z2 * fn.Q0_z2(z2) + 0.5 * (1.0 + q0 * q0) * kI * a).real());
  res[1] = std::abs((kI * z2 * fn.P1_z2(z2) - half_q * a * fn.P1(z2)).real());
  if (al != 0.0) {
    const double em = std::expm1(-al * fn.P(z2)) / al;
    res[2] = std::abs((kI * z2 * fn.P_z2(z2) + em * half_q * a).real());
    const cplx lhs = (kI + ft) * std::exp(al * (kI * t - fn.f(z2, t)));
    res[3] = std::abs(lhs - (kI + q0));
  }
  res[4] = std::abs((2.0 * kI * al * z2 * fn.f_z2(z2, t) + (ft - q0) * kI * a).real());
  return res;
}

std::array<double, 5> identity_residuals(const FamilyParams& params, cplx z2, double t) {
  return identity_residuals(FamilyFunctions(params), z2, t);
}

std::vector<IdentityRow> identity_grid_serial(const FamilyFunctions& fn, const AnnulusGrid& grid,
                                              const std::vector<double>& t_values) {
  std::vector<IdentityRow> out;
  const auto radii = grid.radii();
  const auto angles = grid.angles();
  out.reserve(t_values.size() * radii.size() * angles.size());
  for (double t : t_values)
    for (double r : radii)
      for (double th : angles) {
        const cplx z = std::polar(r, th);
        out.push_back({z, t, identity_residuals(fn, z, t)});
      }
  return out;
}

std::vector<IdentityRow> identity_grid(const FamilyFunctions& fn, const AnnulusGrid& grid,
                                       const std::vector<double>& t_values) {
  const auto radii = grid.radii();
  const auto angles = grid.angles();
  const long nr = static_cast<long>(radii.size()), na = static_cast<long>(angles.size());
  const long total = static_cast<long>(t_values.size()) * nr * na;
  std::vector<IdentityRow> out(static_cast<std::size_t>(total));
  parallel_for(total, [&](long idx) {
    const auto it = static_cast<std::size_t>(idx / (nr * na));
    const auto ir = static_cast<std::size_t>((idx / na) % nr);
    const auto ia = static_cast<std::size_t>(idx % na);
    const cplx z = std::polar(radii[ir], angles[ia]);
    out[static_cast<std::size_t>(idx)] = {z, t_values[it], identity_residuals(fn, z, t_values[it])};
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Trapezoidal Cauchy integral on |z1| = r1, |z2| = r2; separable 2D DFT.
void cauchy_coefficients(const AnalyticVectorField::Component& h, int degree, double r1, double r2,
                         PolyVectorField& out, PolyVectorField::Component which) {
  const int m = 4 * (degree + 1);
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<cplx> w1(static_cast<std::size_t>(m)), w2(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p) {
    w1[static_cast<std::size_t>(p)] = std::polar(r1, two_pi * p / m);
    w2[static_cast<std::size_t>(p)] = std::polar(r2, two_pi * p / m);
  }
  // inner[p][k] = (1/m) sum_q h(w1_p, w2_q) e^{-i k phi_q}
  std::vector<cplx> inner(static_cast<std::size_t>(m * (degree + 1)));
  for (int p = 0; p < m; ++p) {
    std::vector<cplx> vals(static_cast<std::size_t>(m));
    for (int q = 0; q < m; ++q) vals[static_cast<std::size_t>(q)] = h(w1[static_cast<std::size_t>(p)], w2[static_cast<std::size_t>(q)]);
    for (int k = 0; k <= degree; ++k) {
      cplx acc{};
      for (int q = 0; q < m; ++q)
        acc += vals[static_cast<std::size_t>(q)] * std::polar(1.0, -two_pi * k * q / m);
      inner[static_cast<std::size_t>(p * (degree + 1) + k)] = acc / static_cast<double>(m);
    }
  }
  for (int j = 0; j <= degree; ++j)
    for (int k = 0; j + k <= degree; ++k) {
      if (j == 0 && k == 0) continue;
      cplx acc{};
      for (int p = 0; p < m; ++p)
        acc += inner[static_cast<std::size_t>(p * (degree + 1) + k)] * std::polar(1.0, -two_pi * j * p / m);
      acc /= static_cast<double>(m);
      acc /= std::pow(r1, j) * std::pow(r2, k);
      out.set(which, j, k, acc);
    }
}

}  // namespace

PolyVectorField taylor_of_field(const AnalyticVectorField& field, int degree,
                                const TaylorOptions& opts) {
  if (degree < 1) throw PreconditionError("taylor_of_field needs degree >= 1");
  PolyVectorField out(degree);
  using C = PolyVectorField::Component;
  switch (field.kind()) {
    case AnalyticVectorField::Kind::H_a_alpha: {
      const double al = field.alpha();
      for (int j = 1; j <= degree; ++j) {
        if (al == 0.0 && j > 1) break;
        // alpha^{j-1}/j!
        double lc = 1.0;
        for (int i = 2; i <= j; ++i) lc *= al / i;
        for (int k = 1; j + k <= degree; ++k) out.set(C::h1, j, k, lc * field.series().coeff(static_cast<std::size_t>(k)));
      }
      out.set(C::h2, 0, 1, kI);
      break;
    }
    case AnalyticVectorField::Kind::rotation:
      out.set(C::h2, 0, 1, kI * field.beta());
      break;
    case AnalyticVectorField::Kind::custom: {
      auto h1 = [&](cplx a, cplx b) { return field.h1(a, b); };
      auto h2 = [&](cplx a, cplx b) { return field.h2(a, b); };
      cauchy_coefficients(h1, degree, opts.radius_z1, opts.radius_z2, out, C::h1);
      cauchy_coefficients(h2, degree, opts.radius_z1, opts.radius_z2, out, C::h2);
      break;
    }
  }
  return out;
}

}  // namespace crlab
