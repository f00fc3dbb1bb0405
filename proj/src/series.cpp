#include "crlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "crlab/errors.hpp"

namespace crlab {

TruncatedSeries::TruncatedSeries(std::vector<cplx> coeffs, std::size_t order, double eval_radius)
    : coeffs_(std::move(coeffs)), eval_radius_(eval_radius) {
  if (order == 0) order = coeffs_.empty() ? kDefaultOrder : coeffs_.size();
  if (order < coeffs_.size()) {
    throw PreconditionError("truncation order " + std::to_string(order) +
                            " is smaller than the number of coefficients " +
                            std::to_string(coeffs_.size()));
  }
  if (!(eval_radius > 0.0)) throw PreconditionError("evaluation radius must be positive");
  coeffs_.resize(order, cplx{});
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
}

double TruncatedSeries::max_abs_coeff() const {
  double m = 0.0;
  for (cplx c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& other) const {
  std::vector<cplx> out(std::max(order(), other.order()));
  for (std::size_t n = 1; n <= out.size(); ++n) out[n - 1] = coeff(n) + other.coeff(n);
  return TruncatedSeries(std::move(out), 0, std::min(eval_radius_, other.eval_radius_));
}

TruncatedSeries TruncatedSeries::operator*(cplx scale) const {
  std::vector<cplx> out(coeffs_);
  for (auto& c : out) c *= scale;
  return TruncatedSeries(std::move(out), 0, eval_radius_);
}

cplx eval_series(const TruncatedSeries& s, cplx z) {
  if (std::abs(z) > s.eval_radius()) {
    std::ostringstream msg;
    msg << "series evaluated at |z| = " << std::abs(z) << " outside radius " << s.eval_radius();
    throw DomainError(msg.str());
  }
  return z * eval_series_over_z(s, z);
}

cplx eval_series_over_z(const TruncatedSeries& s, cplx z) {
  auto c = s.coeffs();
  cplx acc{};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

TruncatedSeries transform_coeffs(const TruncatedSeries& s, CoeffTransform mode) {
  std::vector<cplx> out(s.coeffs().begin(), s.coeffs().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    out[i] = mode == CoeffTransform::div_n ? out[i] / n : out[i] / cplx(0.0, n);
  }
  return TruncatedSeries(std::move(out), 0, s.eval_radius());
}

// ---------------------------------------------------------------------------

FlatProfile FlatProfile::exp_inverse_power(double s, double scale) {
  if (!(s > 0.0)) throw PreconditionError("exp_inverse_power needs a positive exponent");
  if (!(scale > 0.0)) throw PreconditionError("exp_inverse_power needs a positive scale");
  FlatProfile p;
  p.kind_ = Kind::exp_inverse_power;
  p.s_ = s;
  p.scale_ = scale;
  std::ostringstream d;
  if (scale != 1.0) d << scale << "*";
  d << "exp(-r^-" << s << ")";
  p.description_ = d.str();
  return p;
}

FlatProfile FlatProfile::zero() {
  return FlatProfile{};
}

FlatProfile FlatProfile::tabulated(std::vector<double> radii, std::vector<double> values,
                                   std::string description) {
  if (radii.size() != values.size() || radii.empty())
    throw PreconditionError("tabulated profile needs matching, non-empty knot lists");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw PreconditionError("tabulated radii must be positive and increasing");
    if (!(values[i] >= 0.0)) throw PreconditionError("tabulated values must be non-negative");
  }
  FlatProfile p;
  p.kind_ = Kind::tabulated;
  p.radii_.reserve(radii.size() + 1);
  p.values_.reserve(values.size() + 1);
  p.radii_.push_back(0.0);
  p.values_.push_back(0.0);
  p.radii_.insert(p.radii_.end(), radii.begin(), radii.end());
  p.values_.insert(p.values_.end(), values.begin(), values.end());
  p.description_ = std::move(description);
  return p;
}

double FlatProfile::value(double r) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::exp_inverse_power:
      return r <= 0.0 ? 0.0 : scale_ * std::exp(-std::pow(r, -s_));
    case Kind::tabulated: {
      if (r <= 0.0) return 0.0;
      if (r >= radii_.back()) return values_.back();
      auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - radii_.begin());
      const double w = (r - radii_[i - 1]) / (radii_[i] - radii_[i - 1]);
      return (1.0 - w) * values_[i - 1] + w * values_[i];
    }
  }
  return 0.0;
}

double FlatProfile::log_value(double r) const {
  if (kind_ == Kind::exp_inverse_power) {
    if (r <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(scale_) - std::pow(r, -s_);
  }
  const double v = value(r);
  return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

double FlatProfile::derivative(double r) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::exp_inverse_power:
      if (r <= 0.0) return 0.0;
      return value(r) * s_ * std::pow(r, -s_ - 1.0);
    case Kind::tabulated: {
      if (r <= 0.0 || r >= radii_.back()) return 0.0;
      auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - radii_.begin());
      return (values_[i] - values_[i - 1]) / (radii_[i] - radii_[i - 1]);
    }
  }
  return 0.0;
}

double FlatProfile::log_derivative(double r) const {
  if (kind_ == Kind::exp_inverse_power) return r <= 0.0 ? 0.0 : s_ * std::pow(r, -s_ - 1.0);
  const double v = value(r);
  return v > 0.0 ? derivative(r) / v : 0.0;
}

// ---------------------------------------------------------------------------

FlatnessReport flatness_probe(const std::function<double(cplx)>& f, int n,
                              std::span<const double> radii, double bound,
                              const FlatnessOptions& opts) {
  if (radii.empty()) throw PreconditionError("flatness_probe needs at least one radius");
  if (opts.n_angles < 1) throw PreconditionError("flatness_probe needs a positive angle count");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !(radii[i] < opts.domain_radius))
      throw PreconditionError("probe radii must lie in (0, domain radius)");
    if (i > 0 && !(radii[i] < radii[i - 1]))
      throw PreconditionError("probe radii must be strictly decreasing");
  }

  FlatnessReport rep;
  rep.order_tested = n;
  rep.bound = bound;
  rep.radii.assign(radii.begin(), radii.end());
  rep.ratios.reserve(radii.size());

  for (double r : radii) {
    double worst = 0.0;
    const double rn = std::pow(r, n);
    for (int a = 0; a < opts.n_angles; ++a) {
      const double theta = 2.0 * std::numbers::pi * a / opts.n_angles;
      const cplx z = std::polar(r, theta);
      double v;
      try {
        v = f(z);
      } catch (const std::exception& e) {
        throw ProbeFailure(std::string("probe function failed: ") + e.what(), z);
      }
      if (!std::isfinite(v)) throw ProbeFailure("probe function returned a non-finite value", z);
      worst = std::max(worst, std::abs(v) / rn);
    }
    rep.ratios.push_back(worst);
  }

  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  const std::size_t peak = static_cast<std::size_t>(
      std::max_element(rep.ratios.begin(), rep.ratios.end()) - rep.ratios.begin());

  bool ok = rep.ratios.back() <= bound;
  for (std::size_t i = peak + 1; ok && i < rep.ratios.size(); ++i) {
    if (rep.ratios[i] > bound && rep.ratios[i] > rep.ratios[i - 1] * (1.0 + opts.slack)) ok = false;
  }
  if (ok) {
    rep.verdict = FlatnessReport::Verdict::consistent_with_flat;
  } else {
    rep.verdict = FlatnessReport::Verdict::violates;
    for (std::size_t i = rep.ratios.size(); i-- > 0;) {
      if (rep.ratios[i] > bound) {
        rep.violation_radius = rep.radii[i];
        break;
      }
    }
  }
  return rep;
}

std::vector<double> log_radii(double r_hi, double r_lo, int count) {
  if (count < 1 || !(r_hi > 0.0) || !(r_lo > 0.0))
    throw PreconditionError("log_radii needs positive bounds and count");
  if (count == 1) return {r_hi};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double lh = std::log(r_hi), ll = std::log(r_lo);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(lh + (ll - lh) * i / (count - 1));
  out.front() = r_hi;
  out.back() = r_lo;
  return out;
}

}  // namespace crlab
