#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crlab {

using cplx = std::complex<double>;

/// Truncated power series a(z) = sum_{n=1}^{N} a_n z^n.
///
/// The constant term is structurally absent, so a(0) == 0 exactly. Values are
/// immutable after construction.
class TruncatedSeries {
 public:
  static constexpr std::size_t kDefaultOrder = 16;

  TruncatedSeries() : coeffs_(kDefaultOrder, cplx{}) {}

  /// `coeffs[0]` is a_1. A truncation order larger than the coefficient list
  /// pads with zeros; a smaller one is rejected.
  explicit TruncatedSeries(std::vector<cplx> coeffs, std::size_t order = 0,
                           double eval_radius = 1.0);

  std::size_t order() const { return coeffs_.size(); }
  double eval_radius() const { return eval_radius_; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  /// a_n for n >= 1; zero for n == 0 and n beyond the truncation order.
  cplx coeff(std::size_t n) const {
    return (n == 0 || n > coeffs_.size()) ? cplx{} : coeffs_[n - 1];
  }

  bool is_zero() const;

  /// Largest |a_n|.
  double max_abs_coeff() const;

  TruncatedSeries operator+(const TruncatedSeries& other) const;
  TruncatedSeries operator*(cplx scale) const;

 private:
  std::vector<cplx> coeffs_;
  double eval_radius_ = 1.0;
};

/// Horner evaluation of a(z). Throws DomainError when |z| exceeds the
/// series' evaluation radius.
cplx eval_series(const TruncatedSeries& s, cplx z);

/// a(z)/z = sum a_n z^{n-1}, well defined at z = 0 (value a_1).
cplx eval_series_over_z(const TruncatedSeries& s, cplx z);

enum class CoeffTransform { div_n, div_in };

/// Coefficient n becomes a_n/n (div_n) or a_n/(i n) (div_in).
TruncatedSeries transform_coeffs(const TruncatedSeries& s, CoeffTransform mode);

/// Radial profile g(r) used for the flat ingredients of the hypersurface
/// family (p = log g, q = g) and for the flat functions of the flow lab.
class FlatProfile {
 public:
  enum class Kind { exp_inverse_power, zero, tabulated };

  static FlatProfile exp_inverse_power(double s, double scale = 1.0);
  static FlatProfile zero();
  /// Piecewise-linear table through (0, 0) and the given (radius, value) knots.
  static FlatProfile tabulated(std::vector<double> radii, std::vector<double> values,
                               std::string description = "tabulated");

  FlatProfile() = default;

  Kind kind() const { return kind_; }
  double exponent() const { return s_; }
  double scale() const { return scale_; }
  const std::string& description() const { return description_; }

  double value(double r) const;
  /// log value(r); -inf where the value is zero.
  double log_value(double r) const;
  double derivative(double r) const;
  /// d/dr log value(r), computed without forming value(r).
  double log_derivative(double r) const;

  /// True when log_value is available in closed form (no underflow).
  bool has_closed_log() const { return kind_ == Kind::exp_inverse_power; }

 private:
  Kind kind_ = Kind::zero;
  double s_ = 0.0;
  double scale_ = 0.0;
  std::vector<double> radii_;
  std::vector<double> values_;
  std::string description_ = "zero";
};

struct FlatnessReport {
  enum class Verdict { consistent_with_flat, violates };

  int order_tested = 0;
  std::vector<double> radii;
  std::vector<double> ratios;  ///< max |f(z)|/|z|^n on each circle
  double max_ratio = 0.0;
  double bound = 1.0;
  Verdict verdict = Verdict::consistent_with_flat;
  std::optional<double> violation_radius;

  bool consistent() const { return verdict == Verdict::consistent_with_flat; }
};

struct FlatnessOptions {
  int n_angles = 64;
  /// Relative growth tolerated between successive ratios past the peak.
  double slack = 1e-9;
  double domain_radius = 1.0;
};

/// Thrown when the probed function cannot be evaluated at a probe point.
class ProbeFailure : public std::runtime_error {
 public:
  ProbeFailure(const std::string& what, cplx where)
      : std::runtime_error(what), location(where) {}
  cplx location;
};

/// Finite test of |f(z)| <= C |z|^n near 0.
///
/// `radii` must be strictly decreasing. The verdict is consistent_with_flat
/// iff the ratio at the innermost radius is within C and, after the ratio
/// sequence peaks, no ratio above C grows again by more than the slack. A
/// violation is reported at the innermost radius whose ratio exceeds C.
FlatnessReport flatness_probe(const std::function<double(cplx)>& f, int n,
                              std::span<const double> radii, double bound,
                              const FlatnessOptions& opts = {});

/// Logarithmically spaced radii from r_hi down to r_lo (both included).
std::vector<double> log_radii(double r_hi, double r_lo, int count);

}  // namespace crlab
