#pragma once

#include <json.hpp>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "crlab/cr_dim.hpp"
#include "crlab/flow_lab.hpp"
#include "crlab/hypersurface.hpp"
#include "crlab/series.hpp"
#include "crlab/vector_field.hpp"

namespace crlab::io {

using nlohmann::json;
using nlohmann::ordered_json;

/// %.17g
std::string fmt(double x);

/// JSON text with every number printed at 17 significant digits and
/// non-finite numbers as null. Two-space indentation.
std::string dump(const ordered_json& j);

/// Parses JSON text; syntax errors become ConfigError with line and column.
json parse_text(const std::string& text, const std::string& source);

// ---------------------------------------------------------------------------
// Strict readers. Every reader rejects keys it does not know, naming them by
// their dotted path (e.g. "model.alhpa").

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// obj[key] when present, else def. Wrong types and values outside [lo, hi]
/// raise ConfigError naming path.key.
double read_number(const json& obj, const std::string& key, const std::string& path, double def,
                   double lo = -kInf, double hi = kInf);
int read_int(const json& obj, const std::string& key, const std::string& path, int def, int lo, int hi);
std::string read_string(const json& obj, const std::string& key, const std::string& path,
                        const std::string& def);
std::vector<double> read_numbers(const json& obj, const std::string& key, const std::string& path);
bool read_bool(const json& obj, const std::string& key, const std::string& path, bool def);

void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& path);
cplx read_complex(const json& j, const std::string& path);
TruncatedSeries read_series(const json& j, const std::string& path);
FlatProfile read_profile(const json& j, const std::string& path);
Perturbation read_perturbation(const json& j, const std::string& path);

struct ModelSpec {
  enum class Kind { family, radial, perturbed };
  Kind kind = Kind::family;
  FamilyParams family;
  RadialSpec radial;
  double perturb_eps = 0.0;
  int perturb_power = 3;

  HypersurfaceModel build() const;
};

/// {kind?, series, alpha, p, q, eps0, delta0} for the family;
/// {kind: "radial", P, q_kappa, q_lambda, eps0, delta0} for radial models;
/// the radial keys plus {perturb_eps, perturb_power} for "perturbed".
ModelSpec read_model(const json& j, const std::string& path);

/// {kind: "H", series, alpha} or {kind: "rotation", beta}.
AnalyticVectorField read_field(const json& j, const std::string& path);

AnnulusGrid read_annulus(const json& j, const std::string& path, AnnulusGrid defaults);

struct ScenarioConfig {
  CaseLabel label = CaseLabel::ell0;
  FlowSpec spec;
  ScenarioOptions options;
  // lemma_2_5 only
  int k = 0;
  Perturbation g;
  std::vector<double> radii;
};

/// {case, b, a, ell, m, n, k, g0, g1, g2, P, z0, t0, t_end, tol, n_samples}
/// and for case "lemma_2_5" {case, b, k, g, P, radii}.
ScenarioConfig read_scenario(const json& j, const std::string& path);

struct FlowConfig {
  FlowSpec spec;
  Annulus annulus;
  double tol = 1e-10;
  IntegratorOptions options;
  std::optional<std::pair<double, double>> fit_window;
  std::optional<double> expect_exponent;
  std::optional<double> exponent_tol;
};

/// {b, ell | k, g0, z0, t0, t_end, P, tol, n_samples, spacing, r_min, r_max,
///  fit_window, expect_exponent, exponent_tol}
FlowConfig read_flow(const json& j, const std::string& path);

// ---------------------------------------------------------------------------
// Reports

ordered_json to_json(const CollocationReport& rep, const CollocationSystem& sys);
ordered_json to_json(const GrowthReport& rep);
ordered_json to_json(const FlatnessReport& rep);
ordered_json to_json(const StepStats& stats);
const char* to_string(Termination t);

void write_samples_csv(std::ostream& os, const std::vector<SurfacePoint>& pts);
void write_identity_csv(std::ostream& os, const std::vector<IdentityRow>& rows);
/// t,z_re,z_im,abs_z,u; u is blank past a truncated probe.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const UProbe& u);
void write_residual_csv(std::ostream& os, const std::vector<double>& residuals);
void write_matrix_csv(std::ostream& os, const CollocationSystem& sys);

}  // namespace crlab::io
