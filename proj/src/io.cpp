#include "crlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "crlab/errors.hpp"

namespace crlab::io {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump_rec(const ordered_json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ordered_json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_rec(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

ordered_json cplx_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

}  // namespace

double read_number(const json& obj, const std::string& key, const std::string& path, double def,
                   double lo, double hi) {
  if (!obj.contains(key)) return def;
  const json& j = obj.at(key);
  if (!j.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double v = j.get<double>();
  if (!(v >= lo && v <= hi)) {
    std::ostringstream msg;
    msg << "value " << v << " outside [" << lo << ", " << hi << "]";
    throw ConfigError(join(path, key), msg.str());
  }
  return v;
}

int read_int(const json& obj, const std::string& key, const std::string& path, int def, int lo, int hi) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi) {
    std::ostringstream msg;
    msg << "value " << x << " outside [" << lo << ", " << hi << "]";
    throw ConfigError(join(path, key), msg.str());
  }
  return static_cast<int>(x);
}

std::string read_string(const json& obj, const std::string& key, const std::string& path, const std::string& def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> read_numbers(const json& obj, const std::string& key, const std::string& path) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(join(path, key), "expected an array of numbers");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

bool read_bool(const json& obj, const std::string& key, const std::string& path, bool def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::string dump(const ordered_json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    const auto last_nl = text.rfind('\n', upto == 0 ? 0 : upto - 1);
    const std::size_t col = last_nl == std::string::npos ? upto + 1 : upto - last_nl;
    std::ostringstream msg;
    msg << "JSON syntax error at line " << line << ", column " << col;
    throw ConfigError(source, msg.str());
  }
}

void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& path) {
  require_object(obj, path.empty() ? "<root>" : path);
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(join(path, it.key()), "unknown key");
}

cplx read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(path, "expected a number or [re, im]");
}

TruncatedSeries read_series(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of [re, im] coefficients");
  std::vector<cplx> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(read_complex(j[i], path + "[" + std::to_string(i) + "]"));
  const std::size_t order = std::max(c.size(), TruncatedSeries::kDefaultOrder);
  return TruncatedSeries(std::move(c), order);
}

FlatProfile read_profile(const json& j, const std::string& path) {
  check_keys(j, {"kind", "s", "scale", "radii", "values"}, path);
  const std::string kind = read_string(j, "kind", path, "exp_inverse_power");
  if (kind == "exp_inverse_power") {
    const double s = read_number(j, "s", path, 2.0, 1e-3, 1e3);
    const double scale = read_number(j, "scale", path, 1.0, 1e-300, 1e300);
    return FlatProfile::exp_inverse_power(s, scale);
  }
  if (kind == "zero") return FlatProfile::zero();
  if (kind == "tabulated") {
    try {
      return FlatProfile::tabulated(read_numbers(j, "radii", path), read_numbers(j, "values", path));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
  }
  throw ConfigError(join(path, "kind"), "unknown profile kind '" + kind + "'");
}

Perturbation read_perturbation(const json& j, const std::string& path) {
  check_keys(j, {"kind", "scale", "power"}, path);
  const std::string kind = read_string(j, "kind", path, "monomial");
  Perturbation g;
  if (kind == "zero") return g;
  if (kind != "monomial") throw ConfigError(join(path, "kind"), "expected 'zero' or 'monomial'");
  g.scale = j.contains("scale") ? read_complex(j.at("scale"), join(path, "scale")) : cplx{};
  g.power = read_int(j, "power", path, 1, 0, 64);
  return g;
}

HypersurfaceModel ModelSpec::build() const {
  switch (kind) {
    case Kind::family:
      return build_family(family);
    case Kind::radial:
      return HypersurfaceModel::radial(radial);
    case Kind::perturbed:
      return perturbed_radial(radial, perturb_eps, perturb_power);
  }
  throw ConstructionError("unknown model kind");
}

ModelSpec read_model(const json& j, const std::string& path) {
  require_object(j, path);
  ModelSpec m;
  const std::string kind = read_string(j, "kind", path, "family");
  if (kind == "family") {
    check_keys(j, {"kind", "series", "alpha", "p", "q", "eps0", "delta0"}, path);
    m.kind = ModelSpec::Kind::family;
    if (!j.contains("series")) throw ConfigError(join(path, "series"), "missing");
    m.family.a = read_series(j.at("series"), join(path, "series"));
    m.family.alpha = read_number(j, "alpha", path, 0.0, -1e6, 1e6);
    if (j.contains("p")) m.family.p = read_profile(j.at("p"), join(path, "p"));
    if (j.contains("q")) m.family.q = read_profile(j.at("q"), join(path, "q"));
    m.family.eps0 = read_number(j, "eps0", path, m.family.eps0, 1e-6, 1.0);
    m.family.delta0 =
        read_number(j, "delta0", path, std::min(0.5, FamilyParams::max_delta0(m.family.alpha)), 1e-9, 1e6);
    return m;
  }
  if (kind == "radial" || kind == "perturbed") {
    std::vector<std::string> keys{"kind", "P", "q_kappa", "q_lambda", "eps0", "delta0"};
    if (kind == "perturbed") {
      keys.push_back("perturb_eps");
      keys.push_back("perturb_power");
    }
    check_keys(j, keys, path);
    m.kind = kind == "radial" ? ModelSpec::Kind::radial : ModelSpec::Kind::perturbed;
    if (j.contains("P")) m.radial.P = read_profile(j.at("P"), join(path, "P"));
    m.radial.q_kappa = read_number(j, "q_kappa", path, 0.0, -1e6, 1e6);
    m.radial.q_lambda = read_number(j, "q_lambda", path, 0.0, -1e6, 1e6);
    m.radial.eps0 = read_number(j, "eps0", path, m.radial.eps0, 1e-6, 1e3);
    m.radial.delta0 = read_number(j, "delta0", path, m.radial.delta0, 1e-9, 1e6);
    if (kind == "perturbed") {
      m.perturb_eps = read_number(j, "perturb_eps", path, 0.05, -1e3, 1e3);
      m.perturb_power = read_int(j, "perturb_power", path, 3, 1, 64);
    }
    return m;
  }
  throw ConfigError(join(path, "kind"), "expected 'family', 'radial' or 'perturbed'");
}

AnalyticVectorField read_field(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string kind = read_string(j, "kind", path, "");
  if (kind == "H") {
    check_keys(j, {"kind", "series", "alpha"}, path);
    if (!j.contains("series")) throw ConfigError(join(path, "series"), "missing");
    return AnalyticVectorField::H(read_series(j.at("series"), join(path, "series")),
                                  read_number(j, "alpha", path, 0.0));
  }
  if (kind == "rotation") {
    check_keys(j, {"kind", "beta"}, path);
    return AnalyticVectorField::rotation(read_number(j, "beta", path, 1.0));
  }
  throw ConfigError(join(path, "kind"), "expected 'H' or 'rotation'");
}

AnnulusGrid read_annulus(const json& j, const std::string& path, AnnulusGrid g) {
  check_keys(j, {"r_min", "r_max", "n_radii", "n_angles"}, path);
  g.r_min = read_number(j, "r_min", path, g.r_min, 0.0, 1e3);
  g.r_max = read_number(j, "r_max", path, g.r_max, 0.0, 1e3);
  g.n_radii = read_int(j, "n_radii", path, g.n_radii, 1, 100000);
  g.n_angles = read_int(j, "n_angles", path, g.n_angles, 1, 100000);
  if (g.r_max < g.r_min) throw ConfigError(join(path, "r_max"), "must be >= r_min");
  return g;
}

ScenarioConfig read_scenario(const json& j, const std::string& path) {
  require_object(j, path);
  ScenarioConfig sc;
  const std::string label = read_string(j, "case", path, "");
  const auto c = case_from_string(label);
  if (!c) throw ConfigError(join(path, "case"), "unknown case '" + label + "'");
  sc.label = *c;
  FlowSpec& s = sc.spec;
  if (j.contains("P")) s.P = read_profile(j.at("P"), join(path, "P"));
  if (j.contains("b")) s.b = read_complex(j.at("b"), join(path, "b"));

  if (sc.label == CaseLabel::lemma_2_5) {
    check_keys(j, {"case", "b", "k", "g", "P", "radii"}, path);
    sc.k = read_int(j, "k", path, 0, 0, 64);
    if (j.contains("g")) sc.g = read_perturbation(j.at("g"), join(path, "g"));
    sc.radii = read_numbers(j, "radii", path);
    if (sc.radii.empty()) sc.radii = log_radii(0.5, 0.05, 10);
    return sc;
  }

  check_keys(j, {"case", "b", "a", "ell", "m", "n", "k", "g0", "g1", "g2", "P", "z0", "t0", "t_end",
                 "tol", "n_samples"},
             path);
  if (j.contains("a")) s.a = read_complex(j.at("a"), join(path, "a"));
  s.ell = read_int(j, "ell", path, -1, 0, 64);
  if (j.contains("k")) {
    const int k = read_int(j, "k", path, 1, 1, 63);
    if (s.ell >= 0 && s.ell != k + 1) throw ConfigError(join(path, "k"), "inconsistent with ell = k + 1");
    s.ell = k + 1;
  }
  if (s.ell < 0) throw ConfigError(join(path, "ell"), "missing (give ell or k)");
  s.m = read_int(j, "m", path, 1, 0, 64);
  s.n = read_int(j, "n", path, 0, 0, 64);
  if (j.contains("g0")) s.g0 = read_perturbation(j.at("g0"), join(path, "g0"));
  if (j.contains("g1")) s.g1 = read_perturbation(j.at("g1"), join(path, "g1"));
  if (j.contains("g2")) s.g2 = read_perturbation(j.at("g2"), join(path, "g2"));
  if (j.contains("z0")) s.z0 = read_complex(j.at("z0"), join(path, "z0"));
  s.t0 = read_number(j, "t0", path, 0.0, 0.0, 1e12);
  s.t_end = read_number(j, "t_end", path, 1.0, 0.0, 1e12);
  sc.options.tol = read_number(j, "tol", path, sc.options.tol, 1e-12, 1e-6);
  sc.options.n_samples = read_int(j, "n_samples", path, sc.options.n_samples, 10, 10'000'000);
  return sc;
}

FlowConfig read_flow(const json& j, const std::string& path) {
  check_keys(j, {"b", "ell", "k", "g0", "z0", "t0", "t_end", "P", "tol", "n_samples", "spacing",
                 "r_min", "r_max", "fit_window", "expect_exponent", "exponent_tol"},
             path);
  FlowConfig fc;
  FlowSpec& s = fc.spec;
  if (j.contains("b")) s.b = read_complex(j.at("b"), join(path, "b"));
  s.ell = read_int(j, "ell", path, 2, 0, 64);
  if (j.contains("k")) {
    const int k = read_int(j, "k", path, 1, 1, 63);
    if (j.contains("ell") && s.ell != k + 1) throw ConfigError(join(path, "k"), "inconsistent with ell = k + 1");
    s.ell = k + 1;
  }
  if (j.contains("g0")) s.g0 = read_perturbation(j.at("g0"), join(path, "g0"));
  if (j.contains("z0")) s.z0 = read_complex(j.at("z0"), join(path, "z0"));
  if (j.contains("P")) s.P = read_profile(j.at("P"), join(path, "P"));
  s.t0 = read_number(j, "t0", path, 0.0, 0.0, 1e12);
  s.t_end = read_number(j, "t_end", path, 1.0, 0.0, 1e12);
  if (!(s.t_end > s.t0)) throw ConfigError(join(path, "t_end"), "must exceed t0");
  fc.tol = read_number(j, "tol", path, fc.tol, 1e-12, 1e-6);
  fc.options.n_samples = read_int(j, "n_samples", path, fc.options.n_samples, 2, 10'000'000);
  const std::string spacing = read_string(j, "spacing", path, "log");
  if (spacing == "log")
    fc.options.spacing = SampleSpacing::log;
  else if (spacing == "linear")
    fc.options.spacing = SampleSpacing::linear;
  else
    throw ConfigError(join(path, "spacing"), "expected 'log' or 'linear'");
  fc.annulus.r_min = read_number(j, "r_min", path, 0.0, 0.0, kInf);
  fc.annulus.r_max = read_number(j, "r_max", path, kInf, 0.0, kInf);
  if (j.contains("fit_window")) {
    const auto w = read_numbers(j, "fit_window", path);
    if (w.size() != 2 || !(w[0] > 0.0 && w[1] > w[0]))
      throw ConfigError(join(path, "fit_window"), "expected [t_lo, t_hi] with 0 < t_lo < t_hi");
    fc.fit_window = std::make_pair(w[0], w[1]);
  }
  if (j.contains("expect_exponent")) {
    if (!fc.fit_window) throw ConfigError(join(path, "expect_exponent"), "needs fit_window");
    fc.expect_exponent = read_number(j, "expect_exponent", path, 0.0);
  }
  if (j.contains("exponent_tol")) fc.exponent_tol = read_number(j, "exponent_tol", path, 0.02, 0.0, 10.0);
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
  return fc;
}

// ---------------------------------------------------------------------------

ordered_json to_json(const CollocationReport& rep, const CollocationSystem& sys) {
  ordered_json j;
  j["singular_values"] = rep.singular_values;
  j["null_dim"] = rep.null_dim;
  j["gap_ratio"] = rep.gap_ratio;
  j["threshold"] = rep.threshold;
  j["verdict"] = rep.verdict == DimVerdict::determined ? "determined" : "indeterminate";
  ordered_json basis = ordered_json::array();
  for (const auto& v : rep.basis_vectors) {
    ordered_json vec = ordered_json::array();
    const PolyVectorField f = unflatten(v, sys.columns, sys.degree);
    for (const auto& key : sys.columns) {
      if (key.imag) continue;
      const cplx c = f.get(key.field, key.j, key.k);
      if (c == cplx{}) continue;
      ordered_json e;
      e["field"] = key.field == PolyVectorField::Component::h1 ? "h1" : "h2";
      e["j"] = key.j;
      e["k"] = key.k;
      e["re"] = c.real();
      e["im"] = c.imag();
      vec.push_back(e);
    }
    basis.push_back(vec);
  }
  j["basis"] = basis;
  ordered_json refs = ordered_json::object();
  for (const auto& [name, val] : rep.reference_residuals) refs[name] = val;
  j["reference_residuals"] = refs;
  j["degree"] = sys.degree;
  j["rows"] = sys.matrix.rows();
  j["columns"] = sys.matrix.cols();
  j["grid"] = sys.sample_meta;
  j["dead_radii"] = sys.dead_radii;
  return j;
}

ordered_json to_json(const GrowthReport& r) {
  ordered_json j;
  j["case"] = to_string(r.case_label);
  if (r.case_label == CaseLabel::lemma_2_5) {
    j["certified"] = r.certified;
    if (r.certified_radius) j["certified_radius"] = *r.certified_radius;
    if (r.certified_point) j["certified_point"] = cplx_json(*r.certified_point);
  } else {
    j["growth_class"] = to_string(r.growth_class);
    if (r.fitted_exponent) j["fitted_exponent"] = *r.fitted_exponent;
    j["total_variation"] = r.fit.total_variation;
    j["r2_log"] = r.fit.r2_log;
    j["r2_linear"] = r.fit.r2_linear;
    j["u_crosscheck"] = r.u_crosscheck;
    j["delta_u_actual"] = r.delta_u_actual;
    j["delta_u_identity"] = r.delta_u_identity;
    j["contradiction"] = r.contradiction;
    if (r.branch) j["branch"] = *r.branch;
    if (r.max_cosine) j["max_cosine"] = *r.max_cosine;
    if (r.eps_max) j["eps_max"] = *r.eps_max;
    if (r.r1) j["r1"] = *r.r1;
    j["mirrored_time"] = r.mirrored_time;
  }
  j["predicted"] = r.predicted;
  j["agreement"] = r.agreement;
  j["margin"] = r.margin;
  j["inconclusive"] = r.inconclusive;
  j["note"] = r.note;
  return j;
}

ordered_json to_json(const FlatnessReport& r) {
  ordered_json j;
  j["order_tested"] = r.order_tested;
  j["radii"] = r.radii;
  j["ratios"] = r.ratios;
  j["max_ratio"] = r.max_ratio;
  j["bound"] = r.bound;
  j["verdict"] = r.consistent() ? "consistent_with_flat" : "violates";
  if (r.violation_radius) j["violation_radius"] = *r.violation_radius;
  return j;
}

ordered_json to_json(const StepStats& s) {
  ordered_json j;
  j["accepted"] = s.accepted;
  j["rejected"] = s.rejected;
  j["rhs_evals"] = s.rhs_evals;
  j["min_step"] = s.min_step;
  j["max_step"] = s.max_step;
  j["tol"] = s.tol;
  return j;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_end: return "reached_t_end";
    case Termination::exited_annulus: return "exited_annulus";
    case Termination::step_underflow: return "step_underflow";
  }
  return "?";
}

void write_samples_csv(std::ostream& os, const std::vector<SurfacePoint>& pts) {
  os << "z1_re,z1_im,z2_re,z2_im,t\n";
  for (const auto& p : pts)
    os << fmt(p.z1.real()) << ',' << fmt(p.z1.imag()) << ',' << fmt(p.z2.real()) << ','
       << fmt(p.z2.imag()) << ',' << fmt(p.t) << '\n';
}

void write_identity_csv(std::ostream& os, const std::vector<IdentityRow>& rows) {
  os << "z2_re,z2_im,t,res_i,res_ii,res_iii,res_iv,res_v\n";
  for (const auto& r : rows) {
    os << fmt(r.z2.real()) << ',' << fmt(r.z2.imag()) << ',' << fmt(r.t);
    for (double x : r.res) os << ',' << fmt(x);
    os << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const UProbe& u) {
  os << "t,z_re,z_im,abs_z,u\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const cplx z = traj.points[i];
    os << fmt(traj.times[i]) << ',' << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(std::abs(z))
       << ',';
    if (i < u.u.size()) os << fmt(u.u[i]);
    os << '\n';
  }
}

void write_residual_csv(std::ostream& os, const std::vector<double>& residuals) {
  os << "point,residual\n";
  for (std::size_t i = 0; i < residuals.size(); ++i) os << i << ',' << fmt(residuals[i]) << '\n';
}

void write_matrix_csv(std::ostream& os, const CollocationSystem& sys) {
  for (std::size_t c = 0; c < sys.columns.size(); ++c) os << (c ? "," : "") << sys.columns[c].name();
  os << '\n';
  for (Eigen::Index r = 0; r < sys.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < sys.matrix.cols(); ++c) os << (c ? "," : "") << fmt(sys.matrix(r, c));
    os << '\n';
  }
}

}  // namespace crlab::io
