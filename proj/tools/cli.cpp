#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "crlab/cr_dim.hpp"
#include "crlab/errors.hpp"
#include "crlab/flow_lab.hpp"
#include "crlab/hypersurface.hpp"
#include "crlab/io.hpp"
#include "crlab/parallel.hpp"
#include "crlab/vector_field.hpp"

namespace crlab::cli {

namespace fs = std::filesystem;
using io::json;
using io::ordered_json;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double identity;
  double tangency;
  double rho;
  double min_gap;
  double exponent_tol;
  double crosscheck;
};

constexpr Tolerances kDefault{1e-10, 1e-9, 1e-12, 1e4, 0.02, 1e-4};
constexpr Tolerances kStrict{1e-12, 1e-11, 1e-14, 1e6, 0.01, 3e-5};

struct Context {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  std::string profile = "default";
  Tolerances tol = kDefault;
  fs::path out_dir;
  std::ostream* out = nullptr;
};

const std::vector<std::string> kCommands{"verify", "sample", "flow", "scenario", "dim", "flatness"};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write " + p.string());
  f << text;
  if (!f) throw IoError("write failed: " + p.string());
}

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

/// Stem under which neither <stem>.json nor <stem>.csv exists yet.
fs::path report_stem(const Context& ctx) {
  const std::string base = ctx.command + "-" + utc_stamp();
  for (int i = 0;; ++i) {
    const std::string name = i == 0 ? base : base + "-" + std::to_string(i);
    const fs::path stem = ctx.out_dir / name;
    if (!fs::exists(stem.string() + ".json") && !fs::exists(stem.string() + ".csv")) return stem;
  }
}

struct Outputs {
  ordered_json report;
  std::optional<std::string> csv;
  bool pass = false;
};

ordered_json header(const Context& ctx) {
  ordered_json j;
  j["command"] = ctx.command;
  j["seed"] = ctx.seed;
  j["tolerance_profile"] = ctx.profile;
  j["config"] = ordered_json::parse(ctx.config.dump());
  return j;
}

const json& section(const Context& ctx, const std::string& key) {
  static const json empty = json::object();
  return ctx.config.contains(key) ? ctx.config.at(key) : empty;
}

io::ModelSpec default_family() {
  io::ModelSpec m;
  m.kind = io::ModelSpec::Kind::family;
  m.family.a = TruncatedSeries({cplx{1.0, 0.0}});
  m.family.alpha = 1.0;
  m.family.delta0 = std::min(0.5, FamilyParams::max_delta0(1.0));
  return m;
}

io::ModelSpec default_radial() {
  io::ModelSpec m;
  m.kind = io::ModelSpec::Kind::radial;
  return m;
}

io::ModelSpec model_spec(const Context& ctx, const io::ModelSpec& fallback) {
  return ctx.config.contains("model") ? io::read_model(ctx.config.at("model"), "model") : fallback;
}

/// The configured model, or draw_family(seed + i) for i < draws when "draws" is set.
std::vector<io::ModelSpec> model_list(const Context& ctx, const io::ModelSpec& fallback) {
  const int draws = io::read_int(ctx.config, "draws", "", 0, 0, 100000);
  if (draws == 0) return {model_spec(ctx, fallback)};
  if (ctx.config.contains("model")) throw ConfigError("draws", "give either model or draws");
  std::vector<io::ModelSpec> out;
  for (int i = 0; i < draws; ++i) {
    io::ModelSpec m;
    m.kind = io::ModelSpec::Kind::family;
    m.family = draw_family(ctx.seed + static_cast<std::uint64_t>(i));
    out.push_back(std::move(m));
  }
  return out;
}

HypersurfaceModel build(const io::ModelSpec& spec, const std::string& path) {
  try {
    return spec.build();
  } catch (const ConstructionError& e) {
    throw ConfigError(path, e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
}

struct GridConfig {
  AnnulusGrid annulus;
  std::vector<double> t_values;
};

GridConfig read_grid(const Context& ctx, const HypersurfaceModel& model) {
  const json& g = section(ctx, "grid");
  io::check_keys(g, {"r_min", "r_max", "n_radii", "n_angles", "t_count", "t_max"}, "grid");
  json ann = g;
  ann.erase("t_count");
  ann.erase("t_max");
  GridConfig out;
  out.annulus = io::read_annulus(ann, "grid", default_annulus(model, 8, 32));
  const int count = io::read_int(g, "t_count", "grid", 5, 1, 10001);
  const double t_max = io::read_number(g, "t_max", "grid", std::min(0.25, 0.5 * model.delta0()), 0.0,
                                       std::nextafter(model.delta0(), 0.0));
  out.t_values = symmetric_t_values(count, t_max);
  return out;
}

ordered_json thresholds_section(const Context& ctx, const std::vector<std::pair<std::string, double*>>& items) {
  const json& t = section(ctx, "thresholds");
  std::vector<std::string> keys;
  for (const auto& [k, _] : items) keys.push_back(k);
  io::check_keys(t, keys, "thresholds");
  ordered_json j;
  for (const auto& [k, v] : items) {
    *v = io::read_number(t, k, "thresholds", *v, 0.0, io::kInf);
    j[k] = *v;
  }
  return j;
}

// ---------------------------------------------------------------------------

Outputs cmd_verify(const Context& ctx) {
  io::check_keys(ctx.config, {"command", "model", "draws", "grid", "thresholds", "output_path"}, "");
  double id_thr = ctx.tol.identity, tan_thr = ctx.tol.tangency;
  Outputs o;
  o.report = header(ctx);
  const ordered_json thr = thresholds_section(ctx, {{"identity", &id_thr}, {"tangency", &tan_thr}});

  std::ostringstream csv;
  std::vector<IdentityRow> all_rows;
  ordered_json models = ordered_json::array();
  std::array<double, 5> worst{};
  double worst_tan = 0.0;
  const auto specs = model_list(ctx, default_family());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].kind != io::ModelSpec::Kind::family) throw ConfigError("model.kind", "verify needs a family model");
    const HypersurfaceModel model = build(specs[i], "model");
    const GridConfig grid = read_grid(ctx, model);
    const auto rows = identity_grid(*model.family(), grid.annulus, grid.t_values);
    std::array<double, 5> mx{};
    for (const auto& r : rows)
      for (std::size_t q = 0; q < 5; ++q) mx[q] = std::max(mx[q], r.res[q]);
    const auto field = AnalyticVectorField::H(specs[i].family.a, specs[i].family.alpha);
    const auto pts = sample_points(model, grid.annulus, grid.t_values);
    std::vector<double> tan(pts.size());
    parallel_for(static_cast<long>(pts.size()), [&](long p) {
      tan[static_cast<std::size_t>(p)] = std::abs(tangency_residual(model, field, pts[static_cast<std::size_t>(p)]));
    });
    const double mtan = *std::max_element(tan.begin(), tan.end());
    ordered_json m;
    m["alpha"] = specs[i].family.alpha;
    ordered_json coeffs = ordered_json::array();
    for (std::size_t n = 1; n <= specs[i].family.a.order(); ++n) {
      const cplx c = specs[i].family.a.coeff(n);
      if (c != cplx{}) coeffs.push_back({{"n", n}, {"re", c.real()}, {"im", c.imag()}});
    }
    m["series"] = coeffs;
    m["points"] = rows.size();
    m["max_identity"] = mx;
    m["max_tangency"] = mtan;
    models.push_back(m);
    for (std::size_t q = 0; q < 5; ++q) worst[q] = std::max(worst[q], mx[q]);
    worst_tan = std::max(worst_tan, mtan);
    all_rows.insert(all_rows.end(), rows.begin(), rows.end());
  }
  io::write_identity_csv(csv, all_rows);
  o.csv = csv.str();

  const double worst_id = *std::max_element(worst.begin(), worst.end());
  o.report["models"] = models;
  o.report["max_identity"] = worst;
  o.report["max_tangency"] = worst_tan;
  o.report["thresholds"] = thr;
  o.pass = worst_id < id_thr && worst_tan < tan_thr;
  o.report["gates"] = {{"identity", worst_id < id_thr}, {"tangency", worst_tan < tan_thr}};
  *ctx.out << "max identity residual " << io::fmt(worst_id) << ", max tangency residual "
           << io::fmt(worst_tan) << "\n";
  return o;
}

Outputs cmd_sample(const Context& ctx) {
  io::check_keys(ctx.config, {"command", "model", "grid", "thresholds", "output_path"}, "");
  double rho_thr = ctx.tol.rho;
  Outputs o;
  o.report = header(ctx);
  const ordered_json thr = thresholds_section(ctx, {{"rho", &rho_thr}});
  const HypersurfaceModel model = build(model_spec(ctx, default_family()), "model");
  const GridConfig grid = read_grid(ctx, model);
  const auto pts = sample_points(model, grid.annulus, grid.t_values);
  double mx = 0.0;
  for (const auto& p : pts) mx = std::max(mx, std::abs(model.rho(p.z1, p.z2)));
  std::ostringstream csv;
  io::write_samples_csv(csv, pts);
  o.csv = csv.str();
  o.report["points"] = pts.size();
  o.report["max_abs_rho"] = mx;
  o.report["thresholds"] = thr;
  o.pass = mx < rho_thr;
  o.report["gates"] = {{"rho", o.pass}};
  *ctx.out << pts.size() << " points, max |rho| " << io::fmt(mx) << "\n";
  return o;
}

Outputs cmd_flow(const Context& ctx) {
  io::check_keys(ctx.config, {"command", "flow", "output_path"}, "");
  const io::FlowConfig fc = io::read_flow(section(ctx, "flow"), "flow");
  Outputs o;
  o.report = header(ctx);
  const Trajectory traj = integrate_flow(fc.spec, fc.annulus, fc.tol, fc.options);
  const UProbe u = u_probe(fc.spec.P, traj);
  std::ostringstream csv;
  io::write_trajectory_csv(csv, traj, u);
  o.csv = csv.str();

  const bool reached = traj.terminated == Termination::reached_t_end;
  o.report["termination"] = io::to_string(traj.terminated);
  o.report["samples"] = traj.times.size();
  o.report["final_time"] = traj.times.back();
  o.report["final_point"] = {traj.points.back().real(), traj.points.back().imag()};
  o.report["steps"] = io::to_json(traj.stats);
  ordered_json gates;
  gates["reached_t_end"] = reached;
  o.pass = reached;

  if (fc.spec.g0.is_zero() && fc.spec.ell >= 2) {
    try {
      const auto ref = BranchReference::through(fc.spec.b, fc.spec.k(), fc.spec.z0, fc.spec.t0);
      if (!crosses_cut(ref, fc.spec.t0, traj.times.back())) {
        double dev = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
          const cplx w = reference_omega(ref, traj.times[i]);
          dev = std::max(dev, std::abs(traj.points[i] - w) / std::abs(w));
        }
        o.report["reference_branch"] = ref.j;
        o.report["reference_deviation"] = dev;
      }
    } catch (const BranchError&) {
    }
  }

  if (fc.fit_window) {
    const auto [lo, hi] = *fc.fit_window;
    const PowerLawFit fit = fit_power_law(traj, lo, hi);
    ordered_json f;
    f["window"] = {lo, hi};
    f["slope"] = fit.slope;
    f["stderr"] = fit.stderr_;
    f["intercept"] = fit.intercept;
    f["samples"] = fit.samples;
    f["is_power_law"] = fit.is_power_law;
    if (fc.expect_exponent) {
      const double expect = *fc.expect_exponent;
      const double rel = fc.exponent_tol.value_or(ctx.tol.exponent_tol);
      const double dev = std::abs(fit.slope - expect) / std::max(std::abs(expect), 1e-300);
      f["expected"] = expect;
      f["relative_deviation"] = dev;
      f["tolerance"] = rel;
      gates["exponent"] = dev <= rel;
      o.pass = o.pass && dev <= rel;
    }
    o.report["fit"] = f;
    *ctx.out << "fitted exponent " << io::fmt(fit.slope) << "\n";
  }
  o.report["gates"] = gates;
  *ctx.out << "termination " << io::to_string(traj.terminated) << " after " << traj.stats.accepted
           << " steps\n";
  return o;
}

Outputs cmd_scenario(const Context& ctx) {
  io::check_keys(ctx.config, {"command", "scenario", "output_path"}, "");
  io::ScenarioConfig sc = io::read_scenario(section(ctx, "scenario"), "scenario");
  sc.options.crosscheck_tol = ctx.tol.crosscheck;
  Outputs o;
  o.report = header(ctx);
  GrowthReport rep;
  try {
    rep = sc.label == CaseLabel::lemma_2_5 ? lemma25_probe(sc.spec.b, sc.k, sc.g, sc.spec.P, sc.radii)
                                           : lemma3_scenario(sc.spec, sc.label, sc.options);
  } catch (const PreconditionError& e) {
    throw ConfigError("scenario", e.what());
  }
  o.report["result"] = io::to_json(rep);
  o.pass = rep.agreement && !rep.inconclusive;
  o.report["gates"] = {{"agreement", rep.agreement}, {"conclusive", !rep.inconclusive}};
  *ctx.out << to_string(rep.case_label) << ": predicted " << rep.predicted << ", "
           << (rep.agreement ? "agrees" : "disagrees") << (rep.inconclusive ? " (inconclusive)" : "")
           << "\n";
  return o;
}

Outputs cmd_dim(const Context& ctx) {
  io::check_keys(ctx.config,
                 {"command", "model", "degree", "n_radii", "n_angles", "threshold", "min_gap",
                  "column_floor", "references", "expect_null_dim", "write_matrix", "output_path"},
                 "");
  const json& c = ctx.config;
  const io::ModelSpec spec = model_spec(ctx, default_radial());
  const HypersurfaceModel model = build(spec, "model");
  const int degree = io::read_int(c, "degree", "", 6, 1, 40);
  const int n_radii = io::read_int(c, "n_radii", "", 40, 1, 100000);
  const int n_angles = io::read_int(c, "n_angles", "", 0, 0, 100000);
  const double threshold = io::read_number(c, "threshold", "", 1e-8, 1e-12, 1e-4);
  const double min_gap = io::read_number(c, "min_gap", "", ctx.tol.min_gap, 1.0, io::kInf);
  const double floor = io::read_number(c, "column_floor", "", 1e-6, 0.0, 1.0);
  const bool write_matrix = io::read_bool(c, "write_matrix", "", false);
  std::optional<int> expect;
  if (c.contains("expect_null_dim")) expect = io::read_int(c, "expect_null_dim", "", 0, 0, 100000);

  std::vector<std::pair<std::string, AnalyticVectorField>> refs;
  if (c.contains("references")) {
    const json& r = c.at("references");
    if (!r.is_array()) throw ConfigError("references", "expected an array of fields");
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string path = "references[" + std::to_string(i) + "]";
      refs.emplace_back(io::read_string(r[i], "kind", path, "") + "#" + std::to_string(i),
                        io::read_field(r[i], path));
    }
  } else if (spec.kind == io::ModelSpec::Kind::family) {
    refs.emplace_back("H", AnalyticVectorField::H(spec.family.a, spec.family.alpha));
  } else {
    refs.emplace_back("rotation", AnalyticVectorField::rotation(1.0));
  }

  const CollocationGrid grid = CollocationGrid::standard(model, degree, n_radii, n_angles);
  CollocationSystem sys;
  try {
    sys = assemble(model, degree, grid);
  } catch (const PreconditionError& e) {
    throw ConfigError("", e.what());
  }
  CollocationReport rep = nullspace(sys, threshold, min_gap, floor);
  ordered_json angles = ordered_json::object();
  for (const auto& [name, field] : refs) {
    const PolyVectorField t = taylor_of_field(field, degree);
    rep.reference_residuals.emplace_back(name, reference_residual(sys, t));
    if (!rep.basis_vectors.empty()) angles[name] = line_angle(rep.basis_vectors.front(), flatten(t, sys.columns));
  }

  Outputs o;
  o.report = header(ctx);
  const ordered_json body = io::to_json(rep, sys);
  for (const auto& [k, v] : body.items()) o.report[k] = v;
  o.report["reference_angles"] = angles;
  const bool determined = rep.verdict == DimVerdict::determined;
  const bool dim_ok = expect ? rep.null_dim == *expect : rep.null_dim <= 1;
  o.pass = determined && dim_ok;
  o.report["gates"] = {{"determined", determined}, {expect ? "null_dim_expected" : "null_dim_at_most_1", dim_ok}};
  if (write_matrix) {
    std::ostringstream csv;
    io::write_matrix_csv(csv, sys);
    o.csv = csv.str();
  }
  *ctx.out << "null_dim " << rep.null_dim << ", gap ratio " << io::fmt(rep.gap_ratio) << ", "
           << (determined ? "determined" : "indeterminate") << "\n";
  return o;
}

Outputs cmd_flatness(const Context& ctx) {
  io::check_keys(ctx.config,
                 {"command", "model", "draws", "target", "power_exponent", "orders", "radii", "bound",
                  "n_angles", "expect", "output_path"},
                 "");
  const json& c = ctx.config;
  const std::string target = io::read_string(c, "target", "", "P");
  if (target != "P" && target != "P_z" && target != "power")
    throw ConfigError("target", "expected 'P', 'P_z' or 'power'");
  const std::string expect = io::read_string(c, "expect", "", "flat");
  if (expect != "flat" && expect != "violates") throw ConfigError("expect", "expected 'flat' or 'violates'");
  const double bound = io::read_number(c, "bound", "", 1.0, 0.0, io::kInf);
  FlatnessOptions fo;
  fo.n_angles = io::read_int(c, "n_angles", "", fo.n_angles, 1, 100000);
  std::vector<int> orders;
  if (c.contains("orders")) {
    for (double n : io::read_numbers(c, "orders", "")) {
      if (n < 0 || n != std::floor(n) || n > 1000) throw ConfigError("orders", "expected integers in [0, 1000]");
      orders.push_back(static_cast<int>(n));
    }
  } else {
    for (int n = 1; n <= 12; ++n) orders.push_back(n);
  }
  std::vector<double> radii_cfg = io::read_numbers(c, "radii", "");

  struct Target {
    std::string name;
    std::function<double(cplx)> f;
    double domain;
  };
  std::vector<Target> targets;
  if (target == "power") {
    if (c.contains("model") || c.contains("draws")) throw ConfigError("target", "'power' takes no model");
    const double s = io::read_number(c, "power_exponent", "", 3.0, 0.0, 1e3);
    targets.push_back({"|z|^" + io::fmt(s), [s](cplx z) { return std::pow(std::abs(z), s); }, 1.0});
  } else {
    if (c.contains("power_exponent")) throw ConfigError("power_exponent", "only used with target 'power'");
    int i = 0;
    for (const auto& spec : model_list(ctx, default_family())) {
      const HypersurfaceModel model = build(spec, "model");
      const std::string name = target + "#" + std::to_string(i++);
      if (target == "P")
        targets.push_back({name, [model](cplx z) { return model.P(z); }, model.eps0()});
      else
        targets.push_back({name, [model](cplx z) { return std::abs(model.P_z2(z)); }, model.eps0()});
    }
  }

  Outputs o;
  o.report = header(ctx);
  ordered_json results = ordered_json::array();
  bool all_match = true;
  for (const auto& t : targets) {
    fo.domain_radius = t.domain;
    const std::vector<double> radii = radii_cfg.empty() ? log_radii(0.5 * t.domain, 0.02 * t.domain, 24) : radii_cfg;
    for (int n : orders) {
      FlatnessReport rep;
      try {
        rep = flatness_probe(t.f, n, radii, bound, fo);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("radii", e.what());
      }
      const bool match = rep.consistent() == (expect == "flat");
      all_match = all_match && match;
      ordered_json r;
      r["target"] = t.name;
      const ordered_json body = io::to_json(rep);
      for (const auto& [k, v] : body.items()) r[k] = v;
      r["matches_expectation"] = match;
      results.push_back(r);
    }
  }
  o.report["expect"] = expect;
  o.report["results"] = results;
  o.pass = all_match;
  o.report["gates"] = {{"matches_expectation", all_match}};
  *ctx.out << results.size() << " probes, " << (all_match ? "all match" : "mismatch against") << " '"
           << expect << "'\n";
  return o;
}

Outputs dispatch(const Context& ctx) {
  if (ctx.command == "verify") return cmd_verify(ctx);
  if (ctx.command == "sample") return cmd_sample(ctx);
  if (ctx.command == "flow") return cmd_flow(ctx);
  if (ctx.command == "scenario") return cmd_scenario(ctx);
  if (ctx.command == "dim") return cmd_dim(ctx);
  return cmd_flatness(ctx);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CR hypersurface laboratory: batch runner"};
  app.name("crlab");
  std::string command, config_path, out_dir, profile = "default";
  std::uint64_t seed = 0;
  int jobs = 0;
  app.add_option("command", command, "verify | sample | flow | scenario | dim | flatness")
      ->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "report directory (default: config output_path, else .)");
  app.add_option("--seed", seed, "seed for random draws")->default_val(0);
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-profile", profile, "gate tolerances")
      ->check(CLI::IsMember({"strict", "default"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    Context ctx;
    ctx.out = &out;
    ctx.seed = seed;
    ctx.profile = profile;
    ctx.tol = profile == "strict" ? kStrict : kDefault;
    ctx.config = json::object();
    if (!config_path.empty()) {
      ctx.config = io::parse_text(read_file(config_path), config_path);
      if (!ctx.config.is_object()) throw ConfigError(config_path, "top level must be an object");
    }
    const std::string cfg_cmd = io::read_string(ctx.config, "command", "", "");
    if (!cfg_cmd.empty() && std::find(kCommands.begin(), kCommands.end(), cfg_cmd) == kCommands.end())
      throw ConfigError("command", "unknown command '" + cfg_cmd + "'");
    if (!command.empty() && !cfg_cmd.empty() && command != cfg_cmd)
      throw ConfigError("command", "config says '" + cfg_cmd + "' but '" + command + "' was requested");
    ctx.command = command.empty() ? cfg_cmd : command;
    if (ctx.command.empty()) {
      err << "no command given\n" << app.help();
      return kUsage;
    }
    const std::string cfg_out = io::read_string(ctx.config, "output_path", "", "");
    ctx.out_dir = !out_dir.empty() ? fs::path(out_dir) : !cfg_out.empty() ? fs::path(cfg_out) : fs::path(".");
    if (jobs > 0) set_threads(jobs);

    const Outputs o = dispatch(ctx);
    ordered_json report = o.report;
    report["pass"] = o.pass;

    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw IoError("cannot create " + ctx.out_dir.string() + ": " + ec.message());
    const fs::path stem = report_stem(ctx);
    write_file(stem.string() + ".json", io::dump(report));
    out << "report " << stem.string() << ".json\n";
    if (o.csv) {
      write_file(stem.string() + ".csv", *o.csv);
      out << "samples " << stem.string() << ".csv\n";
    }
    out << ctx.command << ": " << (o.pass ? "PASS" : "FAIL") << "\n";
    return o.pass ? kPass : kGateFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace crlab::cli
