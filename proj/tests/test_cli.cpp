#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

struct Sandbox {
  fs::path dir;
  Sandbox() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("crlab_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  std::string config(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }

  Run run(std::vector<std::string> args) const {
    args.push_back("--out");
    args.push_back((dir / "out").string());
    std::ostringstream o, e;
    const int code = crlab::cli::run(args, o, e);
    return {code, o.str(), e.str()};
  }

  std::vector<fs::path> reports(const std::string& ext) const {
    std::vector<fs::path> out;
    if (!fs::exists(dir / "out")) return out;
    for (const auto& e : fs::directory_iterator(dir / "out"))
      if (e.path().extension() == ext) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("verify on the default model passes and writes the identity CSV") {
  Sandbox sb;
  const auto r = sb.run({"verify"});
  CHECK(r.code == 0);
  const auto csv = sb.reports(".csv");
  REQUIRE(csv.size() == 1u);
  CHECK(csv[0].filename().string().rfind("verify-", 0) == 0);
  std::istringstream lines(slurp(csv[0]));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "z2_re,z2_im,t,res_i,res_ii,res_iii,res_iv,res_v");
  int rows = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; std::getline(cells, cell, ','); ++c)
      if (c >= 3) CHECK(std::stod(cell) < 1e-10);
    ++rows;
  }
  CHECK(rows == 8 * 32 * 5);
  const json rep = json::parse(slurp(sb.reports(".json").at(0)));
  CHECK(rep["pass"] == true);
}

TEST_CASE("dim on the radial default gives null_dim 1") {
  Sandbox sb;
  const auto r = sb.run({"dim"});
  CHECK(r.code == 0);
  const json rep = json::parse(slurp(sb.reports(".json").at(0)));
  CHECK(rep["null_dim"] == 1);
  CHECK(rep["verdict"] == "determined");
  CHECK(rep["gap_ratio"].get<double>() >= 1e4);
  REQUIRE(rep["basis"].size() == 1u);
  const auto& basis = rep["basis"][0];
  REQUIRE(!basis.empty());
  for (const auto& e : basis) {
    CHECK(e.contains("field"));
    CHECK(e.contains("j"));
    CHECK(e.contains("k"));
    CHECK(e.contains("re"));
    CHECK(e.contains("im"));
  }
  CHECK(rep["reference_residuals"]["rotation"].get<double>() < 1e-8);
  CHECK(rep["reference_angles"]["rotation"].get<double>() < 1e-3);
}

TEST_CASE("misspelled key is rejected by name") {
  Sandbox sb;
  const auto cfg = sb.config("c.json", R"({"command": "verify", "model": {"series": [[1, 0]], "alhpa": 1}})");
  const auto r = sb.run({"--config", cfg});
  CHECK(r.code == 1);
  CHECK(r.err.find("alhpa") != std::string::npos);
  CHECK(sb.reports(".json").empty());
}

TEST_CASE("syntax errors report line and column") {
  Sandbox sb;
  const auto cfg = sb.config("c.json", "{\n  \"command\": \"verify\",\n  \"model\": ]\n}");
  const auto r = sb.run({"--config", cfg});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  Sandbox sb;
  CHECK(sb.run({}).code == 1);
  CHECK(sb.run({"bogus"}).code == 1);
  CHECK(sb.run({"verify", "--jobs", "0"}).code == 1);
  CHECK(sb.run({"verify", "--tolerance-profile", "loose"}).code == 1);
  CHECK(sb.run({"verify", "--config", (sb.dir / "missing.json").string()}).code == 1);
  const auto cfg = sb.config("c.json", R"({"command": "dim"})");
  const auto r = sb.run({"verify", "--config", cfg});
  CHECK(r.code == 1);
  CHECK(r.err.find("command") != std::string::npos);
  std::ostringstream o, e;
  CHECK(crlab::cli::run({"--help"}, o, e) == 0);
}

TEST_CASE("out-of-range values are config errors") {
  Sandbox sb;
  const auto cfg = sb.config("c.json", R"({"command": "dim", "threshold": 0.5})");
  const auto r = sb.run({"--config", cfg});
  CHECK(r.code == 1);
  CHECK(r.err.find("threshold") != std::string::npos);
  const auto cfg2 = sb.config("d.json", R"({"command": "flow", "flow": {"ell": 1, "b": [0, 1]}})");
  CHECK(sb.run({"--config", cfg2}).code == 1);
}

TEST_CASE("gate failure exits 2") {
  Sandbox sb;
  const auto cfg = sb.config("c.json", R"({"command": "flatness", "target": "power", "power_exponent": 3, "orders": [5]})");
  const auto r = sb.run({"--config", cfg});
  CHECK(r.code == 2);
  const json rep = json::parse(slurp(sb.reports(".json").at(0)));
  CHECK(rep["pass"] == false);
  CHECK(rep["results"][0]["verdict"] == "violates");
  const auto ok = sb.config("d.json", R"({"command": "flatness", "target": "power", "orders": [5], "expect": "violates"})");
  CHECK(sb.run({"--config", ok}).code == 0);
}

TEST_CASE("reports are deterministic and never overwritten") {
  Sandbox sb;
  const auto cfg = sb.config("c.json", R"({"command": "verify", "draws": 3})");
  CHECK(sb.run({"--config", cfg, "--seed", "17"}).code == 0);
  CHECK(sb.run({"--config", cfg, "--seed", "17", "--jobs", "1"}).code == 0);
  CHECK(sb.run({"--config", cfg, "--seed", "18"}).code == 0);
  const auto js = sb.reports(".json");
  REQUIRE(js.size() == 3u);
  std::vector<std::string> texts;
  for (const auto& p : js) texts.push_back(slurp(p));
  int same = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) same += texts[i] == texts[j];
  CHECK(same == 1);
  CHECK(texts[0].find("e-") != std::string::npos);
}

TEST_CASE("strict profile tightens gates") {
  Sandbox sb;
  const auto r = sb.run({"verify", "--tolerance-profile", "strict"});
  CHECK(r.code == 0);
  const json rep = json::parse(slurp(sb.reports(".json").at(0)));
  CHECK(rep["thresholds"]["identity"].get<double>() == 1e-12);
  const auto cfg = sb.config("c.json", R"({"command": "sample", "thresholds": {"rho": 0}})");
  CHECK(sb.run({"--config", cfg}).code == 2);
}

TEST_CASE("flow, scenario, sample and flatness commands") {
  Sandbox sb;
  const auto flow = sb.config("f.json", R"({"command": "flow", "flow": {"k": 2, "b": -1, "g0": {"scale": 0.5, "power": 1},
      "z0": 1, "t0": 1, "t_end": 10000, "tol": 1e-11, "fit_window": [100, 10000], "expect_exponent": -0.5}})");
  CHECK(sb.run({"--config", flow}).code == 0);
  const auto csv = sb.reports(".csv");
  REQUIRE(csv.size() == 1u);
  CHECK(slurp(csv[0]).rfind("t,z_re,z_im,abs_z,u\n", 0) == 0);

  const auto ref = sb.config("r.json", R"({"command": "flow", "flow": {"k": 3, "b": [-1, 1], "z0": 0.5, "t0": 1, "t_end": 100}})");
  CHECK(sb.run({"--config", ref}).code == 0);

  const auto sc = sb.config("s.json", R"({"command": "scenario", "scenario": {"case": "subcase_3_2_2", "k": 2, "m": 2, "n": 0,
      "a": 1, "b": -1, "P": {"s": 1}, "z0": 0.1, "t0": 50, "t_end": 500000}})");
  const auto r = sb.run({"--config", sc});
  CHECK(r.code == 0);

  const auto l25 = sb.config("l.json", R"({"command": "scenario", "scenario": {"case": "lemma_2_5", "b": [0, 1], "k": 1}})");
  CHECK(sb.run({"--config", l25}).code == 1);

  CHECK(sb.run({"sample"}).code == 0);
  const auto fl = sb.config("p.json", R"({"command": "flatness", "target": "P_z", "draws": 3})");
  CHECK(sb.run({"--config", fl}).code == 0);
}

}
