#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "gaussep/ensembles.hpp"
#include "gaussep_cli/commands.hpp"
#include "gaussep_cli/io.hpp"

using namespace gaussep;
using namespace gaussep::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("gaussep_test_" + tag + "_" + std::to_string(std::rand()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run gaussep_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_state(const TempDir& dir, const std::string& name, const SymMatrix& sigma, int n_a = 1, int n_b = 1,
                     double hbar = 1.0) {
  StateFile f;
  f.hbar = hbar;
  f.n_a = n_a;
  f.n_b = n_b;
  f.sigma = sigma;
  const fs::path p = dir / name;
  write_text_file(p, dump(state_to_json(f)));
  return p;
}

}  // namespace

TEST_SUITE("harness_cli") {

TEST_CASE("state files round-trip bit-exactly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    StateFile f;
    f.n_a = 1;
    f.n_b = 2;
    f.hbar = 0.7 + 0.1 * static_cast<double>(seed);
    f.sigma = random_bonafide_covariance(Partition(1, 2), seed, 0.9, f.hbar);
    f.mean = Vector::LinSpaced(6, -1.0 / 3.0, 2.0 / 7.0);
    f.label = "seed " + std::to_string(seed);
    const StateFile g = parse_state_file(dump(state_to_json(f)));
    CHECK(g.sigma.matrix() == f.sigma.matrix());
    CHECK(g.mean == f.mean);
    CHECK(g.hbar == f.hbar);
    CHECK(g.label == f.label);
    CHECK(dump(state_to_json(g)) == dump(state_to_json(f)));
  }
}

TEST_CASE("state file validation") {
  const std::string good = dump(state_to_json(StateFile{1.0, 1, 1, 0.5 * SymMatrix::identity(4), Vector(), ""}));
  CHECK_NOTHROW(parse_state_file(good));

  Json asym = Json::parse(good);
  asym["sigma"][0][1] = 1e-9;
  CHECK_THROWS_AS(parse_state_file(asym.dump()), InputError);
  asym["sigma"][0][1] = 1e-13;
  CHECK_NOTHROW(parse_state_file(asym.dump()));

  Json ordering = Json::parse(good);
  ordering["ordering"] = "xpxp";
  CHECK_THROWS_WITH_AS(parse_state_file(ordering.dump(2), "s.json"), doctest::Contains("field 'ordering'"), InputError);

  Json wrong_size = Json::parse(good);
  wrong_size["n_B"] = 2;
  CHECK_THROWS_AS(parse_state_file(wrong_size.dump()), InputError);

  Json bad_entry = Json::parse(good);
  bad_entry["sigma"][2][3] = "x";
  CHECK_THROWS_WITH_AS(parse_state_file(bad_entry.dump()), doctest::Contains("sigma[2][3]"), InputError);

  Json missing = Json::parse(good);
  missing.erase("hbar");
  CHECK_THROWS_WITH_AS(parse_state_file(missing.dump()), doctest::Contains("'hbar': missing"), InputError);

  CHECK_THROWS_WITH_AS(parse_state_file(good.substr(0, 60), "t.json"), doctest::Contains("t.json:"), InputError);
}

TEST_CASE("field diagnostics carry the line number") {
  const std::string text = "{\n  \"hbar\": 1.0,\n  \"n_A\": 1,\n  \"n_B\": 1,\n  \"ordering\": \"other\"\n}\n";
  CHECK_THROWS_WITH_AS(parse_state_file(text, "f.json"), doctest::Contains("f.json:5: field 'ordering'"), InputError);
}

TEST_CASE("check: exit codes and report contents") {
  TempDir dir("check");
  const auto vac = write_state(dir, "vac.json", tmsv_covariance(0.0, 1.0));
  const Run r0 = gaussep_run({"check", vac.string()});
  CHECK(r0.code == kExitSeparable);
  const Json rep = Json::parse(r0.out);
  CHECK(rep["verdict"] == "separable");
  CHECK(rep.contains("certificate"));
  CHECK_FALSE(rep.contains("witness"));
  CHECK(std::abs(rep["certificate"]["slack"].get<double>()) < 1e-9);
  CHECK(rep["diagnostics"]["purity"].get<double>() == doctest::Approx(1.0));
  CHECK(rep["config_echo"]["hbar"]["source"] == "file");
  CHECK(rep["tool_version"].is_string());

  const auto tmsv = write_state(dir, "tmsv.json", tmsv_covariance(0.5, 1.0));
  const Run r1 = gaussep_run({"check", tmsv.string(), "--report", (dir / "rep.json").string()});
  CHECK(r1.code == kExitEntangled);
  const Json rep1 = Json::parse(read_text_file(dir / "rep.json"));
  CHECK(rep1["verdict"] == "entangled");
  CHECK_FALSE(rep1.contains("certificate"));
  CHECK(rep1["witness"]["nu_tilde_min"].get<double>() == doctest::Approx(0.18394).epsilon(1e-4));

  const Run r2 = gaussep_run({"check", vac.string(), "--hbar", "1.0", "--tol", "1e-8", "--max-iter", "50"});
  const Json rep2 = Json::parse(r2.out);
  CHECK(rep2["config_echo"]["hbar"]["source"] == "flag");
  CHECK(rep2["config_echo"]["max_iter"]["value"] == 50);
  CHECK(rep2["config_echo"]["tol"]["value"].get<double>() == 1e-8);
}

TEST_CASE("check: input errors exit 64") {
  TempDir dir("bad");
  const auto vac = write_state(dir, "vac.json", tmsv_covariance(0.0, 1.0));
  const std::string text = read_text_file(vac);
  write_text_file(dir / "trunc.json", text.substr(0, text.size() / 2));
  CHECK(gaussep_run({"check", (dir / "trunc.json").string()}).code == kExitInputError);
  CHECK(gaussep_run({"check", (dir / "missing.json").string()}).code == kExitInputError);

  const auto sub = write_state(dir, "sub.json", 0.4 * SymMatrix::identity(4));
  const Run r = gaussep_run({"check", sub.string()});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("0.4") != std::string::npos);

  CHECK(gaussep_run({"check", vac.string(), "--hbar", "-1"}).code == kExitInputError);
  CHECK(gaussep_run({"check"}).code == kExitInputError);
  CHECK(gaussep_run({"frobnicate"}).code == kExitInputError);
  CHECK(gaussep_run({}).code == kExitInputError);
  CHECK(gaussep_run({"--help"}).code == 0);
}

TEST_CASE("certify: round-trip, tampering and wrong certificates") {
  TempDir dir("certify");
  const auto noisy = write_state(dir, "noisy.json", tmsv_noisy_covariance(0.5, 0.8, 1.0));
  const auto report = dir / "rep.json";
  REQUIRE(gaussep_run({"check", noisy.string(), "--report", report.string()}).code == kExitSeparable);
  const Run ok = gaussep_run({"certify", noisy.string(), report.string()});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("verified") != std::string::npos);

  const Json rep = Json::parse(read_text_file(report));
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      Json tampered = rep;
      tampered["certificate"]["P_A"][i][k] = tampered["certificate"]["P_A"][i][k].get<double>() + 0.1;
      write_text_file(dir / "t.json", dump(tampered));
      CHECK(gaussep_run({"certify", noisy.string(), (dir / "t.json").string()}).code == 1);
    }
  }

  Json bare;
  bare["P_A"] = matrix_to_json(Matrix::Identity(2, 2));
  bare["P_B"] = matrix_to_json(Matrix::Identity(2, 2));
  write_text_file(dir / "id.json", dump(bare));
  const auto tmsv = write_state(dir, "tmsv.json", tmsv_covariance(0.5, 1.0));
  CHECK(gaussep_run({"certify", tmsv.string(), (dir / "id.json").string()}).code == 1);
  CHECK(gaussep_run({"certify", noisy.string(), (dir / "id.json").string()}).code == 0);

  bare["P_B"] = matrix_to_json(Matrix::Identity(4, 4));
  write_text_file(dir / "big.json", dump(bare));
  CHECK(gaussep_run({"certify", noisy.string(), (dir / "big.json").string()}).code == kExitInputError);
  write_text_file(dir / "junk.json", "{\"P_A\": [[1, 0], [0");
  CHECK(gaussep_run({"certify", noisy.string(), (dir / "junk.json").string()}).code == kExitInputError);
}

TEST_CASE("random: determinism, seed override and validation") {
  TempDir dir("random");
  const auto a = dir / "a";
  const auto b = dir / "b";
  REQUIRE(gaussep_run({"random", "--kind", "random_bonafide", "--modes", "1+2", "--seed", "5", "--count", "3", "--out",
                       a.string()})
              .code == 0);
  REQUIRE(gaussep_run({"random", "--kind", "random_bonafide", "--modes", "1+2", "--seed", "5", "--count", "3", "--out",
                       b.string()})
              .code == 0);
  for (int k = 0; k < 3; ++k) {
    const std::string name = "random_bonafide_000" + std::to_string(k) + ".json";
    CHECK(read_text_file(a / name) == read_text_file(b / name));
    const StateFile f = load_state_file(a / name);
    CHECK_NOTHROW((void)make_state(f.sigma, f.mean, f.hbar, Partition(f.n_a, f.n_b)));
  }

  ::setenv("GAUSSEP_SEED", "5", 1);
  const auto c = dir / "c";
  REQUIRE(gaussep_run({"random", "--kind", "random_bonafide", "--modes", "1+2", "--seed", "77", "--count", "1", "--out",
                       c.string()})
              .code == 0);
  ::setenv("GAUSSEP_SEED", "not-a-number", 1);
  CHECK(gaussep_run({"random", "--kind", "tmsv", "--out", c.string()}).code == kExitInputError);
  ::unsetenv("GAUSSEP_SEED");
  CHECK(read_text_file(c / "random_bonafide_0000.json") == read_text_file(a / "random_bonafide_0000.json"));

  REQUIRE(gaussep_run({"random", "--kind", "tmsv", "--r", "0", "--out", (dir / "v").string()}).code == 0);
  const StateFile vac = load_state_file(dir / "v" / "tmsv_0000.json");
  CHECK((vac.sigma.matrix() - 0.5 * Matrix::Identity(4, 4)).norm() == 0.0);

  REQUIRE(gaussep_run({"random", "--kind", "thermal_product", "--nu", "0.5,0.9", "--out", (dir / "th").string()}).code ==
          0);
  CHECK(load_state_file(dir / "th" / "thermal_product_0000.json").sigma(3, 3) == 0.9);

  CHECK(gaussep_run({"random", "--kind", "tmsv", "--r", "-1", "--out", (dir / "x").string()}).code == kExitInputError);
  CHECK(gaussep_run({"random", "--kind", "tmsv", "--modes", "1+2", "--out", (dir / "x").string()}).code ==
        kExitInputError);
  CHECK(gaussep_run({"random", "--kind", "bogus", "--out", (dir / "x").string()}).code == kExitInputError);
  CHECK(gaussep_run({"random", "--kind", "thermal_product", "--nu", "0.4,1", "--out", (dir / "x").string()}).code ==
        kExitInputError);
  CHECK(gaussep_run({"random", "--kind", "tmsv", "--modes", "1x1", "--out", (dir / "x").string()}).code ==
        kExitInputError);
}

TEST_CASE("sweep: vacuum plus noise is separable throughout") {
  SweepOptions o;
  o.r = 0.0;
  o.steps = 6;
  for (const SweepRow& row : sweep_rows(o)) {
    CHECK(row.verdict == "separable");
    CHECK(row.ppt_pass);
  }
}

TEST_CASE("sweep: rows follow t, witnesses are monotone, the verdict switches at the PPT crossing") {
  SweepOptions o;
  o.r = 0.5;
  o.steps = 21;
  o.threads = 3;
  const auto rows = sweep_rows(o);
  REQUIRE(rows.size() == 21);
  const double r = 0.5;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double t = rows[i].t;
    CHECK(t == doctest::Approx(0.05 * static_cast<double>(i)));
    // Closed form at 1+1: nu_tilde_min = (hbar/2) e^{-2r} + t.
    CHECK(rows[i].nu_tilde_min == doctest::Approx(0.5 * std::exp(-2 * r) + t).epsilon(1e-10));
    if (i > 0) CHECK(rows[i].nu_tilde_min >= rows[i - 1].nu_tilde_min);
    CHECK(rows[i].verdict == (rows[i].nu_tilde_min >= 0.5 ? "separable" : "entangled"));
  }
}

TEST_CASE("sweep: degenerate ranges and output errors") {
  SweepOptions o;
  o.steps = 1;
  o.t_min = o.t_max = 0.3;
  const auto rows = sweep_rows(o);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].t == 0.3);

  const std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("t,ppt_pass,nu_tilde_min,verdict,slack_or_residual,iterations\n", 0) == 0);
  CHECK(csv.find("0.3,") != std::string::npos);

  CHECK(gaussep_run({"sweep", "--r", "0.5", "--steps", "2", "--out", "/nonexistent-dir/x.csv"}).code == kExitInputError);
  CHECK(gaussep_run({"sweep", "--r", "0.5", "--steps", "0", "--out", "-"}).code == kExitInputError);
  CHECK(gaussep_run({"sweep", "--kind", "tmsv", "--out", "-"}).code == kExitInputError);
  CHECK(gaussep_run({"sweep", "--t-min", "1", "--t-max", "0", "--out", "-"}).code == kExitInputError);
  const Run ok = gaussep_run({"sweep", "--r", "0.5", "--steps", "3", "--out", "-"});
  CHECK(ok.code == 0);
  CHECK(std::count(ok.out.begin(), ok.out.end(), '\n') == 4);
}

TEST_CASE("grid parsing") {
  const GridSpec g = parse_grid("-1:1:5,-2.5:0.5:3");
  CHECK(g.x0 == -1.0);
  CHECK(g.x1 == 1.0);
  CHECK(g.nx == 5);
  CHECK(g.p0 == -2.5);
  CHECK(g.np == 3);
  CHECK_THROWS_AS(parse_grid("-1:1:5"), InputError);
  CHECK_THROWS_AS(parse_grid("-1:1,0:1:2"), InputError);
  CHECK_THROWS_AS(parse_grid("a:1:5,0:1:2"), InputError);
  CHECK_THROWS_AS(parse_grid("0:1:0,0:1:2"), InputError);
}

TEST_CASE("wigner-compare") {
  TempDir dir("wigner");
  auto max_err = [](const std::string& err) { return std::stod(err.substr(err.find('=') + 1)); };

  write_text_file(dir / "id.json", "{\"S\": [[1, 0], [0, 1]]}");
  const Run id = gaussep_run({"wigner-compare", "--S", (dir / "id.json").string(), "--grid", "-1:1:5,-1:1:5"});
  CHECK(id.code == 0);
  CHECK(max_err(id.err) < 1e-6);
  CHECK(std::count(id.out.begin(), id.out.end(), '\n') == 26);

  write_text_file(dir / "sq.json", "[[2, 0], [0, 0.5]]");
  const Run sq = gaussep_run({"wigner-compare", "--S", (dir / "sq.json").string()});
  CHECK(sq.code == 0);
  CHECK(max_err(sq.err) < 1e-6);

  write_text_file(dir / "bad.json", "{\"S\": [[2, 0], [0, 0.6]]}");
  CHECK(gaussep_run({"wigner-compare", "--S", (dir / "bad.json").string()}).code == kExitInputError);
  write_text_file(dir / "big.json", "{\"S\": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]}");
  CHECK(gaussep_run({"wigner-compare", "--S", (dir / "big.json").string()}).code == kExitInputError);
  CHECK(gaussep_run({"wigner-compare", "--S", (dir / "id.json").string(), "--grid", "nope"}).code == kExitInputError);
}

}  // TEST_SUITE
