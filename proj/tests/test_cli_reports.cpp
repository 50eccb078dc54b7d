#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "plap/experiments.hpp"

using namespace plap;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Scratch directory unique to the running test.
fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path d = fs::temp_directory_path() / (std::string("plap_") + info->test_suite_name() + "_" + info->name());
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(PLAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const CheckEntry& only(const RunReport& r) {
  EXPECT_EQ(r.checks.size(), 1u);
  return r.checks.front();
}

}  // namespace

// ----------------------------------------------------------- serialization

TEST(Report, NonFiniteNumbersRoundTrip) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(num(inf), "inf");
  EXPECT_EQ(num(-inf), "-inf");
  EXPECT_EQ(num(std::nan("")), "nan");
  EXPECT_EQ(get_num(num(-inf)), -inf);
  EXPECT_TRUE(std::isnan(get_num(num(std::nan("")))));
  EXPECT_EQ(get_num(num(0.1)), 0.1);
  EXPECT_THROW(get_num(json("infinity")), InputError);
  EXPECT_THROW(get_num(json(true)), InputError);
}

TEST(Report, IdentityAndInequalityReportsRoundTrip) {
  IdentityReport a{"x", 7, 2, std::numeric_limits<double>::infinity(), 1.0 / 3.0, "worst", 1e-7, false};
  const auto a2 = json(a).get<IdentityReport>();
  EXPECT_EQ(json(a2), json(a));
  EXPECT_TRUE(std::isinf(a2.max_rel_residual));
  InequalityReport b{"y", 5, 0, -1e-300, "w", 1e-10, true};
  EXPECT_EQ(json(json(b).get<InequalityReport>()), json(b));
}

TEST(Report, RunReportRoundTripIsLossless) {
  RunReport r;
  r.subcommand = "demo";
  r.config = {{"a", 1}, {"b", {0.1, 0.2}}};
  r.checks.push_back({"identity", "one", "pass", {{"v", num(std::nan(""))}, {"w", 0.30000000000000004}}});
  CheckEntry bad{"inequality", "two", "error"};
  bad.error = "numerical error: boom";
  r.checks.push_back(bad);
  r.finalize();
  const auto text = serialize(r);
  EXPECT_EQ(serialize(parse_report(text)), text);
  EXPECT_FALSE(parse_report(text).pass);
  EXPECT_EQ(parse_report(text).checks[1].error, "numerical error: boom");
  EXPECT_EQ(text.find("wall_time"), std::string::npos);
  r.wall_time = 1.25;
  EXPECT_NE(serialize(r).find("\"wall_time\": 1.25"), std::string::npos);
  EXPECT_EQ(parse_report(serialize(r)).wall_time, 1.25);
}

TEST(Report, SchemaVersionIsChecked) {
  RunReport r;
  r.subcommand = "demo";
  auto j = json(r);
  j["schema_version"] = 2;
  EXPECT_THROW(parse_report(j.dump()), InputError);
}

TEST(Report, PassRequiresChecksAndAllOfThemOk) {
  RunReport r;
  r.finalize();
  EXPECT_FALSE(r.pass);
  r.checks.push_back({"scan", "a", "exploration"});
  r.finalize();
  EXPECT_TRUE(r.pass);
  r.checks.push_back({"scan", "b", "fail"});
  r.finalize();
  EXPECT_FALSE(r.pass);
}

// ------------------------------------------------------------- parameters

TEST(Config, RangesListsAndScalars) {
  const Param real{"x", ParamKind::RealList, nullptr, ""};
  const auto g = normalize_param(real, "0.2:3:0.1");
  ASSERT_EQ(g.size(), 29u);
  EXPECT_EQ(g[8].get<double>(), 1.0);
  EXPECT_EQ(g.back().get<double>(), 3.0);
  EXPECT_EQ(normalize_param(real, "1,2.5"), json({1.0, 2.5}));
  EXPECT_EQ(normalize_param(real, 4), json({4.0}));
  EXPECT_THROW(normalize_param(real, "1:2"), ConfigError);
  EXPECT_THROW(normalize_param(real, "1,x"), ConfigError);
  EXPECT_THROW(normalize_param(real, "3:1:1"), ConfigError);

  const Param ints{"n", ParamKind::IntList, nullptr, ""};
  EXPECT_EQ(normalize_param(ints, "2,3"), json({2, 3}));
  EXPECT_THROW(normalize_param(ints, "2.5"), ConfigError);
  EXPECT_THROW(normalize_param(ints, json({2.5})), ConfigError);

  const Param tuples{"t", ParamKind::RealTuples, nullptr, ""};
  EXPECT_EQ(normalize_param(tuples, "3,2,1;4,2,1"), json({{3.0, 2.0, 1.0}, {4.0, 2.0, 1.0}}));

  const Param u{"seed", ParamKind::UInt, nullptr, ""};
  EXPECT_EQ(normalize_param(u, "18446744073709551615").get<std::uint64_t>(), 18446744073709551615ull);
  EXPECT_THROW(normalize_param(u, -1), ConfigError);

  const Param b{"flag", ParamKind::Bool, nullptr, ""};
  EXPECT_EQ(normalize_param(b, "false"), json(false));
  EXPECT_THROW(normalize_param(b, "yes"), ConfigError);

  const Param opt{"g", ParamKind::OptReal, nullptr, ""};
  EXPECT_TRUE(normalize_param(opt, "none").is_null());
  EXPECT_EQ(normalize_param(opt, "2.5"), json(2.5));
}

TEST(Config, ChoicesAndUnknownKeys) {
  EXPECT_THROW(effective_config("harnack", {{"profile", "spiky"}}), ConfigError);
  EXPECT_THROW(effective_config("identities", {{"suite", "ww,nope"}}), ConfigError);
  EXPECT_THROW(effective_config("scan", {{"alhpa", 3}}), ConfigError);
  EXPECT_THROW(effective_config("nosuch"), ConfigError);
  EXPECT_THROW(run("scan", {{"n", "three"}}), ConfigError);
}

TEST(Config, EchoHoldsEveryDefault) {
  for (const auto& sub : subcommands()) {
    const auto cfg = effective_config(sub.name);
    EXPECT_EQ(cfg.size(), sub.params.size()) << sub.name;
    for (const auto& prm : sub.params) EXPECT_TRUE(cfg.contains(prm.key)) << sub.name << " " << prm.key;
  }
  const auto cfg = effective_config("scan", {{"alpha", "1:2:0.5"}});
  EXPECT_EQ(cfg["alpha"], json({1.0, 1.5, 2.0}));
  EXPECT_EQ(cfg["horizon"], json(100.0));
}

TEST(Config, ReactionSpecs) {
  EXPECT_EQ(reaction_from_spec("pure_power:3").alpha(), 3.0);
  EXPECT_EQ(reaction_from_spec("pure_power:3,2")(2.0), 16.0);
  EXPECT_EQ(reaction_from_spec("two_power:1.5,0.5,2.5").family(), ReactionFamily::TwoPower);
  EXPECT_TRUE(reaction_from_spec("zero").is_zero());
  EXPECT_THROW(reaction_from_spec("power_log:2"), ConfigError);
  EXPECT_THROW(reaction_from_spec("exp:1"), ConfigError);
}

// ------------------------------------------------------------ subcommands

TEST(Run, ClassifyEmitsVerdictWithTheorem) {
  const auto r = run("classify", {{"n", 3}, {"p", 2.0}, {"alpha", 4.9}});
  EXPECT_TRUE(r.pass);
  const auto& d = only(r).data;
  EXPECT_EQ(d["verdict"], "no_positive_solution");
  EXPECT_EQ(d["theorem"], "2.1");
  EXPECT_EQ(r.config["sign"], "nonnegative");
}

TEST(Run, ThresholdTable) {
  const auto r = run("thresholds", {{"n", 3}, {"p", 2}});
  EXPECT_EQ(only(r).data["ps"], json(5.0));
  const auto inf = run("thresholds", {{"n", 3}, {"p", 4}});
  EXPECT_EQ(only(inf).data["ps"], "inf");
}

TEST(Run, IdentitySuiteExample) {
  const auto r = run("identities", {{"suite", "all"}, {"dim", "3"}, {"p", "1.5,2,3"}, {"samples", 1000}, {"seed", 42}});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.checks.size(), 15u);
  for (const auto& c : r.checks) EXPECT_EQ(c.data["tol"], json(1e-7)) << c.id;
}

TEST(Run, SeedChangesSamplesButNotVerdicts) {
  const auto a = run("identities", {{"dim", "2"}, {"models", "euclidean"}, {"samples", 50}, {"seed", 1}});
  const auto b = run("identities", {{"dim", "2"}, {"models", "euclidean"}, {"samples", 50}, {"seed", 2}});
  EXPECT_TRUE(a.pass && b.pass);
  EXPECT_NE(serialize(a), serialize(b));
  EXPECT_EQ(serialize(a), serialize(run("identities", {{"dim", "2"}, {"models", "euclidean"}, {"samples", 50}, {"seed", 1}})));
}

TEST(Run, FailuresInsideChecksAreRecorded) {
  // The radial Green profile is singular at the pole, so the global check refuses it.
  const auto g = run("gradient-bound", {{"profile", "green"}});
  EXPECT_FALSE(g.pass);
  EXPECT_EQ(only(g).status, "error");
  EXPECT_NE(only(g).error.find("precondition"), std::string::npos);
  // u^9 fails the structure condition at delta0 = 0.
  const auto m = run("moser", {{"f", "pure_power:9"}});
  EXPECT_FALSE(m.pass);
  EXPECT_EQ(m.checks.front().status, "error");
  // q outside (0, (p-1) chi).
  const auto h = run("harnack", {{"q", 3.5}, {"profile", "constant"}, {"ratio", "weak_harnack"}});
  EXPECT_EQ(only(h).status, "error");
}

TEST(Run, ScanCellsFollowTheCriticalExponent) {
  const auto r = run("scan", {{"alpha", "4.9,5,6"}, {"u0", "1"}});
  const auto& cells = only(r).data["cells"];
  ASSERT_EQ(cells.size(), 3u);
  EXPECT_EQ(cells[0]["status"], "pass");
  EXPECT_EQ(cells[1]["status"], "pass");
  EXPECT_EQ(cells[2]["status"], "exploration");
  EXPECT_TRUE(r.pass);
  const auto super = run("scan", {{"alpha", "6,7"}, {"u0", "1"}});
  EXPECT_EQ(only(super).status, "exploration");
}

TEST(Run, SphereBoundaryIsExploration) {
  const auto r = run("bv-sphere", {{"q", 5.0}, {"lambda", 0.75}, {"u0", "0.5:2:0.5"}});
  EXPECT_EQ(only(r).status, "exploration");
  EXPECT_NE(only(r).data["flag"].get<std::string>().find("nonconstant"), std::string::npos);
  EXPECT_TRUE(r.pass);
}

TEST(Run, VolumeOnCurvedModels) {
  EXPECT_TRUE(run("volume", {{"model", "sphere"}}).pass);
  EXPECT_EQ(only(run("volume", {{"model", "hyperbolic"}})).status, "exploration");
  EXPECT_EQ(only(run("volume", {{"model", "sphere"}, {"radii", "1,4"}})).status, "error");
}

TEST(Run, TimingIsOptIn) {
  EXPECT_FALSE(run("thresholds").wall_time.has_value());
  EXPECT_TRUE(run("thresholds", json::object(), true).wall_time.has_value());
}

// ------------------------------------------------------------ the binary

TEST(Cli, ExitCodes) {
  const auto d = scratch();
  EXPECT_EQ(cli("classify --n 3 --p 2 --alpha 4.9 --out " + (d / "c.json").string()), 0);
  EXPECT_EQ(cli("gradient-bound --profile green --out " + (d / "g.json").string()), 1);
  EXPECT_EQ(cli("scan --alpha 1:2"), 2);
  EXPECT_EQ(cli("scan --bogus 1"), 2);
  EXPECT_EQ(cli("harnack --profile spiky"), 2);
  EXPECT_EQ(cli(""), 2);
  EXPECT_EQ(cli("--help"), 0);
  const auto rep = parse_report(slurp(d / "c.json"));
  EXPECT_EQ(only(rep).data["verdict"], "no_positive_solution");
  EXPECT_EQ(rep.config["alpha"], json(4.9));
  EXPECT_FALSE(parse_report(slurp(d / "g.json")).pass);
}

TEST(Cli, ConfigFileOverridesFlags) {
  const auto d = scratch();
  std::ofstream(d / "cfg.json") << R"({"subcommand": "classify", "schema_version": 1, "alpha": 5.5})";
  ASSERT_EQ(cli("classify --alpha 4.9 --config " + (d / "cfg.json").string() + " --out " + (d / "r.json").string()), 0);
  const auto rep = parse_report(slurp(d / "r.json"));
  EXPECT_EQ(rep.config["alpha"], json(5.5));
  EXPECT_NE(only(rep).data["verdict"], "no_positive_solution");

  std::ofstream(d / "bad.json") << R"({"alpha": 4.9, "colour": "red"})";
  EXPECT_EQ(cli("classify --config " + (d / "bad.json").string()), 2);
  std::ofstream(d / "other.json") << R"({"subcommand": "scan"})";
  EXPECT_EQ(cli("classify --config " + (d / "other.json").string()), 2);
  std::ofstream(d / "broken.json") << "{";
  EXPECT_EQ(cli("classify --config " + (d / "broken.json").string()), 2);
  EXPECT_EQ(cli("classify --config " + (d / "missing.json").string()), 2);
}

TEST(Cli, CsvOutputsHaveFixedColumns) {
  const auto d = scratch();
  ASSERT_EQ(cli("scan --n 3 --p 2 --alpha 3:5:1 --u0 0.5,1 --horizon 100 --csv " + (d / "t.csv").string() +
                " --trajectory " + (d / "traj.csv").string() + " --trajectory-cell 1 --out " + (d / "s.json").string()),
            0);
  std::istringstream t(slurp(d / "t.csv"));
  std::string line;
  std::getline(t, line);
  EXPECT_EQ(line.rfind("# radial class only", 0), 0u);
  std::getline(t, line);
  EXPECT_EQ(line, "alpha,u0,outcome,r_cross");
  int rows = 0;
  while (std::getline(t, line)) ++rows;
  EXPECT_EQ(rows, 6);
  EXPECT_EQ(slurp(d / "traj.csv").rfind("r,u,uprime,m\n", 0), 0u);

  ASSERT_EQ(cli("gradient-bound --n 3 --p 2 --kappa 1 --points 50 --csv " + (d / "g.csv").string() + " --out " +
                (d / "g.json").string()),
            0);
  EXPECT_EQ(slurp(d / "g.csv").rfind("family,n,p,kappa,r,u,g\n", 0), 0u);
  ASSERT_EQ(cli("harnack --profile bump --csv " + (d / "h.csv").string() + " --out " + (d / "h.json").string()), 0);
  EXPECT_EQ(slurp(d / "h.csv").rfind("ratio,profile,R,rho\n", 0), 0u);
}

TEST(Cli, ReportsAreByteIdentical) {
  const auto d = scratch();
  const std::string args = "identities --dim 2,3 --p 1.5,3 --samples 200 --seed 7";
  ASSERT_EQ(cli(args + " --out " + (d / "a.json").string()), 0);
  ASSERT_EQ(cli(args + " --out " + (d / "b.json").string()), 0);
  EXPECT_EQ(slurp(d / "a.json"), slurp(d / "b.json"));
  const auto in_process = serialize(run("identities", {{"dim", "2,3"}, {"p", "1.5,3"}, {"samples", 200}, {"seed", 7}}));
  EXPECT_EQ(slurp(d / "a.json"), in_process);
}

TEST(Cli, ShippedConfigsValidate) {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(PLAP_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".json") continue;
    auto j = json::parse(slurp(entry.path()));
    const std::string sub = j.at("subcommand");
    EXPECT_EQ(j.at("schema_version"), kSchemaVersion) << entry.path();
    j.erase("subcommand");
    j.erase("schema_version");
    EXPECT_NO_THROW(effective_config(sub, j)) << entry.path();
    ++seen;
  }
  EXPECT_GE(seen, 1);
}
