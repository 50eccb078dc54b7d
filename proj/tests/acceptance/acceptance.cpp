// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Thresholds are fixed here and never adjusted to results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "plap/experiments.hpp"

using namespace plap;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

/// Every entry passes and reports at least `min_samples` samples.
bool all_pass(const RunReport& r, std::uint64_t min_samples, std::string& why) {
  if (r.checks.empty()) {
    why = "no checks ran";
    return false;
  }
  for (const auto& c : r.checks) {
    if (c.status != "pass") {
      why = c.id + " " + c.status + (c.error.empty() ? "" : ": " + c.error);
      return false;
    }
    if (min_samples > 0 && c.data.value("samples", std::uint64_t{0}) < min_samples) {
      why = c.id + " has too few samples";
      return false;
    }
  }
  return true;
}

double max_field(const RunReport& r, const char* key) {
  double m = 0.0;
  for (const auto& c : r.checks) {
    if (c.data.contains(key)) m = std::max(m, get_num(c.data[key]));
  }
  return m;
}

double min_field(const RunReport& r, const char* key) {
  double m = INFINITY;
  for (const auto& c : r.checks) {
    if (c.data.contains(key)) m = std::min(m, get_num(c.data[key]));
  }
  return m;
}

// 1. Identity suite over n in {2,3,4}, p in {1.5,2,3}, three models.
Verdict identity_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("identities", {{"dim", {2, 3, 4}}, {"p", {1.5, 2.0, 3.0}}, {"samples", 1000}, {"seed", 42}, {"tol", 1e-7}});
  const double secs = seconds_since(t0);
  std::string why;
  bool ok = all_pass(r, 1000, why) && r.checks.size() == 45 && max_field(r, "max_rel_residual") <= 1e-7 && secs <= 120.0;
  if (ok) why = "45 checks, max rel residual " + fmt(max_field(r, "max_rel_residual"));
  return {ok, why + ", " + fmt(secs) + " s"};
}

// 2. Trace inequality, 1e5 jets per (p, b) cell, plus the p = 2 equality case.
Verdict trace_inequality() {
  const auto r = run("trace-ineq", {{"samples", 100000}, {"tol", 1e-10}, {"equality_tol", 1e-12}});
  std::string why;
  const bool ok = all_pass(r, 0, why) && r.checks.size() == 2;
  const auto& ineq = r.checks[0].data;
  const bool counted = ineq["samples"].get<std::uint64_t>() + ineq["skipped"].get<std::uint64_t>() == 100000u * 15u;
  return {ok && counted, ok ? "min margin " + fmt(get_num(ineq["min_margin"])) + ", p=2 residual " +
                                  fmt(get_num(r.checks[1].data["max_rel_residual"]))
                            : why};
}

// 3. Kato inequality, 1e5 jets per (n, p) cell.
Verdict kato() {
  const auto r = run("kato", {{"samples", 100000}, {"tol", 1e-10}});
  std::string why;
  const bool ok = all_pass(r, 0, why);
  const auto& d = r.checks[0].data;
  const bool counted = d["samples"].get<std::uint64_t>() + d["skipped"].get<std::uint64_t>() == 100000u * 12u;
  return {ok && counted, ok ? "min margin " + fmt(get_num(d["min_margin"])) + " over " + d["samples"].dump() + " jets" : why};
}

// 4. Emden bubbles: closed-form residual, shooting match and u(0).
Verdict emden_bubble_check() {
  const auto r = run("bubble", {{"cases", {{3, 2, 1}, {3, 2, 2}, {4, 2, 1}, {5, 3, 1}}},
                                {"horizon", 20.0},
                                {"residual_tol", 1e-8},
                                {"match_tol", 1e-6}});
  std::string why;
  const bool ok = all_pass(r, 1, why) && r.checks.size() == 8;
  const double u0 = emden_bubble(3, 2.0, 1.0, 0.0);
  const bool center = std::abs(u0 - std::pow(3.0, 0.25)) <= 1e-9 && std::abs(u0 - 1.316074) <= 1e-6;
  return {ok && center, (ok ? "max deviation " + fmt(max_field(r, "max_rel_residual")) : why) + ", u(0) = " +
                            std::to_string(u0)};
}

// 5. Liouville dichotomy scan.
Verdict dichotomy_scan() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("scan", {{"n", 3}, {"p", 2.0}, {"alpha", {1.0, 2.0, 3.0, 4.0, 4.5, 4.9, 5.0}}, {"u0", {0.5, 1.0, 2.0}},
                              {"tail_tol", 0.05}});
  const double secs = seconds_since(t0);
  if (r.checks.empty() || r.checks[0].status == "error") return {false, "scan did not run"};
  int crossed = 0, bubbles = 0;
  for (const auto& c : r.checks[0].data["cells"]) {
    const double a = c["alpha"];
    if (a < 5.0 && c["outcome"] == "crossed_zero") ++crossed;
    if (a == 5.0 && c["outcome"] == "stayed_positive" && std::abs(get_num(c["tail_exponent"]) + 1.0) <= 0.05) ++bubbles;
  }
  const bool ok = crossed == 18 && bubbles == 3 && r.pass && secs <= 60.0;
  return {ok, std::to_string(crossed) + "/18 crossed, " + std::to_string(bubbles) + "/3 positive with tail -1, " +
                  fmt(secs) + " s"};
}

// 6. Moser pointwise inequality for (3, 2, u^2, 0, 2).
Verdict moser() {
  const auto r = run("moser", {{"model", "euclidean"}, {"n", 3}, {"p", 2.0}, {"f", "pure_power:2"}, {"u0", 1.0},
                               {"delta0", 0.0}, {"lambda", 2.0}, {"tol", 1e-8}, {"basic2", false}});
  std::string why;
  const bool ok = all_pass(r, 1, why);
  return {ok, ok ? "min margin " + fmt(get_num(r.checks[0].data["min_margin"])) + " over " +
                       r.checks[0].data["samples"].dump() + " samples"
                 : why};
}

// 7. Global gradient bound with sharpness over the 27-cell sweep.
Verdict gradient_bound() {
  const auto r = run("gradient-bound", {{"n", {2, 3, 4}}, {"p", {1.5, 2.0, 3.0}}, {"kappa", {0.25, 1.0, 4.0}},
                                        {"delta0", 0.0}, {"rel_tol", 1e-6}, {"profile", "horospherical"}});
  std::string why;
  bool ok = all_pass(r, 0, why) && r.checks.size() == 27;
  int sharp = 0;
  for (const auto& c : r.checks) sharp += c.data.value("sharp", false) ? 1 : 0;
  ok = ok && sharp == 27;
  return {ok, (why.empty() ? "" : why + "; ") + std::to_string(sharp) + "/27 sharp, min attainment " +
                  fmt(min_field(r, "attainment"))};
}

// 8. Local estimate structure on the affine and fundamental families.
Verdict local_scaling() {
  const json radii = {1.0, 2.0, 4.0, 8.0};
  const auto affine = run("local-scaling", {{"family", {"affine"}}, {"dim", {2, 3, 4}}, {"p", {1.5, 2.0, 3.0}}, {"radii", radii}});
  const auto fund = run("local-scaling", {{"family", {"fundamental"}}, {"dim", {2, 4}}, {"p", {1.5, 3.0}}, {"radii", radii}});
  std::string why;
  bool ok = all_pass(affine, 0, why) && all_pass(fund, 0, why);
  // The affine quantity is exactly 4/3 at every radius.
  double affine_dev = 0.0;
  for (const auto& c : affine.checks) {
    for (const auto& p : c.data["points"]) affine_dev = std::max(affine_dev, std::abs(get_num(p["quantity"]) - 4.0 / 3.0));
  }
  ok = ok && affine_dev <= 1e-9;
  double slope = 0.0;
  for (const auto* r : {&affine, &fund}) {
    for (const auto& c : r->checks) slope = std::max(slope, std::abs(get_num(c.data["slope"])));
  }
  return {ok, (why.empty() ? "" : why + "; ") + "max |slope| " + fmt(slope) + ", affine deviation from 4/3 " + fmt(affine_dev)};
}

// 9. Weak Harnack and local maximum principle ratios over R in [1, 32].
Verdict harnack() {
  std::string why;
  bool ok = true;
  double lo = INFINITY, spread = 0.0;
  int checks = 0;
  for (double q : {0.5, 1.0, 2.5}) {  // (p - 1) chi = 3 for n = 3, p = 2
    const auto r = run("harnack", {{"model", "euclidean"}, {"n", 3}, {"p", 2.0}, {"q", q},
                                   {"profile", {"constant", "bump", "cap", "fundamental"}},
                                   {"radii", "1:32:1"}, {"band", 1e3}});
    ok = all_pass(r, 0, why) && ok;
    for (const auto& c : r.checks) {
      const double mn = get_num(c.data["min_ratio"]), mx = get_num(c.data["max_ratio"]);
      lo = std::min(lo, mn);
      spread = std::max(spread, mx / mn);
      ok = ok && mn > 0.0 && mx / mn <= 1e3;
      ++checks;
    }
  }
  return {ok && checks == 24, (why.empty() ? "" : why + "; ") + std::to_string(checks) + " ratio sweeps, min rho " + fmt(lo) +
                                  ", max band " + fmt(spread)};
}

// 10. Sphere scan: uniqueness of the constant, and the critical boundary.
Verdict sphere_scan() {
  const auto r = run("bv-sphere", {{"n", 3}, {"q", 3.0}, {"lambda", 1.0}, {"u0", "0.2:3:0.1"}, {"tol", 1e-6}});
  if (r.checks.empty() || r.checks[0].status == "error") return {false, "subcritical scan did not run"};
  const auto& d = r.checks[0].data;
  const auto reg = get_num_list(d["regular_u0"]);
  const bool unique = r.pass && reg.size() == 1 && std::abs(reg[0] - 1.0) <= 1e-6;
  const auto b = run("bv-sphere", {{"n", 3}, {"q", 5.0}, {"lambda", 0.75}, {"u0", "0.1:4:0.1"}, {"tol", 1e-6}});
  if (b.checks.empty() || b.checks[0].status == "error") return {false, "boundary scan did not run"};
  const auto& bd = b.checks[0].data;
  const std::string flag = bd["flag"];
  const bool boundary = b.checks[0].status == "exploration" && bd["regular_u0"].size() >= 2 &&
                        flag.find("nonconstant") != std::string::npos;
  return {unique && boundary, "regular u0 = " + d["regular_u0"].dump() + "; boundary: " +
                                  std::to_string(bd["regular_u0"].size()) + " regular, flag '" + flag + "'"};
}

// 11. Exponent exactness and the placement of infinite exponents.
Verdict exponent_table() {
  bool ok = true;
  for (int n = 3; n <= 10; ++n) {
    const auto ps = critical_exponent(n, 2.0);
    ok = ok && !ps.is_infinite() && ps.value() == (n + 2.0) / (n - 2.0);
  }
  int infinite = 0, cells = 0;
  for (int n = 2; n <= 10; ++n) {
    for (double p : {1.05, 1.5, 2.0, 2.5, 3.0, 4.0, 5.5, 7.0, 10.0, 12.0}) {
      const bool inf = critical_exponent(n, p).is_infinite();
      ok = ok && inf == (std::max(0.0, n - p) == 0.0);
      for (const auto& rec : threshold_table(n, p)) {
        if (rec.name == ExponentName::Ps) ok = ok && rec.value.is_infinite() == inf;
      }
      infinite += inf ? 1 : 0;
      ++cells;
    }
  }
  return {ok, "ps(n,2) exact for n=3..10; " + std::to_string(infinite) + "/" + std::to_string(cells) +
                  " grid cells infinite, all with (n-p)+ = 0"};
}

// 12. Byte-identical reports for identical configuration and seed.
Verdict determinism() {
  const json cfg = {{"seed", 42}};
  const auto a = serialize(run("identities", cfg));
  const auto b = serialize(run("identities", cfg));
  const auto c = serialize(run("identities", {{"seed", 43}}));
  const bool roundtrip = serialize(parse_report(a)) == a;
  return {a == b && roundtrip, std::string(a == b ? "identical" : "DIFFERENT") + " (" + std::to_string(a.size()) +
                                   " bytes), round-trip " + (roundtrip ? "lossless" : "LOSSY") + ", other seed " +
                                   (a == c ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"identity suite", identity_suite},          {"trace inequality", trace_inequality},
      {"Kato inequality", kato},                   {"Emden bubble", emden_bubble_check},
      {"Liouville dichotomy scan", dichotomy_scan}, {"Moser pointwise inequality", moser},
      {"global gradient bound", gradient_bound},   {"local estimate structure", local_scaling},
      {"weak Harnack / local max principle", harnack}, {"sphere scan", sphere_scan},
      {"exponent table exactness", exponent_table}, {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
