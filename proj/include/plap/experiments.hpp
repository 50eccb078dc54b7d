#pragma once
/// Experiment dispatch shared by the command-line tool and the acceptance
/// runner. Each subcommand owns a parameter table: typed defaults that are
/// always echoed, so a report states every tolerance and grid it used.
/// Effective configuration = defaults, then overrides; unknown keys and
/// ill-typed values raise ConfigError before anything runs. Exceptions thrown
/// while a check runs are recorded in the report as status "error".

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <typeinfo>
#include <vector>

#include "plap/errors.hpp"
#include "plap/estimates.hpp"
#include "plap/exponents.hpp"
#include "plap/geometry.hpp"
#include "plap/identities.hpp"
#include "plap/reaction.hpp"
#include "plap/run_report.hpp"
#include "plap/shooting.hpp"
#include "plap/solution_checks.hpp"

namespace plap {

/// Malformed configuration: unknown key, wrong type, bad enumeration value.
struct ConfigError : InputError {
  using InputError::InputError;
};

enum class ParamKind { Int, UInt, Real, OptReal, Bool, Str, IntList, RealList, StrList, RealTuples };

struct Param {
  std::string key;
  ParamKind kind;
  json def;
  std::string help;
  std::vector<std::string> choices = {};  // for Str / StrList
};

// ------------------------------------------------------------ value parsing

namespace detail {

inline double parse_double(const std::string& s, const std::string& key) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || b == e) throw ConfigError(key + ": '" + s + "' is not a number");
  return v;
}

inline std::int64_t parse_int(const std::string& s, const std::string& key) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw ConfigError(key + ": '" + s + "' is not an integer");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

/// Grid values rounded to 12 significant digits so that 0.1 steps print as
/// the decimals the user wrote.
inline double tidy(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

/// "a:b:s" (inclusive of b up to rounding) or "x,y,z".
inline std::vector<double> parse_real_list(const std::string& s, const std::string& key) {
  std::vector<double> v;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw ConfigError(key + ": range must be start:stop:step");
    const double a = parse_double(parts[0], key), b = parse_double(parts[1], key), h = parse_double(parts[2], key);
    if (!(h > 0.0) || !(b >= a)) throw ConfigError(key + ": range needs step > 0 and stop >= start");
    const auto count = static_cast<std::int64_t>(std::floor((b - a) / h + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError(key + ": range too long");
    for (std::int64_t i = 0; i < count; ++i) v.push_back(tidy(a + static_cast<double>(i) * h));
    return v;
  }
  for (const auto& part : split(s, ',')) v.push_back(parse_double(part, key));
  return v;
}

inline double json_real(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>(), key);
  throw ConfigError(key + ": expected a number, got " + j.dump());
}

inline std::int64_t json_int(const json& j, const std::string& key) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return parse_int(j.get<std::string>(), key);
  throw ConfigError(key + ": expected an integer, got " + j.dump());
}

inline void check_choice(const Param& prm, const std::string& s) {
  if (prm.choices.empty() || std::find(prm.choices.begin(), prm.choices.end(), s) != prm.choices.end()) return;
  std::string all;
  for (const auto& c : prm.choices) all += (all.empty() ? "" : ", ") + c;
  throw ConfigError(prm.key + ": '" + s + "' is not one of {" + all + "}");
}

}  // namespace detail

/// Validates a value for `prm` and returns its canonical JSON form. Strings
/// are accepted for every kind so command-line text can pass through here.
inline json normalize_param(const Param& prm, const json& v) {
  const auto& key = prm.key;
  switch (prm.kind) {
    case ParamKind::Int: return detail::json_int(v, key);
    case ParamKind::UInt: {
      if (v.is_number_unsigned()) return v;
      if (v.is_string() && !v.get<std::string>().empty() && v.get<std::string>()[0] != '-') {
        const auto& s = v.get_ref<const std::string&>();
        std::uint64_t u = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), u);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(key + ": '" + s + "' is not an unsigned integer");
        return u;
      }
      const auto i = detail::json_int(v, key);
      if (i < 0) throw ConfigError(key + ": must be nonnegative");
      return static_cast<std::uint64_t>(i);
    }
    case ParamKind::Real: return detail::json_real(v, key);
    case ParamKind::OptReal:
      if (v.is_null() || (v.is_string() && v.get<std::string>() == "none")) return nullptr;
      return detail::json_real(v, key);
    case ParamKind::Bool:
      if (v.is_boolean()) return v;
      if (v == "true") return true;
      if (v == "false") return false;
      throw ConfigError(key + ": expected true or false, got " + v.dump());
    case ParamKind::Str:
      if (!v.is_string()) throw ConfigError(key + ": expected a string, got " + v.dump());
      detail::check_choice(prm, v.get<std::string>());
      return v;
    case ParamKind::IntList: {
      json out = json::array();
      if (v.is_string()) {
        for (const auto& s : detail::split(v.get<std::string>(), ',')) out.push_back(detail::parse_int(s, key));
      } else if (v.is_array()) {
        for (const auto& x : v) out.push_back(detail::json_int(x, key));
      } else {
        out.push_back(detail::json_int(v, key));
      }
      if (out.empty()) throw ConfigError(key + ": empty list");
      return out;
    }
    case ParamKind::RealList: {
      json out = json::array();
      if (v.is_string()) {
        for (double x : detail::parse_real_list(v.get<std::string>(), key)) out.push_back(x);
      } else if (v.is_array()) {
        for (const auto& x : v) out.push_back(detail::json_real(x, key));
      } else {
        out.push_back(detail::json_real(v, key));
      }
      if (out.empty()) throw ConfigError(key + ": empty list");
      return out;
    }
    case ParamKind::StrList: {
      json out = json::array();
      if (v.is_string()) {
        for (const auto& s : detail::split(v.get<std::string>(), ',')) out.push_back(s);
      } else if (v.is_array()) {
        for (const auto& x : v) {
          if (!x.is_string()) throw ConfigError(key + ": expected strings, got " + x.dump());
          out.push_back(x);
        }
      } else {
        throw ConfigError(key + ": expected a list of strings, got " + v.dump());
      }
      if (out.empty()) throw ConfigError(key + ": empty list");
      for (const auto& s : out) detail::check_choice(prm, s.get<std::string>());
      return out;
    }
    case ParamKind::RealTuples: {
      json out = json::array();
      if (v.is_string()) {
        for (const auto& t : detail::split(v.get<std::string>(), ';')) {
          json row = json::array();
          for (const auto& s : detail::split(t, ',')) row.push_back(detail::parse_double(s, key));
          out.push_back(row);
        }
      } else if (v.is_array()) {
        for (const auto& t : v) {
          if (!t.is_array()) throw ConfigError(key + ": expected a list of tuples, got " + t.dump());
          json row = json::array();
          for (const auto& x : t) row.push_back(detail::json_real(x, key));
          out.push_back(row);
        }
      } else {
        throw ConfigError(key + ": expected a list of tuples, got " + v.dump());
      }
      if (out.empty()) throw ConfigError(key + ": empty list");
      return out;
    }
  }
  throw ConfigError(key + ": unsupported parameter kind");
}

// ---------------------------------------------------------- reaction specs

/// "tag" or "tag:p1,p2,..."; tags and parameters as in ReactionTerm:
/// pure_power:alpha[,scale], power_log:alpha,beta, two_power:alpha,a,beta,
/// rational:alpha,beta, linear_minus_power:q,lambda, zero.
inline ReactionTerm reaction_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string tag = spec.substr(0, colon);
  std::vector<double> a;
  if (colon != std::string::npos) {
    for (const auto& s : detail::split(spec.substr(colon + 1), ',')) a.push_back(detail::parse_double(s, "f"));
  }
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (a.size() < lo || a.size() > hi) throw ConfigError("f: wrong number of parameters for '" + tag + "'");
  };
  if (tag == "pure_power") {
    need(1, 2);
    return ReactionTerm::pure_power(a[0], a.size() == 2 ? a[1] : 1.0);
  }
  if (tag == "power_log") return need(2, 2), ReactionTerm::power_log(a[0], a[1]);
  if (tag == "two_power") return need(3, 3), ReactionTerm::two_power(a[0], a[1], a[2]);
  if (tag == "rational") return need(2, 2), ReactionTerm::rational(a[0], a[1]);
  if (tag == "linear_minus_power") return need(2, 2), ReactionTerm::linear_minus_power(a[0], a[1]);
  if (tag == "zero") return need(0, 0), ReactionTerm::zero();
  throw ConfigError("f: unknown reaction family '" + tag + "'");
}

// ------------------------------------------------------------ check helpers

namespace detail {

inline std::string error_label(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return std::string("numerical error: ") + e.what();
  if (dynamic_cast<const PreconditionError*>(&e)) return std::string("precondition error: ") + e.what();
  if (dynamic_cast<const SingularityError*>(&e)) return std::string("singularity: ") + e.what();
  if (dynamic_cast<const DomainError*>(&e)) return std::string("domain error: ") + e.what();
  if (dynamic_cast<const CapabilityError*>(&e)) return std::string("capability error: ") + e.what();
  if (dynamic_cast<const InputError*>(&e)) return std::string("input error: ") + e.what();
  return std::string("error: ") + e.what();
}

/// Runs `make` (returning a CheckEntry) and records any exception as an
/// error entry with the given kind and id.
template <class Make>
void guarded(RunReport& rep, const std::string& kind, const std::string& id, Make&& make) {
  try {
    rep.checks.push_back(make());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    CheckEntry c{kind, id, "error"};
    c.error = error_label(e);
    rep.checks.push_back(std::move(c));
  }
}

inline CheckEntry identity_entry(const std::string& id, const IdentityReport& r) {
  return {"identity", id, status_of(r.pass), json(r)};
}

inline CheckEntry inequality_entry(const std::string& id, const InequalityReport& r) {
  return {"inequality", id, status_of(r.pass), json(r)};
}

inline std::vector<double> reals(const json& j) { return j.get<std::vector<double>>(); }
inline std::vector<int> ints(const json& j) { return j.get<std::vector<int>>(); }
inline std::vector<std::string> strs(const json& j) { return j.get<std::vector<std::string>>(); }

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline void check_dim(int n) {
  if (n < 1 || n > 6) throw ConfigError("dimension must be in [1, 6]");
}

// ----------------------------------------------------------- subcommands

inline void run_identities(const json& c, RunReport& rep) {
  auto suite = strs(c["suite"]);
  if (std::find(suite.begin(), suite.end(), "all") != suite.end()) {
    suite = {"decomposition", "ww", "bochner_X", "bochner_p", "basic1"};
  }
  const double tol = c["tol"];
  for (const auto& model : strs(c["models"])) {
    for (int n : ints(c["dim"])) {
      check_dim(n);
      for (const auto& id : suite) {
        const std::string label = id + "/" + model + "/n=" + std::to_string(n);
        guarded(rep, "identity", label, [&] {
          Campaign cp;
          cp.model = ManifoldModel::named(model, n, c["kappa"].get<double>());
          cp.radial = model != "euclidean";
          cp.family = field_family_from_string(c["family"]);
          cp.ps = reals(c["p"]);
          cp.samples = c["samples"];
          cp.seed = c["seed"];
          IdentityReport r;
          if (id == "decomposition") r = check_decomposition(cp, tol);
          else if (id == "ww") r = check_ww(cp, tol);
          else if (id == "bochner_X") r = check_bochner_X(cp, tol);
          else if (id == "bochner_p") r = check_bochner_p(cp, tol);
          else r = check_basic1(cp, tol);
          auto e = identity_entry(label, r);
          e.data["campaign"] = cp.describe();
          return e;
        });
      }
    }
  }
}

inline TraceInequalityPlan trace_plan(const json& c) {
  TraceInequalityPlan plan;
  plan.samples = c["samples"];
  plan.ps = reals(c["p"]);
  plan.bs = reals(c["b"]);
  plan.dims = ints(c["dim"]);
  plan.seed = c["seed"];
  for (int n : plan.dims) check_dim(n);
  return plan;
}

inline void run_trace(const json& c, RunReport& rep) {
  const auto plan = trace_plan(c);
  guarded(rep, "inequality", "trace_inequality",
          [&] { return inequality_entry("trace_inequality", check_trace_inequality(plan, c["tol"])); });
  guarded(rep, "identity", "trace_equality_p2",
          [&] { return identity_entry("trace_equality_p2", check_trace_equality_p2(plan, c["equality_tol"])); });
}

inline void run_kato(const json& c, RunReport& rep) {
  KatoPlan plan;
  plan.samples = c["samples"];
  plan.dims = ints(c["dim"]);
  plan.ps = reals(c["p"]);
  plan.seed = c["seed"];
  for (int n : plan.dims) check_dim(n);
  guarded(rep, "inequality", "kato", [&] { return inequality_entry("kato", check_kato(plan, c["tol"])); });
}

inline void run_moser(const json& c, RunReport& rep) {
  const int n = c["n"];
  check_dim(n);
  const ReactionTerm f = reaction_from_spec(c["f"]);
  std::optional<CertifiedSolution> cert;
  try {
    const RadialProblem pr{ManifoldModel::named(c["model"], n, c["kappa"].get<double>()), c["p"].get<double>(), f};
    ShootOptions opt;
    opt.horizon = c["horizon"];
    cert = certify_radial_solution(pr, c["u0"], opt, c["certify_tol"]);
  } catch (const std::exception& e) {
    CheckEntry err{"inequality", "moser", "error"};
    err.error = error_label(e);
    rep.checks.push_back(std::move(err));
    return;
  }
  const CertifiedSolution& sol = *cert;
  json seg{{"outcome", to_string(sol.shot.kind)}, {"r_lo", num(sol.r_lo)}, {"r_hi", num(sol.r_hi)},
           {"r_cross", num(sol.shot.r_cross)}, {"reaction", f.describe()}};
  guarded(rep, "inequality", "moser", [&] {
    auto e = inequality_entry("moser", check_moser_pointwise(sol, c["delta0"], c["lambda"], c["tol"]));
    e.data["segment"] = seg;
    return e;
  });
  if (c["basic2"].get<bool>()) {
    guarded(rep, "identity", "basic2_special", [&] {
      if (f.family() != ReactionFamily::PurePower) throw CapabilityError("the special identity needs a pure power");
      auto e = identity_entry("basic2_special", check_basic2_special(sol, f.alpha(), c["basic2_tol"]));
      e.data["segment"] = seg;
      return e;
    });
  }
  const std::string traj = c["trajectory"];
  if (!traj.empty()) {
    auto os = open_output(traj);
    write_trajectory_csv(os, sol.shot.trajectory);
  }
}

inline void run_bubble(const json& c, RunReport& rep) {
  const double horizon = c["horizon"];
  const int points = c["points"];
  if (points < 2 || !(horizon > 0.0)) throw ConfigError("bubble: need horizon > 0 and at least two points");
  std::vector<double> radii(points);
  for (int k = 0; k < points; ++k) radii[k] = horizon * k / (points - 1.0);
  for (const auto& t : c["cases"]) {
    if (t.size() != 3) throw ConfigError("cases: each case is (n, p, lambda)");
    const double nd = t[0], p = t[1], lambda = t[2];
    const int n = static_cast<int>(nd);
    if (n != nd) throw ConfigError("cases: n must be an integer");
    const std::string tag = "(n=" + std::to_string(n) + ",p=" + fmt(p) + ",lambda=" + fmt(lambda) + ")";
    guarded(rep, "identity", "emden_residual" + tag, [&] {
      auto e = identity_entry("emden_residual" + tag, emden_residual(n, p, lambda, radii, c["residual_tol"]));
      e.data["u_at_0"] = num(emden_bubble(n, p, lambda, 0.0));
      return e;
    });
    guarded(rep, "identity", "bubble_match" + tag, [&] {
      return identity_entry("bubble_match" + tag, bubble_match(n, p, lambda, horizon, c["match_tol"]));
    });
  }
}

/// Prediction for a pure-power cell: crossing below p_s, a positive bubble
/// with tail exponent -(n-p)/(p-1) at p_s, nothing asserted above.
inline std::string scan_cell_status(const ScanTable& t, const ScanCell& cell, double tail_tol) {
  if (t.ps.is_infinite() || cell.alpha < t.ps.value() * (1.0 - 1e-12)) {
    return status_of(cell.kind == OutcomeKind::CrossedZero);
  }
  if (cell.alpha <= t.ps.value() * (1.0 + 1e-12)) {
    const double expected = -(t.n - t.p) / (t.p - 1.0);
    return status_of(cell.kind == OutcomeKind::StayedPositive && std::abs(cell.tail_exponent - expected) <= tail_tol);
  }
  return "exploration";
}

inline void run_scan(const json& c, RunReport& rep) {
  const int n = c["n"];
  const double p = c["p"];
  check_dim(n);
  const auto alphas = reals(c["alpha"]);
  const auto u0s = reals(c["u0"]);
  ShootOptions opt;
  opt.horizon = c["horizon"];
  guarded(rep, "scan", "liouville_scan", [&] {
    const auto t = liouville_scan(n, p, alphas, u0s, opt);
    CheckEntry e{"scan", "liouville_scan", "exploration"};
    e.data["scope"] = kRadialScopeNote;
    e.data["ps"] = num(t.ps.to_double());
    e.data["counts"] = {{"crossed_zero", t.count(OutcomeKind::CrossedZero)},
                        {"stayed_positive", t.count(OutcomeKind::StayedPositive)},
                        {"inconclusive", t.count(OutcomeKind::Inconclusive)}};
    bool any_verdict = false, all_pass = true;
    json cells = json::array();
    for (const auto& cell : t.cells) {
      const auto st = scan_cell_status(t, cell, c["tail_tol"]);
      if (st != "exploration") {
        any_verdict = true;
        all_pass = all_pass && st == "pass";
      }
      json jc{{"alpha", cell.alpha},           {"u0", cell.u0},   {"outcome", to_string(cell.kind)},
              {"r_cross", num(cell.r_cross)}, {"tail_exponent", num(cell.tail_exponent)}, {"status", st}};
      if (!cell.note.empty()) jc["note"] = cell.note;
      cells.push_back(jc);
    }
    e.data["cells"] = cells;
    if (any_verdict) e.status = status_of(all_pass);
    const std::string csv = c["csv"];
    if (!csv.empty()) {
      auto os = open_output(csv);
      write_scan_csv(os, t);
    }
    return e;
  });
  const std::string traj = c["trajectory"];
  if (!traj.empty()) {
    const std::uint64_t k = c["trajectory_cell"];
    if (k >= alphas.size() * u0s.size()) throw ConfigError("trajectory_cell outside the scan grid");
    const double a = alphas[k / u0s.size()], u0 = u0s[k % u0s.size()];
    const auto s = shoot({ManifoldModel::euclidean(n), p, ReactionTerm::pure_power(a)}, u0, opt);
    auto os = open_output(traj);
    write_trajectory_csv(os, s.trajectory);
  }
}

inline void run_bv_sphere(const json& c, RunReport& rep) {
  guarded(rep, "scan", "bv_sphere_scan", [&] {
    const auto r = bv_sphere_scan(c["n"], c["q"], c["lambda"], reals(c["u0"]), c["tol"]);
    CheckEntry e{"scan", "bv_sphere_scan", "exploration"};
    if (r.within_hypotheses) e.status = status_of(r.unique_constant);
    json cells = json::array();
    for (const auto& cell : r.cells) {
      cells.push_back({{"u0", cell.u0},
                       {"positive", cell.positive},
                       {"completed", cell.completed},
                       {"antipodal_flux", num(cell.m_end)},
                       {"residual", num(cell.residual)},
                       {"regular", cell.regular}});
    }
    e.data = {{"scope", kRadialScopeNote},
              {"constant", num(r.constant)},
              {"ricci_condition", r.ricci_condition},
              {"exponent_condition", r.exponent_condition},
              {"strict", r.strict},
              {"within_hypotheses", r.within_hypotheses},
              {"regular_u0", num_list(r.regular_u0)},
              {"unique_constant", r.unique_constant},
              {"tol", num(r.tol)},
              {"flag", r.flag},
              {"cells", cells}};
    return e;
  });
}

inline LogGradientProfile make_log_profile(const std::string& family, int n, double p, double kappa, double rtail,
                                           int points) {
  if (family == "constant") return constant_log_profile(n, p, kappa, tail_grid(rtail > 0.0 ? rtail : 10.0, points), 1.0);
  const auto grid = tail_grid(rtail > 0.0 ? rtail : default_tail(n, p, kappa), points);
  return family == "green" ? hn_green_profile(n, p, kappa, grid) : hn_p_harmonic_profile(n, p, kappa, grid);
}

inline void run_gradient_bound(const json& c, RunReport& rep) {
  const std::string family = c["profile"];
  const std::string csv = c["csv"];
  std::ofstream os;
  if (!csv.empty()) {
    os = open_output(csv);
    os.precision(17);
    os << "family,n,p,kappa,r,u,g\n";
  }
  for (int n : ints(c["n"])) {
    for (double p : reals(c["p"])) {
      for (double kappa : reals(c["kappa"])) {
        const std::string id = family + "(n=" + std::to_string(n) + ",p=" + fmt(p) + ",kappa=" + fmt(kappa) + ")";
        guarded(rep, "bound", id, [&] {
          const auto prof = make_log_profile(family, n, p, kappa, c["rtail"], c["points"]);
          if (os.is_open()) {
            for (std::size_t k = 0; k < prof.grid.size(); ++k) {
              os << family << "," << n << "," << p << "," << kappa << "," << prof.grid[k] << "," << prof.u[k] << ","
                 << prof.g[k] << "\n";
            }
          }
          const auto r = global_bound_check(prof, n, p, kappa, c["delta0"], c["rel_tol"]);
          CheckEntry e{"bound", id, status_of(r.pass)};
          e.data = {{"bound", num(r.bound)},
                    {"sup_g", num(r.sup_g)},
                    {"margin", num(r.margin)},
                    {"limit_estimate", num(r.limit_estimate)},
                    {"attainment", num(r.attainment)},
                    {"sharp", r.sharp},
                    {"sharp_fraction", num(r.sharp_fraction)},
                    {"rel_tol", num(r.rel_tol)},
                    {"delta0", num(r.delta0)},
                    {"r_tail", num(prof.grid.back())},
                    {"points", prof.grid.size()},
                    {"max_residual", num(prof.max_residual)},
                    {"residual_tol", num(prof.residual_tol)},
                    {"quad_error", num(prof.quad_error)}};
          return e;
        });
      }
    }
  }
}

inline void run_local_scaling(const json& c, RunReport& rep) {
  const auto radii = reals(c["radii"]);
  for (const auto& fam : strs(c["family"])) {
    for (int n : ints(c["dim"])) {
      for (double p : reals(c["p"])) {
        const std::string id = fam + "(n=" + std::to_string(n) + ",p=" + fmt(p) + ")";
        guarded(rep, "scaling", id, [&] {
          const auto r = local_scaling_check(local_family_from_string(fam), n, p, radii, c["samples"], c["seed"],
                                             c["slope_tol"], c["residual_tol"]);
          CheckEntry e{"scaling", id, status_of(r.pass)};
          json pts = json::array();
          for (const auto& q : r.points) {
            pts.push_back({{"R", num(q.R)},
                           {"quantity", num(q.quantity)},
                           {"max_residual", num(q.max_residual)},
                           {"samples", q.samples}});
          }
          e.data = {{"points", pts},           {"sup_quantity", num(r.sup_quantity)}, {"slope", num(r.slope)},
                    {"slope_tol", num(r.slope_tol)}, {"residual_tol", num(r.residual_tol)}, {"finite", r.finite},
                    {"stable", r.stable},      {"certified", r.certified}};
          return e;
        });
      }
    }
  }
}

inline void run_harnack(const json& c, RunReport& rep) {
  const int n = c["n"];
  check_dim(n);
  const double p = c["p"], q = c["q"];
  const auto radii = reals(c["radii"]);
  const std::string csv = c["csv"];
  std::ofstream os;
  if (!csv.empty()) {
    os = open_output(csv);
    os.precision(17);
    os << "ratio,profile,R,rho\n";
  }
  for (const auto& name : strs(c["profile"])) {
    for (const auto& which : strs(c["ratio"])) {
      const std::string id = which + "/" + name;
      guarded(rep, "ratio", id, [&] {
        const auto model = ManifoldModel::named(c["model"], n, c["kappa"].get<double>());
        const auto prof = named_superharmonic_profile(name, n, p);
        const auto r = which == "weak_harnack" ? weak_harnack_ratio(model, prof, p, q, radii, c["band"], c["cert_tol"])
                                               : local_max_principle_ratio(model, prof, p, q, radii, c["band"], c["cert_tol"]);
        if (os.is_open()) {
          for (std::size_t k = 0; k < r.radii.size(); ++k) os << which << "," << name << "," << r.radii[k] << "," << r.ratios[k] << "\n";
        }
        CheckEntry e{"ratio", id, status_of(r.pass)};
        e.data = {{"model", r.model},
                  {"radii", num_list(r.radii)},
                  {"ratios", num_list(r.ratios)},
                  {"min_ratio", num(r.min_ratio)},
                  {"max_ratio", num(r.max_ratio)},
                  {"band", num(r.band)},
                  {"min_superharmonic_margin", num(r.min_superharmonic_margin)},
                  {"certification_tol", num(r.certification_tol)},
                  {"q_range_upper", num((p - 1.0) * HarnackConfig::make(n, p, q).chi)}};
        return e;
      });
    }
  }
}

inline SignClass sign_from_string(const std::string& s) {
  if (s == "nonnegative") return SignClass::Nonnegative;
  if (s == "nonpositive") return SignClass::Nonpositive;
  return SignClass::Mixed;
}

inline void run_classify(const json& c, RunReport& rep) {
  guarded(rep, "classification", "classify_liouville", [&] {
    ReactionClass fc;
    fc.sign = sign_from_string(c["sign"]);
    fc.positive = c["positive"];
    fc.pure_power = c["pure_power"];
    if (!c["growth_p0"].is_null()) fc.growth_p0 = c["growth_p0"].get<double>();
    fc.noncompact = c["noncompact"];
    const auto r = classify_liouville(c["n"], c["p"], c["alpha"], fc);
    CheckEntry e{"classification", "classify_liouville", "pass"};
    e.data = {{"verdict", to_string(r.verdict)}, {"theorem", r.theorem}, {"fired", r.fired}, {"notes", r.notes},
              {"ps", num(critical_exponent(c["n"], c["p"]).to_double())}};
    return e;
  });
}

inline void run_thresholds(const json& c, RunReport& rep) {
  guarded(rep, "table", "threshold_table", [&] {
    const int n = c["n"];
    const double p = c["p"];
    CheckEntry e{"table", "threshold_table", "pass"};
    json rows = json::array();
    for (const auto& r : threshold_table(n, p)) {
      rows.push_back({{"name", to_string(r.name)}, {"value", num(r.value.to_double())}, {"valid", r.valid},
                      {"validity", r.validity}});
    }
    e.data = {{"ps", num(critical_exponent(n, p).to_double())}, {"table", rows}};
    return e;
  });
}

inline void run_volume(const json& c, RunReport& rep) {
  const int n = c["n"];
  check_dim(n);
  const auto radii = reals(c["radii"]);
  guarded(rep, "volume", "bishop_gromov", [&] {
    const auto model = ManifoldModel::named(c["model"], n, c["kappa"].get<double>());
    std::vector<double> vols, ratios;
    for (double R : radii) {
      vols.push_back(ball_volume(model, R));
      ratios.push_back(vols.back() / std::pow(R, n));
    }
    CheckEntry e{"volume", "bishop_gromov", "exploration"};
    e.data = {{"model", model.name()}, {"radii", num_list(radii)}, {"volumes", num_list(vols)}, {"ratios", num_list(ratios)}};
    // Monotonicity of Vol(B_r)/r^n is asserted only under Ric >= 0.
    if (model.kind() != ModelKind::Hyperbolic) {
      const auto bg = bishop_gromov_check(model, radii);
      e.status = status_of(bg.non_increasing);
      e.data["non_increasing"] = bg.non_increasing;
      e.data["constant"] = bg.constant;
    }
    return e;
  });
}

}  // namespace detail

// ------------------------------------------------------- subcommand table

struct Subcommand {
  std::string name;
  std::string help;
  std::vector<Param> params;
  std::function<void(const json&, RunReport&)> body;
};

inline const std::vector<Subcommand>& subcommands() {
  using K = ParamKind;
  const std::vector<std::string> models{"euclidean", "sphere", "hyperbolic"};
  const std::vector<std::string> nonneg_models{"euclidean", "sphere"};
  static const std::vector<Subcommand> table{
      {"identities",
       "field identities on seeded random fields",
       {{"suite", K::StrList, {"all"}, "identities to run", {"all", "decomposition", "ww", "bochner_X", "bochner_p", "basic1"}},
        {"dim", K::IntList, {2, 3, 4}, "dimensions"},
        {"p", K::RealList, {1.5, 2.0, 3.0}, "exponents p"},
        {"samples", K::UInt, 1000, "samples per (campaign, p)"},
        {"seed", K::UInt, 42, "master seed"},
        {"tol", K::Real, 1e-7, "relative residual tolerance"},
        {"models", K::StrList, models, "models (curved ones use radial fields)", models},
        {"kappa", K::Real, 1.0, "curvature scale of the curved models"},
        {"family", K::Str, "mixed", "general field family",
         {"polynomial", "gaussian", "radial_exp", "radial_rational", "mixed"}}},
       detail::run_identities},
      {"trace-ineq",
       "traceless trace inequality on random jets",
       {{"samples", K::UInt, 100000, "jets per (p, b) cell"},
        {"p", K::RealList, {1.2, 1.5, 2.0, 3.0, 5.0}, "exponents p"},
        {"b", K::RealList, {-2.0, 0.0, 1.0}, "weight exponents b"},
        {"dim", K::IntList, {2, 3, 4}, "dimensions, cycled by sample"},
        {"seed", K::UInt, 42, "master seed"},
        {"tol", K::Real, 1e-10, "allowed negative margin (relative)"},
        {"equality_tol", K::Real, 1e-12, "tolerance of the p = 2 equality case"}},
       detail::run_trace},
      {"kato",
       "refined Kato inequality on random jets",
       {{"samples", K::UInt, 100000, "jets per (n, p) cell"},
        {"dim", K::IntList, {2, 3, 4, 6}, "dimensions"},
        {"p", K::RealList, {1.5, 2.0, 3.0}, "exponents p"},
        {"seed", K::UInt, 42, "master seed"},
        {"tol", K::Real, 1e-10, "allowed negative margin (relative)"}},
       detail::run_kato},
      {"moser",
       "pointwise Moser inequality along a certified radial solution",
       {{"model", K::Str, "euclidean", "model", models},
        {"n", K::Int, 3, "dimension"},
        {"kappa", K::Real, 1.0, "curvature scale"},
        {"p", K::Real, 2.0, "exponent p"},
        {"f", K::Str, "pure_power:2", "reaction, tag:params"},
        {"u0", K::Real, 1.0, "central value"},
        {"horizon", K::Real, 100.0, "shooting horizon"},
        {"certify_tol", K::Real, 1e-8, "equation residual allowed on solution jets"},
        {"delta0", K::Real, 0.0, "structure parameter delta0"},
        {"lambda", K::Real, 2.0, "Moser exponent lambda"},
        {"tol", K::Real, 1e-8, "allowed negative margin (relative)"},
        {"basic2", K::Bool, true, "also check the solution identity at its special (a, b)"},
        {"basic2_tol", K::Real, 1e-6, "relative tolerance of the solution identity"},
        {"trajectory", K::Str, "", "CSV path for the trajectory (r,u,uprime,m)"}},
       detail::run_moser},
      {"bubble",
       "closed-form critical bubbles: residual and shooting match",
       {{"cases", K::RealTuples, {{3, 2, 1}, {3, 2, 2}, {4, 2, 1}, {5, 3, 1}}, "(n,p,lambda) tuples, ';'-separated"},
        {"horizon", K::Real, 20.0, "radius range [0, horizon]"},
        {"points", K::Int, 201, "residual sample radii"},
        {"residual_tol", K::Real, 1e-8, "closed-form residual tolerance"},
        {"match_tol", K::Real, 1e-6, "trajectory deviation tolerance"}},
       detail::run_bubble},
      {"scan",
       "radial Liouville dichotomy scan for f = u^alpha on R^n",
       {{"n", K::Int, 3, "dimension"},
        {"p", K::Real, 2.0, "exponent p"},
        {"alpha", K::RealList, {1.0, 2.0, 3.0, 4.0, 4.5, 4.9, 5.0}, "powers, list or start:stop:step"},
        {"u0", K::RealList, {0.5, 1.0, 2.0}, "central values"},
        {"horizon", K::Real, 100.0, "minimal shooting horizon"},
        {"tail_tol", K::Real, 0.05, "tail exponent tolerance at the critical power"},
        {"csv", K::Str, "", "CSV path for the table (alpha,u0,outcome,r_cross)"},
        {"trajectory", K::Str, "", "CSV path for one trajectory (r,u,uprime,m)"},
        {"trajectory_cell", K::UInt, 0, "row-major grid index of that trajectory"}},
       detail::run_scan},
      {"bv-sphere",
       "regular radial solutions of Lap u - lambda u + u^q = 0 on the round sphere",
       {{"n", K::Int, 3, "dimension"},
        {"q", K::Real, 3.0, "power q"},
        {"lambda", K::Real, 1.0, "linear coefficient lambda"},
        {"u0", K::RealList, "0.2:3:0.1", "central values, list or start:stop:step"},
        {"tol", K::Real, 1e-6, "antipodal regularity and bisection tolerance"}},
       detail::run_bv_sphere},
      {"gradient-bound",
       "global log-gradient bound on hyperbolic space",
       {{"n", K::IntList, {3}, "dimensions"},
        {"p", K::RealList, {2.0}, "exponents p"},
        {"kappa", K::RealList, {1.0}, "curvature scales"},
        {"delta0", K::Real, 0.0, "structure parameter delta0"},
        {"rtail", K::Real, 0.0, "tail radius; 0 selects 40 / ((n-1) sqrt(kappa) / (p-1))"},
        {"points", K::Int, 400, "grid points"},
        {"profile", K::Str, "horospherical", "profile family", {"horospherical", "green", "constant"}},
        {"rel_tol", K::Real, 1e-6, "relative slack on the bound"},
        {"csv", K::Str, "", "CSV path for the profiles (family,n,p,kappa,r,u,g)"}},
       detail::run_gradient_bound},
      {"local-scaling",
       "scale-invariant local log-gradient quantity on Euclidean balls",
       {{"family", K::StrList, {"affine", "fundamental"}, "p-harmonic families", {"affine", "fundamental"}},
        {"dim", K::IntList, {2, 4}, "dimensions"},
        {"p", K::RealList, {1.5, 3.0}, "exponents p"},
        {"radii", K::RealList, {1.0, 2.0, 4.0, 8.0}, "ball radii"},
        {"samples", K::UInt, 2000, "random sample points per ball"},
        {"seed", K::UInt, 42, "master seed"},
        {"slope_tol", K::Real, 0.05, "allowed log-log slope"},
        {"residual_tol", K::Real, 1e-9, "p-harmonicity residual tolerance"}},
       detail::run_local_scaling},
      {"harnack",
       "weak Harnack and local maximum principle ratios",
       {{"model", K::Str, "euclidean", "model (nonnegative Ricci)", nonneg_models},
        {"n", K::Int, 3, "dimension"},
        {"kappa", K::Real, 1.0, "curvature scale"},
        {"profile", K::StrList, {"constant", "bump", "cap"}, "superharmonic profiles",
         {"constant", "bump", "cap", "fundamental"}},
        {"ratio", K::StrList, {"weak_harnack", "local_max_principle"}, "ratios",
         {"weak_harnack", "local_max_principle"}},
        {"p", K::Real, 2.0, "exponent p"},
        {"q", K::Real, 1.0, "integrability exponent q"},
        {"radii", K::RealList, {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}, "ball radii"},
        {"band", K::Real, 1e3, "allowed max/min ratio"},
        {"cert_tol", K::Real, 1e-10, "superharmonicity certification tolerance"},
        {"csv", K::Str, "", "CSV path for the ratios (ratio,profile,R,rho)"}},
       detail::run_harnack},
      {"classify",
       "Liouville classification of (n, p, alpha)",
       {{"n", K::Int, 3, "dimension"},
        {"p", K::Real, 2.0, "exponent p"},
        {"alpha", K::Real, 4.9, "subcriticality exponent of f"},
        {"sign", K::Str, "nonnegative", "sign class of f", {"nonnegative", "nonpositive", "mixed"}},
        {"positive", K::Bool, true, "f > 0 on (0, inf)"},
        {"pure_power", K::Bool, true, "f is a pure power"},
        {"growth_p0", K::OptReal, nullptr, "growth exponent p0 > p, or none"},
        {"noncompact", K::Bool, true, "manifold is noncompact"}},
       detail::run_classify},
      {"thresholds",
       "exponent thresholds for (n, p)",
       {{"n", K::Int, 3, "dimension"}, {"p", K::Real, 2.0, "exponent p"}},
       detail::run_thresholds},
      {"volume",
       "ball volumes and the Bishop-Gromov ratio",
       {{"model", K::Str, "euclidean", "model", models},
        {"n", K::Int, 3, "dimension"},
        {"kappa", K::Real, 1.0, "curvature scale"},
        {"radii", K::RealList, {0.5, 1.0, 2.0, 3.0}, "ball radii"}},
       detail::run_volume},
  };
  return table;
}

inline const Subcommand& find_subcommand(const std::string& name) {
  for (const auto& s : subcommands()) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown subcommand '" + name + "'");
}

/// Defaults overlaid with `overrides`; every value normalized.
inline json effective_config(const std::string& name, const json& overrides = json::object()) {
  const auto& sub = find_subcommand(name);
  if (!overrides.is_object()) throw ConfigError("configuration must be a JSON object");
  json cfg = json::object();
  for (const auto& prm : sub.params) cfg[prm.key] = normalize_param(prm, prm.def);
  for (const auto& [key, value] : overrides.items()) {
    const auto it = std::find_if(sub.params.begin(), sub.params.end(), [&](const Param& p) { return p.key == key; });
    if (it == sub.params.end()) throw ConfigError("unknown key '" + key + "' for " + name);
    cfg[key] = normalize_param(*it, value);
  }
  return cfg;
}

/// Runs one subcommand. ConfigError escapes; failures inside checks are
/// recorded. The wall time is attached only when `timing` is set, so that
/// default reports are byte-identical across runs.
inline RunReport run(const std::string& name, const json& overrides = json::object(), bool timing = false) {
  const auto& sub = find_subcommand(name);
  RunReport rep;
  rep.subcommand = name;
  rep.config = effective_config(name, overrides);
  const auto t0 = std::chrono::steady_clock::now();
  sub.body(rep.config, rep);
  if (timing) rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.finalize();
  return rep;
}

}  // namespace plap
