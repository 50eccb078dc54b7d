// Command-line front end: one subcommand per experiment, options generated
// from each subcommand's parameter table. Exit status 0 when every check
// passes, 1 when a check fails or errors, 2 on usage or configuration errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "plap.hpp"

namespace {

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (auto& ch : s) {
    if (ch == '_') ch = '-';
  }
  return "--" + s;
}

std::string default_text(const plap::Param& p) {
  if (p.def.is_string()) return p.def.get<std::string>();
  if (p.def.is_null()) return "none";
  return p.def.dump();
}

/// Config file: a JSON object of parameters for one subcommand. The reserved
/// keys "subcommand" and "schema_version" are checked and stripped.
plap::json read_config_file(const std::string& path, const std::string& sub) {
  std::ifstream in(path);
  if (!in) throw plap::ConfigError("cannot read config file '" + path + "'");
  plap::json j;
  try {
    j = plap::json::parse(in);
  } catch (const plap::json::parse_error& e) {
    throw plap::ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw plap::ConfigError("config file must hold a JSON object");
  if (j.contains("subcommand")) {
    if (j["subcommand"] != sub) throw plap::ConfigError("config file is for subcommand " + j["subcommand"].dump());
    j.erase("subcommand");
  }
  if (j.contains("schema_version")) {
    if (j["schema_version"] != plap::kSchemaVersion) throw plap::ConfigError("unsupported config schema_version");
    j.erase("schema_version");
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification lab for -Lap_p u = f(u) on model manifolds"};
  app.set_version_flag("--version", plap::kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path, config_path;
  bool timing = false;
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--config", config_path, "JSON parameter file; its values override flags");
  app.add_flag("--timing", timing, "record wall time in the report");

  std::map<std::string, std::map<std::string, std::string>> raw;  // subcommand -> key -> text
  std::map<std::string, CLI::App*> apps;
  for (const auto& sub : plap::subcommands()) {
    auto* sc = app.add_subcommand(sub.name, sub.help);
    apps[sub.name] = sc;
    for (const auto& prm : sub.params) {
      std::string help = prm.help + " [default: " + default_text(prm) + "]";
      sc->add_option(flag_name(prm.key), raw[sub.name][prm.key], help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string name;
  for (const auto& [n, sc] : apps) {
    if (sc->parsed()) name = n;
  }

  plap::RunReport rep;
  try {
    plap::json overrides = plap::json::object();
    for (const auto& prm : plap::find_subcommand(name).params) {
      if (apps[name]->count(flag_name(prm.key)) > 0) overrides[prm.key] = raw[name][prm.key];
    }
    if (!config_path.empty()) {
      const auto file = read_config_file(config_path, name);
      for (const auto& [k, v] : file.items()) overrides[k] = v;
    }
    rep = plap::run(name, overrides, timing);
  } catch (const plap::ConfigError& e) {
    std::cerr << "plap: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "plap: " << e.what() << "\n";
    return 1;
  }

  const std::string text = plap::serialize(rep);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out_path);
    if (!os || !(os << text)) {
      std::cerr << "plap: cannot write '" << out_path << "'\n";
      return 1;
    }
    std::size_t failed = 0;
    for (const auto& c : rep.checks) failed += c.ok() ? 0 : 1;
    std::cerr << name << ": " << (rep.pass ? "pass" : "FAIL") << " (" << rep.checks.size() << " checks, " << failed
              << " failing) -> " << out_path << "\n";
  }
  return rep.pass ? 0 : 1;
}
