// mswe: command-line driver for the mimetic shallow water solver.
#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "mswe/cases.hpp"
#include "mswe/checks.hpp"
#include "mswe/config.hpp"
#include "mswe/error.hpp"

namespace {

struct Flag {
  const char* names;  // CLI11 name list
  const char* key;    // config key
  const char* help;
};

// Every config key has a flag of the same name; a few also have the short
// spellings used in the documentation.
const Flag kFlags[] = {
    {"--case", "case", "convergence | balance | vortex_pair | orography | custom (run only)"},
    {"--p", "p", "polynomial degree"},
    {"--nx", "nx", "elements in x"},
    {"--ny", "ny", "elements in y (default nx)"},
    {"--lx", "lx", "domain length in x"},
    {"--ly", "ly", "domain length in y"},
    {"--x0", "x0", "domain origin x"},
    {"--y0", "y0", "domain origin y"},
    {"--f", "f", "Coriolis parameter"},
    {"--g", "g", "gravity"},
    {"--H,--mean-depth", "H", "mean depth"},
    {"--dt", "dt", "time step"},
    {"--tf,--t-final", "tf", "final time"},
    {"--quadrature", "quadrature", "exact | inexact"},
    {"--apv-tau,--apv_tau", "apv_tau", "anticipated potential vorticity time scale"},
    {"--depth-floor,--depth_floor", "depth_floor", "abort when the depth falls below this"},
    {"--out", "out", "output directory"},
    {"--record-interval,--record_interval", "record_interval", "steps between conservation records"},
    {"--snapshot-interval,--snapshot_interval", "snapshot_interval", "time between field snapshots"},
    {"--snapshot-times,--snapshot_times", "snapshot_times", "comma-separated snapshot times"},
    {"--sample-resolution,--sample_resolution", "sample_resolution", "samples per direction in snapshots"},
    {"--nx-list,--nx_list", "nx_list", "comma-separated mesh sizes for sweeps"},
    {"--p-list,--p_list", "p_list", "comma-separated degrees for convergence sweeps"},
    {"--spectral-p-list,--spectral_p_list", "spectral_p_list", "comma-separated degrees for the spectral sweep"},
    {"--dt-sweep,--dt_sweep", "dt_sweep", "comma-separated time steps; one run each"},
    {"--seed", "seed", "seed for the randomized checks"},
};

struct Command {
  CLI::App* app;
  std::optional<mswe::CaseKind> kind;  // forced case, if any
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_flags(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  for (const Flag& f : kFlags) {
    const std::string key = f.key;
    cmd.app->add_option_function<std::string>(
        f.names, [&cmd, key](const std::string& v) { cmd.values[key] = v; }, f.help);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed mimetic spectral element solver for the rotating shallow water equations"};
  app.require_subcommand(1);

  std::vector<Command> cmds;
  cmds.reserve(6);
  auto add = [&](const char* name, const char* help, std::optional<mswe::CaseKind> kind) -> Command& {
    cmds.push_back({app.add_subcommand(name, help), kind, {}, {}});
    add_flags(cmds.back());
    return cmds.back();
  };
  add("run", "run the case named by --case or the config file", std::nullopt);
  add("converge", "diagnostic convergence sweeps in mesh size and degree", mswe::CaseKind::convergence);
  add("balance", "linearized geostrophic balance", mswe::CaseKind::balance);
  add("conserve", "vortex pair conservation run (optionally over --dt-sweep)", mswe::CaseKind::vortex_pair);
  add("orography", "shear flow over orography with anticipated potential vorticity", mswe::CaseKind::orography);
  Command& check = add("check", "integer and algebraic invariant suite", std::nullopt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    for (Command& c : cmds) {
      if (!c.app->parsed()) continue;
      if (&c == &check) {
        std::uint64_t seed = 1;
        if (auto it = c.values.find("seed"); it != c.values.end()) {
          mswe::RunConfig tmp;
          tmp.set("seed", it->second);
          seed = tmp.seed;
        }
        bool ok = true;
        for (const auto& r : mswe::invariant_suite(seed)) {
          std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
          ok = ok && r.passed;
        }
        return ok ? 0 : 2;
      }
      std::map<std::string, std::string> file;
      if (!c.config_path.empty()) file = mswe::read_config_file(c.config_path);
      auto overrides = c.values;
      if (c.kind) {
        if (auto it = file.find("case"); it != file.end() && mswe::parse_case(it->second) != *c.kind)
          throw mswe::UsageError("config file case '" + it->second + "' conflicts with subcommand " + c.app->get_name());
        if (overrides.count("case") && mswe::parse_case(overrides["case"]) != *c.kind)
          throw mswe::UsageError("--case conflicts with subcommand " + c.app->get_name());
        overrides["case"] = mswe::case_name(*c.kind);
      }
      const mswe::RunConfig cfg = mswe::build_config(c.kind.value_or(mswe::CaseKind::custom), file, overrides);
      const int code = mswe::run_case(cfg, std::cout);
      std::cout << "outputs in " << cfg.output_dir.string() << '\n';
      return code;
    }
  } catch (const mswe::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const mswe::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const mswe::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
