// autothermo: run thermodynamic scenarios, list presets, verify acceptance criteria.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "autothermo/acceptance.hpp"
#include "autothermo/errors.hpp"
#include "autothermo/kernels.hpp"
#include "autothermo/scenarios.hpp"

namespace at = autothermo;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitPhysics = 2;
constexpr int kExitIo = 3;

int exit_code(const at::Error& e) {
  switch (e.error_class()) {
    case at::ErrorClass::usage: return kExitUsage;
    case at::ErrorClass::io: return kExitIo;
    case at::ErrorClass::physics:
    case at::ErrorClass::internal: return kExitPhysics;
  }
  return kExitPhysics;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw at::IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct RunArgs {
  std::string preset, config, out, isa;
  std::optional<std::size_t> samples;
  std::optional<double> dt, tmax, alpha;
  bool gnuplot = false;
};

int do_run(const RunArgs& args) {
  if (args.preset.empty() && args.config.empty()) {
    throw at::BadSpec("run needs --preset or --config");
  }
  std::string text = args.config.empty() ? std::string() : read_file(args.config);
  // The preset is applied before every other key regardless of position, so
  // appending keeps the file's line numbers intact.
  if (!args.preset.empty()) text += "\npreset=" + args.preset + "\n";
  at::ScenarioConfig cfg = at::parse_config(text);
  if (args.samples) cfg.samples = *args.samples;
  if (args.dt) cfg.dt = *args.dt;
  if (args.tmax) cfg.t_max = *args.tmax;
  if (args.alpha) {
    if (cfg.initial.factors.size() < 2 || cfg.subsystem_count() < 2) {
      throw at::BadSpec("--alpha needs a two-subsystem scenario");
    }
    cfg.initial.factors[1] = at::parse_factor("coherent:" + at::format_number(*args.alpha));
    cfg.truncation_b = 0;
  }
  if (!args.out.empty()) cfg.out_path = args.out;
  if (args.gnuplot) cfg.gnuplot = true;
  if (cfg.gnuplot && cfg.out_path.empty()) throw at::BadSpec("--gnuplot needs --out");

  const at::ScenarioResult result = at::run_scenario(cfg);
  if (cfg.out_path.empty()) {
    at::write_csv(result, std::cout);
  } else {
    at::emit_csv(result, cfg.out_path);
    std::cerr << "wrote " << result.table.times.size() << " rows to " << cfg.out_path << '\n';
  }
  if (cfg.gnuplot) {
    const std::string gp = cfg.out_path + ".gp";
    std::ofstream f(gp);
    if (!f) throw at::IoError("cannot open '" + gp + "' for writing");
    f << at::gnuplot_script(result, cfg.out_path);
    if (!f) throw at::IoError("write to '" + gp + "' failed");
    std::cerr << "wrote " << gp << '\n';
  }
  return 0;
}

void apply_isa(const std::string& isa) {
  if (isa.empty() || isa == "auto") return;
  if (isa == "scalar") {
    at::kernels::set_isa(at::kernels::Isa::scalar);
  } else if (isa == "avx2") {
    at::kernels::set_isa(at::kernels::Isa::avx2);
  } else {
    throw at::BadSpec("--isa must be auto, scalar or avx2");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamics of autonomous quantum systems: scenarios and verification"};
  app.require_subcommand(1);
  app.footer(at::config_help());
  std::string isa;
  app.add_option("--isa", isa, "kernel variant: auto, scalar or avx2 (also AUTOTHERMO_SIMD)");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run a scenario and emit its CSV table");
  run->add_option("--preset", run_args.preset, "named scenario (see list-presets)");
  run->add_option("--config", run_args.config, "key=value configuration file");
  run->add_option("--out", run_args.out, "CSV output path (default stdout)");
  run->add_option("--samples", run_args.samples, "sampling intervals");
  run->add_option("--dt", run_args.dt, "integrator step bound (physical time)");
  run->add_option("--tmax", run_args.tmax, "window end in the natural time variable");
  run->add_option("--alpha", run_args.alpha, "coherent amplitude of B (jc-coherent-drive)");
  run->add_flag("--gnuplot", run_args.gnuplot, "also write OUT.gp plotting U, Q and W");

  auto* list = app.add_subcommand("list-presets", "list named scenarios");

  bool slow = false;
  std::vector<int> criteria;
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_flag("--slow", slow, "include the alpha = 30 coherent-drive run");
  verify->add_option("--criterion", criteria, "criterion number (repeatable)")
      ->check(CLI::Range(1, 11));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    apply_isa(isa);
    if (*list) {
      for (const auto& p : at::preset_catalog()) {
        std::cout << p.name << "\n    " << p.summary << '\n';
      }
      return 0;
    }
    if (*run) return do_run(run_args);
    if (*verify) {
      at::acceptance::Options opts;
      opts.slow = slow;
      opts.criteria.insert(criteria.begin(), criteria.end());
      const auto checks = at::acceptance::run(opts, std::cout);
      std::size_t failed = 0, skipped = 0;
      for (const auto& c : checks) {
        failed += c.passed ? 0 : 1;
        skipped += c.skipped ? 1 : 0;
      }
      std::cout << checks.size() - failed - skipped << " passed, " << failed << " failed, "
                << skipped << " skipped\n";
      return at::acceptance::exit_status(checks) == 0 ? 0 : kExitPhysics;
    }
  } catch (const at::Error& e) {
    std::cerr << "autothermo: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "autothermo: internal error: " << e.what() << '\n';
    return kExitPhysics;
  }
  return 0;
}
