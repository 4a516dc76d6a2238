#include "swsim/commands.hpp"

#include <ostream>

#include "swsim/sim.hpp"

namespace swsim {

namespace {

RunConfig load_with_overrides(const std::string& path, const CommandOverrides& ov) {
  RunConfig cfg = load_config_file(path);
  if (ov.seed) cfg.master_seed = *ov.seed;
  if (ov.out_dir) cfg.output_dir = *ov.out_dir;
  return cfg;
}

}  // namespace

int cmd_exponents(const std::string& config_path, const CommandOverrides& ov, std::ostream& out,
                  std::ostream& err) {
  try {
    RunConfig cfg = load_with_overrides(config_path, ov);
    write_exponent_artifacts(cfg, cfg.output_dir);
    out << "wrote " << cfg.output_dir << "/exponents.csv and exponents.json\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_simulate(const std::string& config_path, const CommandOverrides& ov, std::ostream& out,
                 std::ostream& err) {
  try {
    RunConfig cfg = load_with_overrides(config_path, ov);
    SimReport report = simulate(cfg, ov.workers);
    write_artifacts(report, cfg, cfg.output_dir);
    out << "trials " << report.trials_observed << "/" << report.trials_total << " observed, "
        << report.cap_abort_count << " cap-aborted\n";
    if (report.delay_fit) {
      out << "fitted delay exponent " << report.delay_fit->exponent << " (se "
          << report.delay_fit->std_error << ")\n";
    }
    if (report.pareto_fit) {
      out << "fitted pareto exponent " << report.pareto_fit->exponent << " (se "
          << report.pareto_fit->std_error << ")\n";
    }
    out << "wrote " << cfg.output_dir << "/pe.csv, comp.csv, summary.json\n";
    if (report.trials_total > 0 && report.cap_abort_count == report.trials_total) {
      err << "degenerate run: every trial hit a computation cap\n";
      return kExitDegenerate;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_verify(const VerifyOptions& options, std::ostream& out) {
  auto results = run_verify_suites(options, out);
  return all_passed(results) ? kExitOk : 1;
}

}  // namespace swsim
