#include <CLI11.hpp>
#include <iostream>

#include "swsim/commands.hpp"
#include "swsim/decoder.hpp"
#include "swsim/oracle.hpp"
#include "swsim/treecode.hpp"
#include "swsim/verify.hpp"

namespace {

// Decoder-vs-exhaustive sweep over seeded instances; kept off the main
// help because it exists for debugging regressions, not for users.
int run_oracle_sweep(uint64_t seed, int instances, int depth, double rate) {
  using namespace swsim;
  Rng rng = Rng::from_seed(seed);
  int mismatches = 0;
  for (int i = 0; i < instances; ++i) {
    JointSource s = random_source(rng, 2, 3);
    double bias = -std::log2(s.conditional().maxCoeff()) - 0.05 - 0.2 * rng.next_double();
    std::vector<int> u(static_cast<size_t>(depth)), v(static_cast<size_t>(depth));
    for (int t = 0; t < depth; ++t) {
      auto [uu, vv] = s.sample(rng);
      u[static_cast<size_t>(t)] = uu;
      v[static_cast<size_t>(t)] = vv;
    }
    TreeCode code(Seed128{rng.next_u64(), rng.next_u64()}, s.alphabet_u(), TreeCode::Si{rate});
    auto rx = encode_stream_bits(code, u);
    BranchScores scores(s, bias);
    StackDecoder dec(code, scores, DecoderConfig{});
    bool ok = true;
    for (int t = 0; t < depth && ok; ++t) {
      ok = dec.step_bits(rx[static_cast<size_t>(t)], v[static_cast<size_t>(t)]);
    }
    OracleResult best = best_path_exhaustive(code, scores, rx, v, depth);
    if (!ok || dec.estimate() != best.path) {
      ++mismatches;
      std::cout << "instance " << i << ": MISMATCH\n";
    }
  }
  std::cout << instances << " instances, " << mismatches << " mismatches\n";
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming source coding with decoder side information: "
               "exponent calculators and a stack-decoder Monte-Carlo harness"};
  app.require_subcommand(1);

  std::string config_path;
  swsim::CommandOverrides ov;
  uint64_t seed_flag = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* sub, bool workers) {
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", [&](const std::vector<std::string>& vals) {
      ov.out_dir = vals.front();
      return true;
    }, "output directory (overrides config)");
    sub->add_option("--seed", [&](const std::vector<std::string>& vals) {
      seed_flag = std::stoull(vals.front());
      seed_set = true;
      return true;
    }, "master seed (overrides config)");
    if (workers) {
      sub->add_option("--workers", ov.workers, "parallel trial workers (default: cores)");
    }
  };

  CLI::App* exp = app.add_subcommand("exponents", "write the rho-grid function table and report");
  add_common(exp, false);

  CLI::App* sim = app.add_subcommand("simulate", "run Monte-Carlo trials and write artifacts");
  add_common(sim, true);

  swsim::VerifyOptions vopt;
  CLI::App* ver = app.add_subcommand("verify", "run the randomized property suites");
  ver->add_option("--seed", vopt.seed, "suite seed");

  uint64_t osweep_seed = 1;
  int osweep_instances = 200;
  int osweep_depth = 12;
  double osweep_rate = 1.0;
  CLI::App* osweep = app.add_subcommand("oracle", "decoder-vs-exhaustive sweep");
  osweep->group("");  // hidden
  osweep->add_option("--seed", osweep_seed);
  osweep->add_option("--instances", osweep_instances);
  osweep->add_option("--depth", osweep_depth);
  osweep->add_option("--rate", osweep_rate);

  CLI11_PARSE(app, argc, argv);

  if (seed_set) ov.seed = seed_flag;

  if (exp->parsed()) return swsim::cmd_exponents(config_path, ov, std::cout, std::cerr);
  if (sim->parsed()) return swsim::cmd_simulate(config_path, ov, std::cout, std::cerr);
  if (ver->parsed()) return swsim::cmd_verify(vopt, std::cout);
  if (osweep->parsed()) return run_oracle_sweep(osweep_seed, osweep_instances, osweep_depth, osweep_rate);
  return 0;
}
