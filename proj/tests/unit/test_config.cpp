#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "swsim/commands.hpp"
#include "swsim/config.hpp"
#include "swsim/exponents.hpp"

using namespace swsim;

namespace {

const char* kGoodConfig = R"({
  "mode": "si",
  "source": { "pmf": [[0.45, 0.05], [0.05, 0.45]] },
  "rate": 0.7,
  "bias": 0.7,
  "seeds": { "master": 99 },
  "trials": 3,
  "stream_len": 300,
  "delays": [2, 4, 8],
  "caps": { "max_pops_per_step": 50000, "max_stack": 100000 },
  "fit": { "delay_window": [2, 8], "comp_window": [2, 4096] },
  "output_dir": "unused"
})";

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

}  // namespace

TEST_CASE("a complete config parses") {
  RunConfig cfg = parse_config_text(kGoodConfig);
  CHECK(cfg.mode == Mode::Si);
  CHECK(cfg.rate == doctest::Approx(0.7));
  CHECK(cfg.pmf(0, 0) == doctest::Approx(0.45));
  CHECK(cfg.master_seed == 99);
  CHECK(cfg.trials == 3);
  CHECK(cfg.delays == std::vector<int>{2, 4, 8});
  CHECK(cfg.caps.max_pops_per_step == 50000);
  CHECK(cfg.fit.comp_hi == doctest::Approx(4096));
  validate_for_simulate(cfg);
}

TEST_CASE("defaults fill in when optional fields are absent") {
  RunConfig cfg = parse_config_text(R"({
    "mode": "si",
    "source": { "pmf": [[0.5, 0.5]] },
    "rate": 1.0
  })");
  CHECK(cfg.delays.size() == 40);
  CHECK(cfg.caps.max_pops_per_step == 1000000);
  CHECK(cfg.caps.max_stack == 10000000);
  CHECK(cfg.fit.delay_lo == doctest::Approx(8));
  CHECK(cfg.fit.delay_hi == doctest::Approx(40));
  CHECK(cfg.fit.comp_hi == doctest::Approx(16384));
  CHECK_THROWS_AS(validate_for_simulate(cfg), ConfigError);  // no bias/trials
}

TEST_CASE("unknown fields are rejected by name") {
  try {
    parse_config_text(R"({
      "mode": "si",
      "source": { "pmf": [[1.0]] },
      "rate": 1.0,
      "biass": 0.7
    })");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("biass") != std::string::npos);
  }
}

TEST_CASE("mode-inconsistent fields are rejected") {
  CHECK_THROWS_AS(parse_config_text(R"({
    "mode": "si",
    "source": { "pmf": [[1.0]] },
    "rate": 1.0,
    "lambda": 2
  })"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({
    "mode": "jsc",
    "source": { "pmf": [[1.0]] },
    "lambda": 1
  })"),
                  ConfigError);  // jsc needs a channel
}

TEST_CASE("bias strings parse and resolve") {
  RunConfig cfg = parse_config_text(R"({
    "mode": "si",
    "source": { "pmf": [[0.45, 0.05], [0.05, 0.45]] },
    "rate": 0.7,
    "bias": "auto-comp:1"
  })");
  JointSource s = make_source(cfg);
  CHECK(std::abs(resolve_bias(cfg, s, nullptr) - default_bias_si(s, 1.0)) < 1e-15);

  cfg = parse_config_text(R"({
    "mode": "si",
    "source": { "pmf": [[0.45, 0.05], [0.05, 0.45]] },
    "rate": 0.7,
    "bias": "auto-error:0.5"
  })");
  JointSource s2 = make_source(cfg);
  CHECK(std::abs(resolve_bias(cfg, s2, nullptr) - *bias_cap_error_si(s2, 0.5)) < 1e-15);

  CHECK_THROWS_AS(parse_config_text(R"({
    "mode": "si",
    "source": { "pmf": [[1.0]] },
    "rate": 1.0,
    "bias": "auto-error:0"
  })"),
                  ConfigError);
}

TEST_CASE("pmf validation reaches the config layer with a diagnostic") {
  RunConfig cfg = parse_config_text(R"({
    "mode": "si",
    "source": { "pmf": [[0.6, 0.1], [0.1, 0.1]] },
    "rate": 1.0
  })");
  try {
    make_source(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("pmf") != std::string::npos);
  }
}

TEST_CASE("canonical serialization round-trips bit-exactly") {
  RunConfig cfg = parse_config_text(kGoodConfig);
  std::string canon = canonical_config_json(cfg);
  // Feed the canonical form back through the parser.
  RunConfig cfg2 = parse_config_text(canon);
  CHECK(canonical_config_json(cfg2) == canon);
  CHECK(cfg2.pmf == cfg.pmf);
  CHECK(config_hash(cfg2) == config_hash(cfg));

  // Hash ignores the output directory but tracks the seed.
  RunConfig moved = cfg;
  moved.output_dir = "elsewhere";
  CHECK(config_hash(moved) == config_hash(cfg));
  RunConfig reseeded = cfg;
  reseeded.master_seed = 100;
  CHECK(config_hash(reseeded) != config_hash(cfg));
}

TEST_CASE("jsc config parses") {
  RunConfig cfg = parse_config_text(R"({
    "mode": "jsc",
    "source": { "pmf": [[0.45, 0.05], [0.05, 0.45]] },
    "lambda": 2,
    "channel": { "W": [[0.95, 0.05], [0.05, 0.95]], "beta": [0.5, 0.5] },
    "bias": "auto-comp:1",
    "seeds": { "master": 5 },
    "trials": 2,
    "stream_len": 200
  })");
  CHECK(cfg.mode == Mode::Jsc);
  CHECK(cfg.lambda == 2);
  auto ch = make_channel(cfg);
  REQUIRE(ch.has_value());
  CHECK(ch->alphabet_y() == 2);
  JointSource s = make_source(cfg);
  double g = resolve_bias(cfg, s, &*ch);
  CHECK(std::abs(g - default_bias_jsc(s, *ch, 2, 1.0)) < 1e-15);
}

TEST_CASE("exponents command writes artifacts and fails cleanly") {
  namespace fs = std::filesystem;
  auto good = write_temp("swsim_cfg_good.json", kGoodConfig);
  fs::path out = fs::temp_directory_path() / "swsim_cmd_exp";
  fs::remove_all(out);
  std::ostringstream log, err;
  CommandOverrides ov;
  ov.out_dir = out.string();
  CHECK(cmd_exponents(good.string(), ov, log, err) == kExitOk);
  CHECK(fs::exists(out / "exponents.csv"));
  CHECK(fs::exists(out / "exponents.json"));

  auto bad = write_temp("swsim_cfg_bad.json", R"({
    "mode": "si",
    "source": { "pmf": [[0.6, 0.1], [0.1, 0.1]] },
    "rate": 1.0
  })");
  std::ostringstream err2;
  CHECK(cmd_exponents(bad.string(), ov, log, err2) == kExitConfig);
  CHECK(err2.str().find("pmf") != std::string::npos);
}

TEST_CASE("simulate command exit codes") {
  namespace fs = std::filesystem;
  std::ostringstream log, err;
  CommandOverrides ov;

  // trials = 0: empty artifacts, success.
  auto zero = write_temp("swsim_cfg_zero.json", R"({
    "mode": "si",
    "source": { "pmf": [[0.45, 0.05], [0.05, 0.45]] },
    "rate": 0.7,
    "bias": 0.7,
    "seeds": { "master": 4 },
    "trials": 0,
    "stream_len": 200
  })");
  fs::path out = fs::temp_directory_path() / "swsim_cmd_zero";
  fs::remove_all(out);
  ov.out_dir = out.string();
  CHECK(cmd_simulate(zero.string(), ov, log, err) == kExitOk);
  CHECK(fs::exists(out / "pe.csv"));
  CHECK(fs::exists(out / "comp.csv"));
  CHECK(fs::exists(out / "summary.json"));

  // Impossible caps: every trial aborts, degenerate-run exit.
  auto capped = write_temp("swsim_cfg_capped.json", R"({
    "mode": "si",
    "source": { "pmf": [[0.35, 0.15], [0.15, 0.35]] },
    "rate": 0.6,
    "bias": 1.2,
    "seeds": { "master": 4 },
    "trials": 3,
    "stream_len": 400,
    "caps": { "max_pops_per_step": 2, "max_stack": 10000000 }
  })");
  fs::path out2 = fs::temp_directory_path() / "swsim_cmd_capped";
  fs::remove_all(out2);
  ov.out_dir = out2.string();
  CHECK(cmd_simulate(capped.string(), ov, log, err) == kExitDegenerate);
}
