#include <doctest.h>

#include <fstream>
#include <filesystem>
#include <sstream>

#include "swsim/commands.hpp"
#include "swsim/verify.hpp"

using namespace swsim;

TEST_CASE("the default verify run passes every suite") {
  VerifyOptions opt;
  opt.seed = 77;
  std::ostringstream transcript;
  auto results = run_verify_suites(opt, transcript);
  CHECK(all_passed(results));
  CHECK(results.size() == 5);
  for (const auto& r : results) {
    CHECK(r.checks > 0);
    CHECK(r.violations == 0);
  }
  CHECK(cmd_verify(opt, transcript) == 0);
}

TEST_CASE("a negated log score is caught by the equivalence suite") {
  VerifyOptions opt;
  opt.seed = 77;
  opt.fault = VerifyOptions::Fault::NegatedLogScore;
  std::ostringstream transcript;
  auto results = run_verify_suites(opt, transcript);
  CHECK_FALSE(all_passed(results));
  bool oracle_failed = false;
  for (const auto& r : results) {
    if (r.name == "oracle-equivalence" && r.violations > 0) oracle_failed = true;
  }
  CHECK(oracle_failed);
}

TEST_CASE("the transcript is reproducible for a pinned seed") {
  VerifyOptions opt;
  opt.seed = 123;
  std::ostringstream a, b;
  run_verify_suites(opt, a);
  run_verify_suites(opt, b);
  CHECK(a.str() == b.str());
  CHECK(!a.str().empty());
}

TEST_CASE("independent side information collapses the table columns") {
  // With V independent of U the conditional family equals the marginal
  // family, so the grid columns written by the exponents command agree.
  namespace fs = std::filesystem;
  auto cfg_path = fs::temp_directory_path() / "swsim_cfg_indep.json";
  {
    std::ofstream out(cfg_path);
    out << R"({
      "mode": "si",
      "source": { "pmf": [[0.27, 0.63], [0.03, 0.07]] },
      "rate": 0.5
    })";
  }
  fs::path out_dir = fs::temp_directory_path() / "swsim_exp_indep";
  fs::remove_all(out_dir);
  std::ostringstream log, err;
  CommandOverrides ov;
  ov.out_dir = out_dir.string();
  REQUIRE(cmd_exponents(cfg_path.string(), ov, log, err) == kExitOk);

  std::ifstream in(out_dir / "exponents.csv");
  std::string line;
  std::getline(in, line);  // stamp
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    REQUIRE(cells.size() == 7);
    CHECK(std::abs(cells[1] - cells[4]) < 1e-12);  // e_si vs e_s
    CHECK(std::abs(cells[2] - cells[5]) < 1e-12);  // f_si vs f_s
    CHECK(std::abs(cells[3] - cells[6]) < 1e-12);  // g_si vs g_s
    ++rows;
  }
  CHECK(rows == 101);
}
