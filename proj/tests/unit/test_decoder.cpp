#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "swsim/decoder.hpp"
#include "swsim/exponents.hpp"
#include "swsim/oracle.hpp"
#include "swsim/verify.hpp"

using namespace swsim;
using namespace testutil;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<std::vector<int>, std::vector<int>> sample_streams(const JointSource& s, int n,
                                                             Rng& rng) {
  std::vector<int> u(static_cast<size_t>(n)), v(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    auto [uu, vv] = s.sample(rng);
    u[static_cast<size_t>(t)] = uu;
    v[static_cast<size_t>(t)] = vv;
  }
  return {u, v};
}

}  // namespace

TEST_CASE("branch metric values") {
  Eigen::MatrixXd pmf(2, 2);
  pmf << 0.5, 0.0, 0.0, 0.5;
  JointSource det(pmf);
  CHECK(branch_metric_si(det, 0, 0, 0.0) == doctest::Approx(0.0));  // Q(u|v) = 1, G = 0
  CHECK(branch_metric_si(det, 1, 0, 0.3) == -kInf);                 // impossible symbol

  Eigen::MatrixXd half(2, 2);
  half << 0.25, 0.25, 0.25, 0.25;
  JointSource uni(half);
  CHECK(branch_metric_si(uni, 0, 1, 0.7) == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("joint source-channel branch metric") {
  JointSource s = bsc_pair_source(0.1);
  Channel noiseless = noiseless_binary_channel();
  int x[2] = {0, 1}, y[2] = {0, 1};
  // Channel term per use is log2(1 / 0.5) = 1 for matching symbols.
  CHECK(branch_metric_jsc(s, noiseless, 0, 0, x, y, 2, 0.0) ==
        doctest::Approx(std::log2(0.9) + 2.0).epsilon(1e-12));
  int ybad[2] = {1, 1};
  CHECK(branch_metric_jsc(s, noiseless, 0, 0, x, ybad, 2, 0.0) == -kInf);

  Channel useless = useless_channel();
  int xu[1] = {0}, yu[1] = {1};
  CHECK(branch_metric_jsc(s, useless, 1, 0, xu, yu, 1, 0.4) ==
        doctest::Approx(branch_metric_si(s, 1, 0, 0.4)).epsilon(1e-12));
}

TEST_CASE("degenerate single-symbol alphabet decodes with one pop per step") {
  Eigen::MatrixXd pmf(1, 1);
  pmf << 1.0;
  JointSource s(pmf);
  TreeCode code(Seed128{3, 4}, 1, TreeCode::Si{1.0});
  BranchScores scores(s, 0.0);
  Rng rng = Rng::from_seed(1);
  std::vector<int> u(32, 0), v(32, 0);
  DecodeResult r = run(s, u, v, code, nullptr, scores, DecoderConfig{}, rng);
  CHECK(r.status == DecodeStatus::Completed);
  for (uint32_t pops : r.ledger.pops_per_step) CHECK(pops == 1);
  for (size_t m = 0; m < u.size(); ++m) CHECK(r.agree_len[m] == m + 1);
  CHECK(r.ledger.pops_total == 32);
}

TEST_CASE("a zero-bit step keeps every plausible child") {
  JointSource s = bsc_pair_source(0.1);
  TreeCode code(Seed128{9, 9}, 2, TreeCode::Si{0.5});  // t = 1 carries 0 bits
  BranchScores scores(s, 0.7);
  StackDecoder dec(code, scores, DecoderConfig{});
  CHECK(dec.step_bits(BranchBits{0, 0}, 0));
  auto paths = dec.stack_paths();
  CHECK(paths.size() == 2);  // both symbols have Q(u|v) > 0
}

TEST_CASE("stack holds no duplicate paths and only label-consistent ones") {
  JointSource s = bsc_pair_source(0.1);
  Rng rng = Rng::from_seed(17);
  auto [u, v] = sample_streams(s, 40, rng);
  TreeCode code(Seed128{21, 22}, 2, TreeCode::Si{0.7});
  auto rx = encode_stream_bits(code, u);
  BranchScores scores(s, 0.7);
  StackDecoder dec(code, scores, DecoderConfig{});
  for (int t = 0; t < 40; ++t) {
    REQUIRE(dec.step_bits(rx[static_cast<size_t>(t)], v[static_cast<size_t>(t)]));
  }
  auto paths = dec.stack_paths();
  std::set<std::vector<int>> unique(paths.begin(), paths.end());
  CHECK(unique.size() == paths.size());
  for (const auto& p : paths) {
    PathHash ph = code.root();
    for (size_t i = 0; i < p.size(); ++i) {
      ph = code.extend(ph, p[i]);
      CHECK(code.branch_bits(ph, static_cast<int64_t>(i + 1)) == rx[i]);
    }
  }
}

TEST_CASE("popped metrics are non-increasing when branch scores are non-positive") {
  JointSource s = bsc_pair_source(0.1);
  double bias = -std::log2(s.conditional().maxCoeff());  // scores <= 0
  Rng rng = Rng::from_seed(23);
  auto [u, v] = sample_streams(s, 60, rng);
  TreeCode code(Seed128{31, 32}, 2, TreeCode::Si{1.0});
  BranchScores scores(s, bias);
  DecoderConfig cfg;
  cfg.record_pop_metrics = true;
  DecodeResult r = run(s, u, v, code, nullptr, scores, cfg, rng);
  REQUIRE(r.status == DecodeStatus::Completed);
  for (size_t i = 1; i < r.pop_metrics.size(); ++i) {
    CHECK(r.pop_metrics[i] <= r.pop_metrics[i - 1] + 1e-12);
  }
}

TEST_CASE("estimates have the emitted length and replay bit-identically") {
  JointSource s = bsc_pair_source(0.1);
  Rng rng = Rng::from_seed(29);
  auto [u, v] = sample_streams(s, 50, rng);
  TreeCode code(Seed128{41, 42}, 2, TreeCode::Si{0.7});
  BranchScores scores(s, 0.7);
  DecoderConfig cfg;
  cfg.record_estimates = true;
  Rng r1 = Rng::from_seed(0), r2 = Rng::from_seed(0);
  DecodeResult a = run(s, u, v, code, nullptr, scores, cfg, r1);
  DecodeResult b = run(s, u, v, code, nullptr, scores, cfg, r2);
  REQUIRE(a.status == DecodeStatus::Completed);
  for (size_t m = 0; m < a.estimates.size(); ++m) {
    CHECK(a.estimates[m].size() == m + 1);
  }
  CHECK(a.estimates == b.estimates);
  CHECK(a.emitted_metric == b.emitted_metric);
  CHECK(a.ledger.pops_per_step == b.ledger.pops_per_step);

  // agree_len matches a direct prefix comparison of the recorded estimates.
  for (size_t m = 0; m < a.estimates.size(); ++m) {
    uint32_t direct = 0;
    while (direct < a.estimates[m].size() &&
           a.estimates[m][direct] == u[direct]) {
      ++direct;
    }
    CHECK(a.agree_len[m] == direct);
  }
}

TEST_CASE("error indicators are monotone in the allowed delay") {
  JointSource s = bsc_pair_source(0.2);
  Rng rng = Rng::from_seed(37);
  auto [u, v] = sample_streams(s, 80, rng);
  TreeCode code(Seed128{51, 52}, 2, TreeCode::Si{0.7});
  BranchScores scores(s, 0.7);
  DecodeResult r = run(s, u, v, code, nullptr, scores, DecoderConfig{}, rng);
  REQUIRE(r.status == DecodeStatus::Completed);
  for (int64_t m = 20; m <= 80; ++m) {
    uint32_t agree = r.agree_len[static_cast<size_t>(m - 1)];
    for (int d = 1; d < 19; ++d) {
      bool err_d = agree < static_cast<uint32_t>(m - d);
      bool err_next = agree < static_cast<uint32_t>(m - d - 1);
      CHECK((err_next ? err_d : true));  // larger delay never adds an error
    }
  }
}

TEST_CASE("ledger counters are consistent") {
  JointSource s = bsc_pair_source(0.1);
  Rng rng = Rng::from_seed(43);
  auto [u, v] = sample_streams(s, 100, rng);

  // bit mode: visits never exceed |U| per pop
  TreeCode code(Seed128{61, 62}, 2, TreeCode::Si{0.7});
  BranchScores scores(s, 0.7);
  DecodeResult r = run(s, u, v, code, nullptr, scores, DecoderConfig{}, rng);
  REQUIRE(r.status == DecodeStatus::Completed);
  uint64_t total = 0;
  for (uint32_t p : r.ledger.pops_per_step) total += p;
  CHECK(r.ledger.pops_total == total);
  CHECK(r.ledger.visits_total <= 2 * r.ledger.pops_total);

  // symbol mode: every pop scores exactly |U| children
  Channel ch = bsc_channel(0.05);
  TreeCode jcode(Seed128{63, 64}, 2, TreeCode::Jsc{1, ch.input_dist()});
  BranchScores jscores(s, ch, default_bias_jsc(s, ch, 1, 1.0));
  DecodeResult jr = run(s, u, v, jcode, &ch, jscores, DecoderConfig{}, rng);
  if (jr.status == DecodeStatus::Completed) {
    CHECK(jr.ledger.visits_total == 2 * jr.ledger.pops_total);
  }
}

TEST_CASE("cap abort is reported distinctly") {
  JointSource s = bsc_pair_source(0.3);
  Rng rng = Rng::from_seed(47);
  auto [u, v] = sample_streams(s, 200, rng);
  TreeCode code(Seed128{71, 72}, 2, TreeCode::Si{0.6});
  BranchScores scores(s, 0.9);  // bias far above the cap: heavy searching
  DecoderConfig cfg;
  cfg.caps.max_pops_per_step = 4;
  DecodeResult r = run(s, u, v, code, nullptr, scores, cfg, rng);
  REQUIRE(r.status == DecodeStatus::CapAborted);
  CHECK(r.ledger.cap_hit);
  CHECK(r.abort_step >= 1);
  CHECK(r.ledger.pops_per_step.back() == 4);
  CHECK(r.agree_len.size() == static_cast<size_t>(r.abort_step - 1));
}

TEST_CASE("impossible symbols never enter the stack") {
  Eigen::MatrixXd pmf(2, 2);
  pmf << 0.5, 0.25, 0.0, 0.25;  // Q(u=1 | v=0) = 0
  JointSource s(pmf);
  Rng rng = Rng::from_seed(53);
  auto [u, v] = sample_streams(s, 60, rng);
  TreeCode code(Seed128{81, 82}, 2, TreeCode::Si{0.8});
  BranchScores scores(s, 0.5);
  StackDecoder dec(code, scores, DecoderConfig{});
  auto rx = encode_stream_bits(code, u);
  for (int t = 0; t < 60; ++t) {
    REQUIRE(dec.step_bits(rx[static_cast<size_t>(t)], v[static_cast<size_t>(t)]));
    for (const auto& p : dec.stack_paths()) {
      for (size_t i = 0; i < p.size(); ++i) {
        CHECK(s.cond(p[i], v[i]) > 0.0);
      }
    }
  }
}

TEST_CASE("noiseless joint source-channel decode shifts metrics by lambda per step") {
  JointSource s = bsc_pair_source(0.1);
  Channel noiseless = noiseless_binary_channel();
  const int lambda = 1;
  double bias = default_bias_jsc(s, noiseless, lambda, 1.0);
  Rng rng = Rng::from_seed(59);
  auto [u, v] = sample_streams(s, 50, rng);
  TreeCode code(Seed128{91, 92}, 2, TreeCode::Jsc{lambda, noiseless.input_dist()});
  BranchScores scores(s, noiseless, bias);
  DecoderConfig cfg;
  cfg.record_estimates = true;
  DecodeResult r = run(s, u, v, code, &noiseless, scores, cfg, rng);
  REQUIRE(r.status == DecodeStatus::Completed);
  for (size_t m = 0; m < r.estimates.size(); ++m) {
    double plain = 0.0;
    for (size_t i = 0; i <= m; ++i) {
      plain += branch_metric_si(s, r.estimates[m][i], v[i], bias);
    }
    CHECK(std::abs(r.emitted_metric[m] - (plain + lambda * static_cast<double>(m + 1))) <
          1e-9 * static_cast<double>(m + 1));
  }
}
