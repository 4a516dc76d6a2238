#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "swsim/models.hpp"
#include "swsim/verify.hpp"

using namespace swsim;

TEST_CASE("construction rejects invalid pmfs") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.2, 0.2, 0.2;  // sums to 1.1
  CHECK_THROWS_AS(JointSource{bad}, std::invalid_argument);

  bad << 0.6, -0.1, 0.3, 0.2;
  CHECK_THROWS_AS(JointSource{bad}, std::invalid_argument);

  bad << 0.5, 0.0, 0.5, 0.0;  // Q(v=1) = 0
  CHECK_THROWS_AS(JointSource{bad}, std::invalid_argument);

  Eigen::MatrixXd w(2, 2);
  w << 0.8, 0.1, 0.1, 0.9;  // row 0 sums to 0.9
  Eigen::VectorXd beta(2);
  beta << 0.5, 0.5;
  CHECK_THROWS_AS(Channel(Eigen::MatrixXd(w), Eigen::VectorXd(beta)), std::invalid_argument);

  w << 0.9, 0.1, 0.1, 0.9;
  Eigen::VectorXd short_beta(1);
  short_beta << 1.0;
  CHECK_THROWS_AS(Channel(Eigen::MatrixXd(w), Eigen::VectorXd(short_beta)), std::invalid_argument);
}

TEST_CASE("conditional entropy matches closed forms") {
  // Deterministic given v: zero entropy.
  Eigen::MatrixXd diag(2, 2);
  diag << 0.5, 0.0, 0.0, 0.5;
  CHECK(conditional_entropy(JointSource(diag)) == doctest::Approx(0.0).epsilon(1e-12));

  // Binary-pair source at eps = 0.1: the binary entropy of eps.
  CHECK(std::abs(conditional_entropy(testutil::bsc_pair_source(0.1)) - testutil::kHb01) < 1e-12);

  // Independent V, U uniform over 4 symbols: H(U|V) = 2 bits.
  Eigen::MatrixXd indep(4, 2);
  for (int u = 0; u < 4; ++u) {
    indep(u, 0) = 0.25 * 0.3;
    indep(u, 1) = 0.25 * 0.7;
  }
  CHECK(std::abs(conditional_entropy(JointSource(indep)) - 2.0) < 1e-12);
}

TEST_CASE("conditional entropy is invariant under index permutations") {
  Rng rng = Rng::from_seed(11);
  for (int i = 0; i < 20; ++i) {
    JointSource s = random_source(rng);
    double h = conditional_entropy(s);
    Eigen::MatrixXd p = s.pmf();
    // reverse both index orders
    Eigen::MatrixXd q = p.rowwise().reverse().colwise().reverse();
    CHECK(std::abs(conditional_entropy(JointSource(q)) - h) < 1e-12);
  }
}

TEST_CASE("mutual information of the symmetric binary channel") {
  CHECK(std::abs(mutual_information(testutil::bsc_channel(0.1)) - testutil::kMutualInfoBsc01) <
        1e-12);
  CHECK(std::abs(mutual_information(testutil::useless_channel())) < 1e-12);
}

TEST_CASE("sampling a deterministic source is deterministic") {
  Eigen::MatrixXd single(1, 1);
  single << 1.0;
  JointSource s(single);
  Rng rng = Rng::from_seed(3);
  for (int i = 0; i < 10; ++i) {
    auto [u, v] = s.sample(rng);
    CHECK(u == 0);
    CHECK(v == 0);
  }

  // Deterministic conditional: u always equals v.
  Eigen::MatrixXd diag(2, 2);
  diag << 0.5, 0.0, 0.0, 0.5;
  JointSource d(diag);
  for (int i = 0; i < 100; ++i) {
    auto [u, v] = d.sample(rng);
    CHECK(u == v);
  }
}

TEST_CASE("pair sampling frequencies converge on the uniform 2x2 pmf") {
  Eigen::MatrixXd uni(2, 2);
  uni << 0.25, 0.25, 0.25, 0.25;
  JointSource s(uni);
  Rng rng = Rng::from_seed(44);
  const int n = 1000000;
  int counts[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    auto [u, v] = s.sample(rng);
    ++counts[u * 2 + v];
  }
  double chi2 = 0.0;
  for (int c = 0; c < 4; ++c) {
    double freq = static_cast<double>(counts[c]) / n;
    CHECK(std::abs(freq - 0.25) < 0.005);
    double expect = n * 0.25;
    chi2 += (counts[c] - expect) * (counts[c] - expect) / expect;
  }
  WARN_MESSAGE(chi2 < testutil::chi2_crit_999(3), "chi-square statistic unusually large: ", chi2);
}

TEST_CASE("sampling replays bit-identically from the same seed") {
  Eigen::MatrixXd uni(2, 2);
  uni << 0.3, 0.2, 0.25, 0.25;
  JointSource s(uni);
  Rng a = Rng::from_seed(5), b = Rng::from_seed(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(s.sample(a) == s.sample(b));
  }
}

TEST_CASE("channel sampling matches the transition law") {
  Channel ident = testutil::noiseless_binary_channel();
  Rng rng = Rng::from_seed(6);
  for (int i = 0; i < 50; ++i) CHECK(ident.sample_output(1, rng) == 1);

  Channel bsc = testutil::bsc_channel(0.1);
  const int n = 1000000;
  int flips = 0;
  for (int i = 0; i < n; ++i) flips += (bsc.sample_output(0, rng) == 1);
  CHECK(std::abs(static_cast<double>(flips) / n - 0.1) < 0.003);

  Rng a = Rng::from_seed(8), b = Rng::from_seed(8);
  for (int i = 0; i < 1000; ++i) CHECK(bsc.sample_output(i % 2, a) == bsc.sample_output(i % 2, b));
}
