#include "swsim/verify.hpp"

#include <cmath>
#include <ostream>

#include "swsim/decoder.hpp"
#include "swsim/exponents.hpp"
#include "swsim/oracle.hpp"
#include "swsim/treecode.hpp"

namespace swsim {

namespace {

Eigen::VectorXd random_simplex(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double e = -std::log(1.0 - rng.next_double());  // Exp(1)
    v(i) = e;
    sum += e;
  }
  v /= sum;
  // normalize the largest entry so the total is 1 to the last bit
  int imax = 0;
  v.maxCoeff(&imax);
  v(imax) += 1.0 - v.sum();
  return v;
}

int random_size(Rng& rng, int max_n) {
  return 2 + static_cast<int>(rng.next_double() * (max_n - 1));
}

}  // namespace

JointSource random_source(Rng& rng, int max_u, int max_v) {
  int nu = random_size(rng, max_u);
  int nv = random_size(rng, max_v);
  Eigen::VectorXd flat = random_simplex(rng, nu * nv);
  Eigen::MatrixXd pmf(nu, nv);
  for (int u = 0; u < nu; ++u)
    for (int v = 0; v < nv; ++v) pmf(u, v) = flat(u * nv + v);
  return JointSource(pmf);
}

Channel random_channel(Rng& rng, int max_x, int max_y) {
  int nx = random_size(rng, max_x);
  int ny = random_size(rng, max_y);
  Eigen::MatrixXd w(nx, ny);
  for (int x = 0; x < nx; ++x) w.row(x) = random_simplex(rng, ny).transpose();
  return Channel(w, random_simplex(rng, nx));
}

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options, std::ostream& out) {
  std::vector<SuiteResult> results;
  Rng rng = Rng::from_seed(options.seed);

  {
    // d/drho at 0 of e_si is H(U|V); of e0 is the mutual information.
    // One-sided second-order difference, both functions vanish at 0.
    SuiteResult sr{"slope-identities", 0, 0};
    const double h = 1e-5;
    Rng local = rng.split(1);
    for (int i = 0; i < options.slope_models; ++i) {
      JointSource s = random_source(local);
      double slope = (4.0 * e_si(s, h) - e_si(s, 2 * h)) / (2.0 * h);
      ++sr.checks;
      if (std::abs(slope - conditional_entropy(s)) > 1e-4) ++sr.violations;
      Channel ch = random_channel(local);
      double cslope = (4.0 * e0(ch, h) - e0(ch, 2 * h)) / (2.0 * h);
      ++sr.checks;
      if (std::abs(cslope - mutual_information(ch)) > 1e-4) ++sr.violations;
    }
    results.push_back(sr);
  }

  {
    // e_si >= f_si + g_si and e0 <= f + g on [0,1].
    SuiteResult sr{"moment-inequalities", 0, 0};
    Rng local = rng.split(2);
    for (int i = 0; i < options.jensen_draws; ++i) {
      double gamma = local.next_double();
      JointSource s = random_source(local);
      ++sr.checks;
      if (e_si(s, gamma) - f_si(s, gamma) - g_si(s, gamma) < -1e-9) ++sr.violations;
      Channel ch = random_channel(local);
      ++sr.checks;
      if (f_ch(ch, gamma) + g_ch(ch, gamma) - e0(ch, gamma) < -1e-9) ++sr.violations;
    }
    results.push_back(sr);
  }

  {
    // Whenever the cutoff condition holds, the bias interval is non-empty.
    SuiteResult sr{"bias-interval-nonempty", 0, 0};
    Rng local = rng.split(3);
    for (int i = 0; i < options.interval_draws; ++i) {
      double gamma = 0.05 + 0.95 * local.next_double();
      JointSource s = random_source(local);
      double rate = e_si(s, gamma) / gamma + 0.01 + 0.3 * local.next_double();
      BiasInterval iv = bias_range_comp_si(s, rate, gamma);
      ++sr.checks;
      if (!iv.feasible || !iv.nonempty()) ++sr.violations;

      Channel ch = random_channel(local);
      double ech = e0(ch, gamma);
      if (ech > 1e-6) {
        int lambda = static_cast<int>(std::ceil(e_si(s, gamma) / ech)) + 1;
        BiasInterval jv = bias_range_comp_jsc(s, ch, lambda, gamma);
        ++sr.checks;
        if (!jv.feasible || !jv.nonempty()) ++sr.violations;
      }
    }
    results.push_back(sr);
  }

  {
    // The default bias sits strictly inside the computation interval and
    // at the error cap for feasible, non-degenerate instances.
    SuiteResult sr{"default-bias-placement", 0, 0};
    Rng local = rng.split(4);
    for (int i = 0; i < options.default_bias_draws; ++i) {
      double gamma = 0.05 + 0.95 * local.next_double();
      JointSource s = random_source(local);
      double rate = e_si(s, gamma) / gamma + 0.01 + 0.3 * local.next_double();
      double gstar = default_bias_si(s, gamma);
      BiasInterval iv = bias_range_comp_si(s, rate, gamma);
      auto cap = bias_cap_error_si(s, gamma);
      ++sr.checks;
      if (!(iv.lower < gstar && gstar < iv.upper && gstar <= *cap + 1e-12)) ++sr.violations;
    }
    results.push_back(sr);
  }

  {
    // Stack decoder vs exhaustive search with strictly negative branch
    // scores: the first full-depth emission must be the metric argmax.
    SuiteResult sr{"oracle-equivalence", 0, 0};
    Rng local = rng.split(5);
    for (int i = 0; i < options.oracle_instances; ++i) {
      JointSource s = random_source(local, 2, 3);
      double qmax = s.conditional().maxCoeff();
      double bias = -std::log2(qmax) - 0.05 - 0.2 * local.next_double();
      int n = options.oracle_depth;
      std::vector<int> u(static_cast<size_t>(n)), v(static_cast<size_t>(n));
      for (int t = 0; t < n; ++t) {
        auto [uu, vv] = s.sample(local);
        u[static_cast<size_t>(t)] = uu;
        v[static_cast<size_t>(t)] = vv;
      }
      TreeCode code(Seed128{local.next_u64(), local.next_u64()}, s.alphabet_u(), TreeCode::Si{1.0});
      auto rx = encode_stream_bits(code, u);
      BranchScores truth_scores(s, bias);
      BranchScores decode_scores = truth_scores;
      if (options.fault == VerifyOptions::Fault::NegatedLogScore) {
        Eigen::MatrixXd log2q = (s.conditional().array().log() / std::log(2.0)).matrix();
        Eigen::MatrixXd negated =
            Eigen::MatrixXd::Constant(log2q.rows(), log2q.cols(), bias) - log2q;
        decode_scores = BranchScores(negated);
      }
      StackDecoder dec(code, decode_scores, DecoderConfig{});
      bool ok = true;
      for (int t = 0; t < n; ++t) {
        if (!dec.step_bits(rx[static_cast<size_t>(t)], v[static_cast<size_t>(t)])) {
          ok = false;
          break;
        }
      }
      OracleResult best = best_path_exhaustive(code, truth_scores, rx, v, n);
      ++sr.checks;
      if (!ok || dec.estimate() != best.path) ++sr.violations;
    }
    results.push_back(sr);
  }

  for (const auto& sr : results) {
    out << sr.name << ": " << (sr.violations == 0 ? "pass" : "FAIL") << " (" << sr.checks
        << " checks, " << sr.violations << " violations)\n";
  }
  return results;
}

bool all_passed(const std::vector<SuiteResult>& results) {
  for (const auto& r : results) {
    if (r.violations > 0) return false;
  }
  return true;
}

}  // namespace swsim
