#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "swsim/models.hpp"
#include "swsim/rng.hpp"

namespace swsim {

/// Random models for property suites: Dirichlet-flat joint pmfs and
/// channel rows, alphabet sizes drawn from [2, max].
JointSource random_source(Rng& rng, int max_u = 4, int max_v = 4);
Channel random_channel(Rng& rng, int max_x = 4, int max_y = 4);

struct VerifyOptions {
  uint64_t seed = 1;
  int slope_models = 20;
  int jensen_draws = 100;
  int interval_draws = 100;
  int default_bias_draws = 100;
  int oracle_instances = 50;
  int oracle_depth = 10;
  /// Diagnostic fault injection: decode with the sign of the log score
  /// flipped while the reference search keeps the true scores. Used as a
  /// negative control; the equivalence suite must then report violations.
  enum class Fault { None, NegatedLogScore } fault = Fault::None;
};

struct SuiteResult {
  std::string name;
  int checks = 0;
  int violations = 0;
};

/// Runs the bounded randomized suites (slope identities, moment
/// inequalities, bias-interval nonemptiness, default-bias placement,
/// decoder-vs-exhaustive equivalence) and streams one transcript line per
/// suite. Deterministic for a fixed seed.
std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options, std::ostream& out);

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace swsim
