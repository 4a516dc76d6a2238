#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "swsim/rng.hpp"

namespace swsim {

struct Seed128 {
  uint64_t hi = 0;
  uint64_t lo = 0;
};

/// Cumulative bit budget floor(t * rate). The rate is recovered as a small
/// rational when one matches the double (config rates are short decimals),
/// so the floors are computed in integer arithmetic and never suffer
/// floating-point edge cases near integer multiples.
class RateSchedule {
 public:
  explicit RateSchedule(double rate);

  double rate() const { return rate_; }
  int64_t cumulative(int64_t t) const;
  int bits_at(int64_t t) const {
    return static_cast<int>(cumulative(t) - cumulative(t - 1));
  }

 private:
  double rate_ = 0.0;
  int64_t num_ = 0;
  int64_t den_ = 1;
  bool exact_ = false;
};

/// Incremental keyed hash of a path from the root; extending by one symbol
/// is O(1). Two lanes keep accidental collisions out of reach for any
/// simulation-scale number of nodes.
struct PathHash {
  uint64_t h0 = 0;
  uint64_t h1 = 0;
};

struct BranchBits {
  uint64_t bits = 0;  // bit i of the branch is (bits >> i) & 1
  int count = 0;

  bool operator==(const BranchBits&) const = default;
};

/// Random time-varying tree code with unbounded constraint length: the
/// label on the branch reaching u_1^t at time t is a pure function of
/// (seed, u_1^t, t). In bit mode the branch carries the time-t slice of
/// the floor(tR) budget; in symbol mode it carries lambda channel inputs
/// drawn from the configured input distribution.
class TreeCode {
 public:
  struct Si {
    double rate = 1.0;  // bits per source symbol
  };
  struct Jsc {
    int lambda = 1;  // channel uses per source symbol
    Eigen::VectorXd input_dist;
  };

  TreeCode(Seed128 seed, int alphabet, Si mode);
  TreeCode(Seed128 seed, int alphabet, Jsc mode);

  bool is_si() const { return std::holds_alternative<Si>(mode_); }
  int alphabet() const { return alphabet_; }
  Seed128 seed() const { return seed_; }

  const RateSchedule& schedule() const;  // bit mode only
  int lambda() const;                    // symbol mode only

  PathHash root() const { return root_; }
  PathHash extend(PathHash parent, int symbol) const;

  /// Branch label bits at time t for the node with the given path hash.
  BranchBits branch_bits(PathHash node, int64_t t) const;

  /// Branch channel inputs at time t; writes lambda() symbols to out.
  void branch_symbols(PathHash node, int64_t t, int* out) const;

 private:
  Seed128 seed_;
  int alphabet_;
  std::variant<Si, Jsc> mode_;
  RateSchedule schedule_{1.0};
  std::vector<double> beta_cum_;
  PathHash root_;
};

}  // namespace swsim
