#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "swsim/models.hpp"
#include "swsim/treecode.hpp"

namespace swsim {

/// Per-branch score G + log2 Q(u|v); -inf when Q(u|v) = 0 (such a branch
/// is never placed on the stack).
double branch_metric_si(const JointSource& source, int u, int v, double bias);

/// Joint source-channel score G + log2 Q(u|v) + sum_k log2(W(y_k|x_k)/P(y_k));
/// -inf if any factor vanishes.
double branch_metric_jsc(const JointSource& source, const Channel& channel, int u, int v,
                         const int* x, const int* y, int lambda, double bias);

/// Branch scores tabulated once per run. The stack decoder and the
/// exhaustive reference search share this object, so any disagreement
/// between them is attributable to the search strategy alone.
class BranchScores {
 public:
  BranchScores(const JointSource& source, double bias);
  BranchScores(const JointSource& source, const Channel& channel, double bias);
  /// Custom score table (diagnostic sweeps, fault injection in self-checks).
  explicit BranchScores(Eigen::MatrixXd si_scores);

  double bias() const { return bias_; }
  bool has_channel() const { return chan_.size() > 0; }
  double si(int u, int v) const { return si_(u, v); }
  double channel_term(int x, int y) const { return chan_(x, y); }
  double jsc(int u, int v, const int* x, const int* y, int lambda) const {
    double m = si_(u, v);
    for (int k = 0; k < lambda; ++k) m += chan_(x[k], y[k]);
    return m;
  }

 private:
  double bias_ = 0.0;
  Eigen::MatrixXd si_;    // |U| x |V|
  Eigen::MatrixXd chan_;  // |X| x |Y|, log2 likelihood ratio against P(y)
};

struct DecoderCaps {
  int64_t max_pops_per_step = 1'000'000;
  int64_t max_stack = 10'000'000;
};

struct DecoderConfig {
  DecoderCaps caps;
  bool record_estimates = false;    // keep the full emitted path per step
  bool record_pop_metrics = false;  // keep the metric of every popped entry
};

struct ComputationLedger {
  std::vector<uint32_t> pops_per_step;  // entry t-1 covers decode step t
  uint64_t pops_total = 0;
  uint64_t visits_total = 0;  // child-metric evaluations
  bool cap_hit = false;
};

enum class DecodeStatus { Completed, CapAborted };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Completed;
  int64_t abort_step = -1;  // step at which a cap fired, -1 otherwise
  ComputationLedger ledger;
  /// Per step m: length of the longest prefix of the emitted estimate that
  /// matches the true source path (filled when the truth is attached).
  std::vector<uint32_t> agree_len;
  std::vector<double> emitted_metric;
  std::vector<std::vector<int>> estimates;  // when record_estimates
  std::vector<double> pop_metrics;          // when record_pop_metrics
};

/// Best-first stack decoder. One instance decodes one stream and is owned
/// by a single thread; the shared inputs (source, code, scores) are
/// immutable. Ties on metric are broken toward the deeper entry, then the
/// lexicographically smaller path, which pins the popped order completely.
class StackDecoder {
 public:
  StackDecoder(const TreeCode& code, const BranchScores& scores, DecoderConfig config);

  /// Attach the true source path for agreement bookkeeping. Measurement
  /// only: decoding decisions never read it.
  void attach_reference(const std::vector<int>& truth);

  /// Advance one step in bit mode with the freshly received branch bits
  /// and side-information symbol. Returns false when a cap fired.
  bool step_bits(BranchBits received, int side_info);

  /// Advance one step in symbol mode with the lambda received channel
  /// outputs for this step.
  bool step_symbols(const int* received, int side_info);

  int64_t time() const { return time_; }
  bool cap_hit() const { return ledger_.cap_hit; }
  const ComputationLedger& ledger() const { return ledger_; }

  /// Emitted estimate at the current time (depth == time()).
  std::vector<int> estimate() const;
  double emitted_metric() const;
  uint32_t emitted_agree_len() const;

  /// Paths of all stack entries, root-first. Test introspection; linear
  /// in total stack content.
  std::vector<std::vector<int>> stack_paths() const;

  const std::vector<double>& pop_metrics() const { return pop_metrics_; }

 private:
  struct Node {
    double metric;
    PathHash ph;
    uint32_t parent;
    uint32_t depth;
    uint32_t agree;
    uint8_t symbol;
  };

  bool advance(int side_info);
  int lex_cmp(uint32_t a, uint32_t b) const;
  bool heap_less(uint32_t a, uint32_t b) const;
  void heap_push(uint32_t id);
  uint32_t heap_pop();
  std::vector<int> path_of(uint32_t id) const;

  const TreeCode& code_;
  const BranchScores& scores_;
  DecoderConfig config_;
  std::vector<Node> arena_;
  std::vector<uint32_t> heap_;
  std::vector<BranchBits> received_bits_;
  std::vector<int> received_syms_;  // flattened lambda-blocks
  std::vector<int> side_info_;
  std::vector<int> reference_;
  std::vector<double> pop_metrics_;
  std::vector<int> sym_scratch_;
  ComputationLedger ledger_;
  int64_t time_ = 0;
};

/// Drive encoder and decoder over a full stream: generates the true-path
/// branch labels, passes them through the channel in symbol mode, decodes
/// step by step, and assembles the trial transcript. rng is consumed only
/// by channel noise.
DecodeResult run(const JointSource& source, const std::vector<int>& u, const std::vector<int>& v,
                 const TreeCode& code, const Channel* channel, const BranchScores& scores,
                 const DecoderConfig& config, Rng& rng);

}  // namespace swsim
