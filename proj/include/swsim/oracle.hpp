#pragma once

#include <vector>

#include "swsim/decoder.hpp"
#include "swsim/treecode.hpp"

namespace swsim {

/// True-path branch labels for a whole stream, as the decoder receives
/// them. Bit mode: one entry per step. Symbol mode: lambda entries per
/// step, flattened.
std::vector<BranchBits> encode_stream_bits(const TreeCode& code, const std::vector<int>& u);
std::vector<int> encode_stream_symbols(const TreeCode& code, const std::vector<int>& u);

struct OracleResult {
  std::vector<int> path;  // empty when no admissible path exists
  double metric = 0.0;
};

/// Exhaustive argmax over all |U|^horizon paths consistent with the
/// received labels, scored with the decoder's own branch scores and the
/// decoder's tie-break (lexicographically smaller path wins equal metric).
/// Rejects instances larger than |U|^horizon = 2^24.
OracleResult best_path_exhaustive(const TreeCode& code, const BranchScores& scores,
                                  const std::vector<BranchBits>& received_bits,
                                  const std::vector<int>& side_info, int horizon);

/// Symbol-mode variant: no label filtering, every path is scored against
/// the received channel outputs.
OracleResult best_path_exhaustive_symbols(const TreeCode& code, const BranchScores& scores,
                                          const std::vector<int>& received_symbols,
                                          const std::vector<int>& side_info, int horizon);

/// Exhaustive truth value of the depth-d failure event for one realized
/// trial: does some label-consistent path, diverging from the truth at the
/// first symbol, reach depth d with a metric at least the running minimum
/// of the true path's prefix metrics?
bool depth_d_failure_check(const TreeCode& code, const BranchScores& scores,
                           const std::vector<BranchBits>& received_bits,
                           const std::vector<int>& side_info, const std::vector<int>& truth,
                           int depth);

}  // namespace swsim
