#include "swsim/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace swsim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_instance_size(const TreeCode& code, int horizon) {
  double nodes = std::pow(static_cast<double>(code.alphabet()), horizon);
  if (!(nodes <= static_cast<double>(1 << 24))) {
    throw std::invalid_argument("exhaustive search instance too large");
  }
}

struct BitSearch {
  const TreeCode& code;
  const BranchScores& scores;
  const std::vector<BranchBits>& rx;
  const std::vector<int>& v;
  int horizon;
  std::vector<int> current;
  OracleResult best;
  bool found = false;

  void dfs(PathHash ph, int depth, double metric) {
    if (depth == horizon) {
      if (!found || metric > best.metric) {
        found = true;
        best.path = current;
        best.metric = metric;
      }
      // Equal metric keeps the earlier (lexicographically smaller) path.
      return;
    }
    int64_t t = depth + 1;
    for (int sym = 0; sym < code.alphabet(); ++sym) {
      PathHash child = code.extend(ph, sym);
      if (code.branch_bits(child, t) != rx[static_cast<size_t>(depth)]) continue;
      double score = scores.si(sym, v[static_cast<size_t>(depth)]);
      if (score == kNegInf) continue;
      current.push_back(sym);
      dfs(child, depth + 1, metric + score);
      current.pop_back();
    }
  }
};

struct SymbolSearch {
  const TreeCode& code;
  const BranchScores& scores;
  const std::vector<int>& y;
  const std::vector<int>& v;
  int horizon;
  std::vector<int> x_scratch;
  std::vector<int> current;
  OracleResult best;
  bool found = false;

  void dfs(PathHash ph, int depth, double metric) {
    if (depth == horizon) {
      if (!found || metric > best.metric) {
        found = true;
        best.path = current;
        best.metric = metric;
      }
      return;
    }
    int64_t t = depth + 1;
    int lambda = code.lambda();
    for (int sym = 0; sym < code.alphabet(); ++sym) {
      PathHash child = code.extend(ph, sym);
      code.branch_symbols(child, t, x_scratch.data());
      double score = scores.jsc(sym, v[static_cast<size_t>(depth)], x_scratch.data(),
                                y.data() + static_cast<size_t>(depth) * lambda, lambda);
      if (score == kNegInf) continue;
      current.push_back(sym);
      dfs(child, depth + 1, metric + score);
      current.pop_back();
    }
  }
};

}  // namespace

std::vector<BranchBits> encode_stream_bits(const TreeCode& code, const std::vector<int>& u) {
  std::vector<BranchBits> out;
  out.reserve(u.size());
  PathHash ph = code.root();
  for (size_t i = 0; i < u.size(); ++i) {
    ph = code.extend(ph, u[i]);
    out.push_back(code.branch_bits(ph, static_cast<int64_t>(i + 1)));
  }
  return out;
}

std::vector<int> encode_stream_symbols(const TreeCode& code, const std::vector<int>& u) {
  std::vector<int> out(u.size() * static_cast<size_t>(code.lambda()));
  PathHash ph = code.root();
  for (size_t i = 0; i < u.size(); ++i) {
    ph = code.extend(ph, u[i]);
    code.branch_symbols(ph, static_cast<int64_t>(i + 1),
                        out.data() + i * static_cast<size_t>(code.lambda()));
  }
  return out;
}

OracleResult best_path_exhaustive(const TreeCode& code, const BranchScores& scores,
                                  const std::vector<BranchBits>& received_bits,
                                  const std::vector<int>& side_info, int horizon) {
  check_instance_size(code, horizon);
  if (static_cast<int>(received_bits.size()) < horizon ||
      static_cast<int>(side_info.size()) < horizon) {
    throw std::invalid_argument("received labels shorter than the search horizon");
  }
  BitSearch search{code, scores, received_bits, side_info, horizon, {}, {}, false};
  search.dfs(code.root(), 0, 0.0);
  if (!search.found) search.best.metric = kNegInf;
  return search.best;
}

OracleResult best_path_exhaustive_symbols(const TreeCode& code, const BranchScores& scores,
                                          const std::vector<int>& received_symbols,
                                          const std::vector<int>& side_info, int horizon) {
  check_instance_size(code, horizon);
  SymbolSearch search{code,
                      scores,
                      received_symbols,
                      side_info,
                      horizon,
                      std::vector<int>(static_cast<size_t>(code.lambda())),
                      {},
                      {},
                      false};
  search.dfs(code.root(), 0, 0.0);
  if (!search.found) search.best.metric = kNegInf;
  return search.best;
}

bool depth_d_failure_check(const TreeCode& code, const BranchScores& scores,
                           const std::vector<BranchBits>& received_bits,
                           const std::vector<int>& side_info, const std::vector<int>& truth,
                           int depth) {
  check_instance_size(code, depth);
  if (static_cast<int>(truth.size()) < depth) {
    throw std::invalid_argument("true path shorter than the event depth");
  }
  // Running minimum of the true path's prefix metrics over k = 1..depth.
  double threshold = std::numeric_limits<double>::infinity();
  {
    PathHash ph = code.root();
    double metric = 0.0;
    for (int k = 1; k <= depth; ++k) {
      ph = code.extend(ph, truth[static_cast<size_t>(k - 1)]);
      metric += scores.si(truth[static_cast<size_t>(k - 1)], side_info[static_cast<size_t>(k - 1)]);
      threshold = std::min(threshold, metric);
    }
  }

  struct Dfs {
    const TreeCode& code;
    const BranchScores& scores;
    const std::vector<BranchBits>& rx;
    const std::vector<int>& v;
    double threshold;
    int depth;

    bool walk(PathHash ph, int level, double metric) {
      if (level == depth) return metric >= threshold;
      int64_t t = level + 1;
      for (int sym = 0; sym < code.alphabet(); ++sym) {
        PathHash child = code.extend(ph, sym);
        if (code.branch_bits(child, t) != rx[static_cast<size_t>(level)]) continue;
        double score = scores.si(sym, v[static_cast<size_t>(level)]);
        if (score == kNegInf) continue;
        if (walk(child, level + 1, metric + score)) return true;
      }
      return false;
    }
  };
  Dfs dfs{code, scores, received_bits, side_info, threshold, depth};
  // Only subtrees diverging at the first symbol qualify.
  for (int sym = 0; sym < code.alphabet(); ++sym) {
    if (sym == truth[0]) continue;
    PathHash child = code.extend(code.root(), sym);
    if (code.branch_bits(child, 1) != received_bits[0]) continue;
    double score = scores.si(sym, side_info[0]);
    if (score == kNegInf) continue;
    if (dfs.walk(child, 1, score)) return true;
  }
  return false;
}

}  // namespace swsim
