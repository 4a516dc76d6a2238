#include "swsim/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swsim {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double branch_metric_si(const JointSource& source, int u, int v, double bias) {
  double q = source.cond(u, v);
  if (q <= 0.0) return kNegInf;
  return bias + std::log2(q);
}

double branch_metric_jsc(const JointSource& source, const Channel& channel, int u, int v,
                         const int* x, const int* y, int lambda, double bias) {
  double m = branch_metric_si(source, u, v, bias);
  for (int k = 0; k < lambda; ++k) {
    double w = channel.w(x[k], y[k]);
    if (w <= 0.0) return kNegInf;
    m += std::log2(w / channel.output_dist()(y[k]));
  }
  return m;
}

BranchScores::BranchScores(const JointSource& source, double bias) : bias_(bias) {
  si_.resize(source.alphabet_u(), source.alphabet_v());
  for (int u = 0; u < source.alphabet_u(); ++u)
    for (int v = 0; v < source.alphabet_v(); ++v)
      si_(u, v) = branch_metric_si(source, u, v, bias);
}

BranchScores::BranchScores(const JointSource& source, const Channel& channel, double bias)
    : BranchScores(source, bias) {
  chan_.resize(channel.alphabet_x(), channel.alphabet_y());
  for (int x = 0; x < channel.alphabet_x(); ++x) {
    for (int y = 0; y < channel.alphabet_y(); ++y) {
      double w = channel.w(x, y);
      chan_(x, y) = w > 0.0 ? std::log2(w / channel.output_dist()(y)) : kNegInf;
    }
  }
}

BranchScores::BranchScores(Eigen::MatrixXd si_scores) : si_(std::move(si_scores)) {}

StackDecoder::StackDecoder(const TreeCode& code, const BranchScores& scores, DecoderConfig config)
    : code_(code), scores_(scores), config_(config) {
  if (config_.caps.max_pops_per_step < 1 || config_.caps.max_stack < 1) {
    throw std::invalid_argument("decoder caps must be positive");
  }
  Node root{};
  root.metric = 0.0;
  root.ph = code_.root();
  root.parent = 0;
  root.depth = 0;
  root.agree = 0;
  root.symbol = 0;
  arena_.push_back(root);
  heap_.push_back(0);
  if (!code_.is_si()) sym_scratch_.resize(static_cast<size_t>(code_.lambda()));
}

void StackDecoder::attach_reference(const std::vector<int>& truth) { reference_ = truth; }

int StackDecoder::lex_cmp(uint32_t a, uint32_t b) const {
  // Both nodes sit at the same depth; walk up to the common ancestor.
  std::vector<uint8_t> sa, sb;
  while (a != b) {
    sa.push_back(arena_[a].symbol);
    sb.push_back(arena_[b].symbol);
    a = arena_[a].parent;
    b = arena_[b].parent;
  }
  for (size_t i = sa.size(); i-- > 0;) {
    if (sa[i] != sb[i]) return sa[i] < sb[i] ? -1 : 1;
  }
  return 0;
}

bool StackDecoder::heap_less(uint32_t a, uint32_t b) const {
  const Node& na = arena_[a];
  const Node& nb = arena_[b];
  if (na.metric != nb.metric) return na.metric < nb.metric;
  if (na.depth != nb.depth) return na.depth < nb.depth;
  return lex_cmp(a, b) > 0;  // lexicographically larger path ranks lower
}

void StackDecoder::heap_push(uint32_t id) {
  heap_.push_back(id);
  std::push_heap(heap_.begin(), heap_.end(), [this](uint32_t a, uint32_t b) { return heap_less(a, b); });
}

uint32_t StackDecoder::heap_pop() {
  std::pop_heap(heap_.begin(), heap_.end(), [this](uint32_t a, uint32_t b) { return heap_less(a, b); });
  uint32_t id = heap_.back();
  heap_.pop_back();
  return id;
}

bool StackDecoder::step_bits(BranchBits received, int side_info) {
  received_bits_.push_back(received);
  return advance(side_info);
}

bool StackDecoder::step_symbols(const int* received, int side_info) {
  received_syms_.insert(received_syms_.end(), received, received + code_.lambda());
  return advance(side_info);
}

bool StackDecoder::advance(int side_info) {
  if (ledger_.cap_hit) throw std::logic_error("decoder stepped after a cap abort");
  side_info_.push_back(side_info);
  ++time_;
  ledger_.pops_per_step.push_back(0);
  uint32_t& pops = ledger_.pops_per_step.back();
  const int alphabet = code_.alphabet();
  const bool si_mode = code_.is_si();
  const int lambda = si_mode ? 0 : code_.lambda();

  while (true) {
    if (heap_.empty()) {
      // The true path always survives pruning, so the stack cannot drain.
      throw std::logic_error("stack emptied while decoding");
    }
    if (arena_[heap_.front()].depth == static_cast<uint32_t>(time_)) break;

    if (static_cast<int64_t>(pops) >= config_.caps.max_pops_per_step) {
      ledger_.cap_hit = true;
      return false;
    }
    uint32_t top = heap_pop();
    ++pops;
    ++ledger_.pops_total;
    if (config_.record_pop_metrics) pop_metrics_.push_back(arena_[top].metric);

    const Node parent = arena_[top];  // copy: the arena may grow below
    const int64_t child_time = parent.depth + 1;
    for (int sym = 0; sym < alphabet; ++sym) {
      PathHash ph = code_.extend(parent.ph, sym);
      double score;
      if (si_mode) {
        // Non-matching branch labels are discarded before any metric work.
        if (code_.branch_bits(ph, child_time) !=
            received_bits_[static_cast<size_t>(child_time - 1)]) {
          continue;
        }
        score = scores_.si(sym, side_info_[static_cast<size_t>(child_time - 1)]);
      } else {
        code_.branch_symbols(ph, child_time, sym_scratch_.data());
        score = scores_.jsc(sym, side_info_[static_cast<size_t>(child_time - 1)],
                            sym_scratch_.data(),
                            received_syms_.data() + (child_time - 1) * lambda, lambda);
      }
      ++ledger_.visits_total;
      if (score == kNegInf) continue;

      Node child;
      child.metric = parent.metric + score;
      child.ph = ph;
      child.parent = top;
      child.depth = static_cast<uint32_t>(child_time);
      child.symbol = static_cast<uint8_t>(sym);
      if (!reference_.empty() && parent.agree == parent.depth &&
          sym == reference_[parent.depth]) {
        child.agree = parent.depth + 1;
      } else {
        child.agree = parent.agree;
      }
      arena_.push_back(child);
      heap_push(static_cast<uint32_t>(arena_.size() - 1));
      if (static_cast<int64_t>(heap_.size()) > config_.caps.max_stack) {
        ledger_.cap_hit = true;
        return false;
      }
    }
  }
  return true;
}

std::vector<int> StackDecoder::path_of(uint32_t id) const {
  std::vector<int> path(arena_[id].depth);
  uint32_t cur = id;
  for (size_t i = path.size(); i-- > 0;) {
    path[i] = arena_[cur].symbol;
    cur = arena_[cur].parent;
  }
  return path;
}

std::vector<int> StackDecoder::estimate() const { return path_of(heap_.front()); }

double StackDecoder::emitted_metric() const { return arena_[heap_.front()].metric; }

uint32_t StackDecoder::emitted_agree_len() const { return arena_[heap_.front()].agree; }

std::vector<std::vector<int>> StackDecoder::stack_paths() const {
  std::vector<std::vector<int>> out;
  out.reserve(heap_.size());
  for (uint32_t id : heap_) out.push_back(path_of(id));
  return out;
}

DecodeResult run(const JointSource& source, const std::vector<int>& u, const std::vector<int>& v,
                 const TreeCode& code, const Channel* channel, const BranchScores& scores,
                 const DecoderConfig& config, Rng& rng) {
  if (u.size() != v.size()) throw std::invalid_argument("source and side-info streams differ in length");
  if (!code.is_si() && channel == nullptr) throw std::invalid_argument("symbol mode requires a channel");
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0 || u[i] >= source.alphabet_u() || v[i] < 0 || v[i] >= source.alphabet_v()) {
      throw std::invalid_argument("stream symbol out of alphabet range");
    }
  }
  const int64_t horizon = static_cast<int64_t>(u.size());

  StackDecoder decoder(code, scores, config);
  decoder.attach_reference(u);

  DecodeResult result;
  PathHash true_ph = code.root();
  std::vector<int> x_block, y_block;
  if (!code.is_si()) {
    x_block.resize(static_cast<size_t>(code.lambda()));
    y_block.resize(static_cast<size_t>(code.lambda()));
  }

  for (int64_t t = 1; t <= horizon; ++t) {
    true_ph = code.extend(true_ph, u[static_cast<size_t>(t - 1)]);
    bool ok;
    if (code.is_si()) {
      ok = decoder.step_bits(code.branch_bits(true_ph, t), v[static_cast<size_t>(t - 1)]);
    } else {
      code.branch_symbols(true_ph, t, x_block.data());
      for (int k = 0; k < code.lambda(); ++k) {
        y_block[static_cast<size_t>(k)] = channel->sample_output(x_block[static_cast<size_t>(k)], rng);
      }
      ok = decoder.step_symbols(y_block.data(), v[static_cast<size_t>(t - 1)]);
    }
    if (!ok) {
      result.status = DecodeStatus::CapAborted;
      result.abort_step = t;
      break;
    }
    result.agree_len.push_back(decoder.emitted_agree_len());
    result.emitted_metric.push_back(decoder.emitted_metric());
    if (config.record_estimates) result.estimates.push_back(decoder.estimate());
  }
  result.ledger = decoder.ledger();
  if (config.record_pop_metrics) result.pop_metrics = decoder.pop_metrics();
  return result;
}

}  // namespace swsim
