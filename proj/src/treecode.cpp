#include "swsim/treecode.hpp"

#include <cmath>
#include <stdexcept>

#include "swsim/models.hpp"

namespace swsim {

namespace {

constexpr uint64_t kBitsTag = 0x6272616e63686231ULL;
constexpr uint64_t kSymTag = 0x6272616e63687379ULL;

// Continued-fraction rational recovery with bounded denominator.
bool to_rational(double x, int64_t max_den, int64_t* num, int64_t* den) {
  double a = x;
  int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int i = 0; i < 64; ++i) {
    double fl = std::floor(a);
    if (fl > 9e17) return false;
    int64_t ai = static_cast<int64_t>(fl);
    int64_t p2 = ai * p1 + p0;
    int64_t q2 = ai * q1 + q0;
    if (q2 > max_den || q2 <= 0) return false;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) < 1e-12) {
      *num = p1;
      *den = q1;
      return true;
    }
    double frac = a - fl;
    if (frac < 1e-15) return false;
    a = 1.0 / frac;
  }
  return false;
}

}  // namespace

RateSchedule::RateSchedule(double rate) : rate_(rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate) || rate > 32.0) {
    throw std::invalid_argument("rate must lie in [0, 32]");
  }
  exact_ = to_rational(rate, 1000000, &num_, &den_);
}

int64_t RateSchedule::cumulative(int64_t t) const {
  if (t <= 0) return 0;
  if (exact_) {
    return static_cast<int64_t>((static_cast<__int128>(t) * num_) / den_);
  }
  return static_cast<int64_t>(std::floor(static_cast<double>(t) * rate_));
}

TreeCode::TreeCode(Seed128 seed, int alphabet, Si mode)
    : seed_(seed), alphabet_(alphabet), mode_(mode), schedule_(mode.rate) {
  if (alphabet < 1) throw std::invalid_argument("alphabet size must be >= 1");
  root_.h0 = prf(seed.hi, seed.lo, 0x726f6f7430ULL, 0);
  root_.h1 = prf(seed.hi, seed.lo, 0x726f6f7431ULL, 1);
}

TreeCode::TreeCode(Seed128 seed, int alphabet, Jsc mode)
    : seed_(seed), alphabet_(alphabet), mode_(std::move(mode)) {
  if (alphabet < 1) throw std::invalid_argument("alphabet size must be >= 1");
  const auto& m = std::get<Jsc>(mode_);
  if (m.lambda < 1) throw std::invalid_argument("lambda must be a positive integer");
  if (m.input_dist.size() < 1) throw std::invalid_argument("input distribution is empty");
  double acc = 0.0;
  beta_cum_.resize(static_cast<size_t>(m.input_dist.size()));
  for (int x = 0; x < m.input_dist.size(); ++x) {
    acc += m.input_dist(x);
    beta_cum_[static_cast<size_t>(x)] = acc;
  }
  root_.h0 = prf(seed.hi, seed.lo, 0x726f6f7430ULL, 0);
  root_.h1 = prf(seed.hi, seed.lo, 0x726f6f7431ULL, 1);
}

const RateSchedule& TreeCode::schedule() const {
  if (!is_si()) throw std::logic_error("bit schedule queried on a symbol-mode tree code");
  return schedule_;
}

int TreeCode::lambda() const {
  if (is_si()) throw std::logic_error("lambda queried on a bit-mode tree code");
  return std::get<Jsc>(mode_).lambda;
}

PathHash TreeCode::extend(PathHash parent, int symbol) const {
  uint64_t s = static_cast<uint64_t>(symbol) + 1;  // never absorb zero
  PathHash child;
  child.h0 = mix64(parent.h0 ^ (s * 0x9e3779b97f4a7c15ULL));
  child.h1 = mix64(parent.h1 + (s * 0xc2b2ae3d27d4eb4fULL));
  return child;
}

BranchBits TreeCode::branch_bits(PathHash node, int64_t t) const {
  if (!is_si()) throw std::logic_error("branch bits requested from a symbol-mode tree code");
  BranchBits out;
  out.count = schedule_.bits_at(t);
  if (out.count > 0) {
    uint64_t word = prf(node.h0, node.h1, static_cast<uint64_t>(t), kBitsTag);
    out.bits = (out.count >= 64) ? word : (word & ((uint64_t{1} << out.count) - 1));
  }
  return out;
}

void TreeCode::branch_symbols(PathHash node, int64_t t, int* out) const {
  if (is_si()) throw std::logic_error("branch symbols requested from a bit-mode tree code");
  const auto& m = std::get<Jsc>(mode_);
  for (int k = 0; k < m.lambda; ++k) {
    uint64_t word =
        prf(node.h0, node.h1, static_cast<uint64_t>(t), kSymTag + static_cast<uint64_t>(k) * 2);
    double r = u64_to_unit_double(word);
    out[k] = draw_from_cumulative(beta_cum_.data(), static_cast<int>(beta_cum_.size()), r);
  }
}

}  // namespace swsim
