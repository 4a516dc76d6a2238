#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "swsim/rng.hpp"

namespace swsim {

/// Joint IID source (U,V) over a finite alphabet pair, stored as the joint
/// pmf Q(u,v) with rows indexed by u and columns by v. Marginals and the
/// conditional Q(u|v) are derived at construction. Probabilities live in
/// the linear domain; consumers take log2 where they need it.
///
/// Construction validates: entries nonnegative, total mass 1 within 1e-12,
/// and every column marginal Q(v) strictly positive. Zero entries inside a
/// column are allowed (deterministic conditionals are legal).
class JointSource {
 public:
  explicit JointSource(Eigen::MatrixXd pmf);

  int alphabet_u() const { return static_cast<int>(pmf_.rows()); }
  int alphabet_v() const { return static_cast<int>(pmf_.cols()); }

  const Eigen::MatrixXd& pmf() const { return pmf_; }
  const Eigen::VectorXd& marginal_u() const { return pu_; }
  const Eigen::VectorXd& marginal_v() const { return pv_; }
  /// Q(u|v); column v sums to 1.
  const Eigen::MatrixXd& conditional() const { return cond_; }
  double cond(int u, int v) const { return cond_(u, v); }

  /// One draw from Q(u,v); advances the rng state by one word.
  std::pair<int, int> sample(Rng& rng) const;

 private:
  Eigen::MatrixXd pmf_;
  Eigen::MatrixXd cond_;
  Eigen::VectorXd pu_;
  Eigen::VectorXd pv_;
  std::vector<double> cum_;  // row-major cumulative mass, for inverse-CDF draws
};

/// Discrete memoryless channel W(y|x) (rows indexed by x) together with the
/// input distribution beta(x) used on the code tree; the output marginal
/// P(y) = sum_x beta(x) W(y|x) is derived at construction.
class Channel {
 public:
  Channel(Eigen::MatrixXd transition, Eigen::VectorXd input_dist);

  int alphabet_x() const { return static_cast<int>(w_.rows()); }
  int alphabet_y() const { return static_cast<int>(w_.cols()); }

  const Eigen::MatrixXd& transition() const { return w_; }
  const Eigen::VectorXd& input_dist() const { return beta_; }
  const Eigen::VectorXd& output_dist() const { return py_; }
  double w(int x, int y) const { return w_(x, y); }

  /// One channel use: y ~ W(.|x).
  int sample_output(int x, Rng& rng) const;

 private:
  Eigen::MatrixXd w_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd py_;
  // per-row cumulative of W; row-major so each row is contiguous for the draw
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cum_rows_;
};

/// H(U|V) in bits per symbol; terms with Q(u|v) = 0 contribute 0.
double conditional_entropy(const JointSource& source);

/// H(p) in bits for a probability vector.
double entropy(const Eigen::VectorXd& pmf);

/// I(X;Y) in bits per channel use at the channel's input distribution.
double mutual_information(const Channel& channel);

/// Inverse-CDF index draw from a cumulative mass vector (last bucket
/// absorbs rounding slack).
int draw_from_cumulative(const double* cum, int n, double r);

}  // namespace swsim
