#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "swsim/models.hpp"

namespace testutil {

// Binary source pair: U uniform, V = U through a symmetric flip with
// probability eps. Joint pmf (1-eps)/2 on the diagonal, eps/2 off it.
inline swsim::JointSource bsc_pair_source(double eps) {
  Eigen::MatrixXd pmf(2, 2);
  pmf << (1 - eps) / 2, eps / 2, eps / 2, (1 - eps) / 2;
  return swsim::JointSource(pmf);
}

inline swsim::Channel bsc_channel(double eps) {
  Eigen::MatrixXd w(2, 2);
  w << 1 - eps, eps, eps, 1 - eps;
  Eigen::VectorXd beta(2);
  beta << 0.5, 0.5;
  return swsim::Channel(w, beta);
}

inline swsim::Channel noiseless_binary_channel() { return bsc_channel(0.0); }

// W(y|x) = P(y) for every x: the output carries no information.
inline swsim::Channel useless_channel() {
  Eigen::MatrixXd w(2, 2);
  w << 0.3, 0.7, 0.3, 0.7;
  Eigen::VectorXd beta(2);
  beta << 0.4, 0.6;
  return swsim::Channel(w, beta);
}

// 0.999 quantile of chi-square with df degrees of freedom
// (Wilson-Hilferty approximation, z_{0.999} = 3.090232).
inline double chi2_crit_999(int df) {
  double d = static_cast<double>(df);
  double z = 3.090232;
  double t = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
  return d * t * t * t;
}

// Values frozen from closed forms evaluated independently of the library
// (binary entropy, 2 log2(sqrt(eps) + sqrt(1-eps)) at eps = 0.1, and the
// dense-grid / bisection references for rate 0.7).
inline constexpr double kHb01 = 0.46899559358928117;
inline constexpr double kEsi1Eps01 = 0.6780719051126377;
inline constexpr double kFsi1Eps01 = 0.33903595255631885;
inline constexpr double kExponentRate07 = 0.052062622412646475;
inline constexpr double kParetoRootRate07 = 1.1758915524461640;
inline constexpr double kMutualInfoBsc01 = 0.53100440641071883;

}  // namespace testutil
