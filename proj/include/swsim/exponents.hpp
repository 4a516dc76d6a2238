#pragma once

#include <Eigen/Dense>
#include <optional>

#include "swsim/models.hpp"

namespace swsim {

// Gallager-style functions of the source and channel, all in bits (base-2
// logs throughout). With H(v) = sum_u Q(u|v)^{1/(1+rho)} and
// J(y) = sum_x beta(x) (W(y|x)/P(y))^{1/(1+rho)}:
//
//   e_si = log2 E[H(V)^{1+rho}]   f_si = log2 E[H(V)^rho]   g_si = log2 E[H(V)]
//   e0   = -log2 E[J(Y)^{1+rho}]  f_ch = -log2 E[J(Y)^rho]  g_ch = -log2 E[J(Y)]
//
// All six vanish at rho = 0. Powers of zero probabilities are taken as
// exactly zero, no flooring.
double e_si(const JointSource& source, double rho);
double f_si(const JointSource& source, double rho);
double g_si(const JointSource& source, double rho);

// Point-to-point reductions on a bare marginal: e_s = (1+rho) log2 sum Q(u)^{1/(1+rho)},
// f_s and g_s with factors rho and 1. Equal to the _si family when |V| = 1
// or when V is independent of U.
double e_s(const Eigen::VectorXd& pmf, double rho);
double f_s(const Eigen::VectorXd& pmf, double rho);
double g_s(const Eigen::VectorXd& pmf, double rho);

double e0(const Channel& channel, double rho);
double f_ch(const Channel& channel, double rho);
double g_ch(const Channel& channel, double rho);

/// Result of maximizing a random-coding objective over rho in [0,1].
/// The objective is 0 at rho = 0, so exponent >= 0 always; feasible
/// means a strictly positive exponent exists.
struct ExponentReport {
  double rho_star = 0.0;
  double exponent = 0.0;
  bool feasible = false;
};

/// sup_{rho in [0,1]} rho R - e_si(rho): the decay rate (bits per delay
/// step) achievable by the biased stack decoder at rate R.
ExponentReport random_coding_exponent_si(const JointSource& source, double rate);

/// sup_{rho in [0,1]} lambda e0(rho) - e_si(rho) for the joint
/// source-channel variant with lambda channel uses per source symbol.
ExponentReport random_coding_exponent_jsc(const JointSource& source, const Channel& channel,
                                          int lambda);

/// Largest bias still guaranteeing the delay exponent rho R - e_si(rho):
/// (1+rho)/rho [e_si - f_si]. Unbounded (nullopt) at rho = 0.
std::optional<double> bias_cap_error_si(const JointSource& source, double rho);

/// Joint source-channel version: (1+rho)/rho [e_si - f_si - lambda e0 + lambda f_ch].
std::optional<double> bias_cap_error_jsc(const JointSource& source, const Channel& channel,
                                         int lambda, double rho);

/// Open interval of biases under which the gamma-th moment of decoder
/// computation stays uniformly bounded, plus the cutoff feasibility flag.
struct BiasInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool feasible = false;  // si: gamma R > e_si(gamma); jsc: lambda e0(gamma) > e_si(gamma)
  bool nonempty() const { return lower < upper; }
};

/// ((1+g)/g g_si(g), (1+g)/g [g R - f_si(g)]); gamma in (0,1].
BiasInterval bias_range_comp_si(const JointSource& source, double rate, double gamma);

/// ((1+g)/g [g_si - lambda g_ch], (1+g)/g [lambda f_ch - f_si]); gamma in (0,1].
BiasInterval bias_range_comp_jsc(const JointSource& source, const Channel& channel, int lambda,
                                 double gamma);

/// Bias that simultaneously meets the error cap at rho = gamma and, when
/// the cutoff condition holds and the source is not conditionally
/// deterministic everywhere, sits strictly inside the computation interval.
double default_bias_si(const JointSource& source, double gamma);
double default_bias_jsc(const JointSource& source, const Channel& channel, int lambda,
                        double gamma);

enum class RootStatus {
  Found,      // smallest positive root of gamma R = e_si(gamma)
  Unbounded,  // gamma R > e_si(gamma) on the whole search domain (0, 10]
  NoRoot,     // R <= H(U|V): no positive root exists
};

/// Predicted tail index of per-step computation: the gamma at which the
/// cutoff condition gamma R > e_si(gamma) stops holding.
struct ParetoRoot {
  RootStatus status = RootStatus::NoRoot;
  double gamma_star = 0.0;  // meaningful only when status == Found
};

ParetoRoot pareto_root(const JointSource& source, double rate);

}  // namespace swsim
