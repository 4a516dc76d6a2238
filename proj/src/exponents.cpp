#include "swsim/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace swsim {

namespace {

// log2 of sum_v Q(v) * (sum_u Q(u|v)^{1/(1+rho)})^outer
double source_moment(const JointSource& s, double rho, double outer) {
  const double inv = 1.0 / (1.0 + rho);
  double acc = 0.0;
  for (int v = 0; v < s.alphabet_v(); ++v) {
    double inner = 0.0;
    for (int u = 0; u < s.alphabet_u(); ++u) {
      double q = s.cond(u, v);
      if (q > 0.0) inner += std::pow(q, inv);
    }
    acc += s.marginal_v()(v) * std::pow(inner, outer);
  }
  return std::log2(acc);
}

// -log2 of sum_y P(y) * (sum_x beta(x) (W(y|x)/P(y))^{1/(1+rho)})^outer
double channel_moment(const Channel& ch, double rho, double outer) {
  const double inv = 1.0 / (1.0 + rho);
  double acc = 0.0;
  for (int y = 0; y < ch.alphabet_y(); ++y) {
    double py = ch.output_dist()(y);
    if (py <= 0.0) continue;
    double inner = 0.0;
    for (int x = 0; x < ch.alphabet_x(); ++x) {
      double w = ch.w(x, y);
      if (w > 0.0 && ch.input_dist()(x) > 0.0) {
        inner += ch.input_dist()(x) * std::pow(w / py, inv);
      }
    }
    acc += py * std::pow(inner, outer);
  }
  return -std::log2(acc);
}

void require_nonneg_rho(double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
}

void require_positive_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in (0, 1]");
}

void require_lambda(int lambda) {
  if (lambda < 1) throw std::invalid_argument("lambda must be a positive integer");
}

// Coarse grid (step 1e-3) over [0,1] followed by golden-section refinement
// to an interval of width 1e-9. The objectives are continuous and concave
// on [0,1], so the grid brackets the maximum and golden section converges.
template <typename F>
ExponentReport maximize_unit_interval(F&& objective) {
  constexpr double kStep = 1e-3;
  constexpr int kCells = 1000;
  double best_x = 0.0;
  double best_y = objective(0.0);
  for (int i = 1; i <= kCells; ++i) {
    double x = (i == kCells) ? 1.0 : i * kStep;
    double y = objective(x);
    if (y > best_y) {
      best_y = y;
      best_x = x;
    }
  }
  double lo = std::max(0.0, best_x - kStep);
  double hi = std::min(1.0, best_x + kStep);
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = objective(x1);
    }
  }
  double x = 0.5 * (a + b);
  double y = objective(x);
  if (best_y > y) {
    x = best_x;
    y = best_y;
  }
  ExponentReport r;
  r.rho_star = x;
  r.exponent = std::max(y, 0.0);  // objective is 0 at rho = 0
  r.feasible = r.exponent > 0.0;
  return r;
}

}  // namespace

double e_si(const JointSource& s, double rho) {
  require_nonneg_rho(rho);
  return source_moment(s, rho, 1.0 + rho);
}

double f_si(const JointSource& s, double rho) {
  require_nonneg_rho(rho);
  return source_moment(s, rho, rho);
}

double g_si(const JointSource& s, double rho) {
  require_nonneg_rho(rho);
  return source_moment(s, rho, 1.0);
}

double e_s(const Eigen::VectorXd& pmf, double rho) {
  require_nonneg_rho(rho);
  double inner = 0.0;
  for (int u = 0; u < pmf.size(); ++u) {
    if (pmf(u) > 0.0) inner += std::pow(pmf(u), 1.0 / (1.0 + rho));
  }
  return (1.0 + rho) * std::log2(inner);
}

double f_s(const Eigen::VectorXd& pmf, double rho) {
  return rho / (1.0 + rho) * e_s(pmf, rho);
}

double g_s(const Eigen::VectorXd& pmf, double rho) {
  return e_s(pmf, rho) / (1.0 + rho);
}

double e0(const Channel& ch, double rho) {
  require_nonneg_rho(rho);
  return channel_moment(ch, rho, 1.0 + rho);
}

double f_ch(const Channel& ch, double rho) {
  require_nonneg_rho(rho);
  return channel_moment(ch, rho, rho);
}

double g_ch(const Channel& ch, double rho) {
  require_nonneg_rho(rho);
  return channel_moment(ch, rho, 1.0);
}

ExponentReport random_coding_exponent_si(const JointSource& s, double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("rate must be >= 0");
  return maximize_unit_interval([&](double rho) { return rho * rate - e_si(s, rho); });
}

ExponentReport random_coding_exponent_jsc(const JointSource& s, const Channel& ch, int lambda) {
  require_lambda(lambda);
  return maximize_unit_interval(
      [&](double rho) { return lambda * e0(ch, rho) - e_si(s, rho); });
}

std::optional<double> bias_cap_error_si(const JointSource& s, double rho) {
  if (rho == 0.0) return std::nullopt;
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  return (1.0 + rho) / rho * (e_si(s, rho) - f_si(s, rho));
}

std::optional<double> bias_cap_error_jsc(const JointSource& s, const Channel& ch, int lambda,
                                         double rho) {
  require_lambda(lambda);
  if (rho == 0.0) return std::nullopt;
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  return (1.0 + rho) / rho *
         (e_si(s, rho) - f_si(s, rho) - lambda * e0(ch, rho) + lambda * f_ch(ch, rho));
}

BiasInterval bias_range_comp_si(const JointSource& s, double rate, double gamma) {
  require_positive_gamma(gamma);
  BiasInterval iv;
  double scale = (1.0 + gamma) / gamma;
  iv.lower = scale * g_si(s, gamma);
  iv.upper = scale * (gamma * rate - f_si(s, gamma));
  iv.feasible = gamma * rate > e_si(s, gamma);
  return iv;
}

BiasInterval bias_range_comp_jsc(const JointSource& s, const Channel& ch, int lambda,
                                 double gamma) {
  require_positive_gamma(gamma);
  require_lambda(lambda);
  BiasInterval iv;
  double scale = (1.0 + gamma) / gamma;
  iv.lower = scale * (g_si(s, gamma) - lambda * g_ch(ch, gamma));
  iv.upper = scale * (lambda * f_ch(ch, gamma) - f_si(s, gamma));
  iv.feasible = lambda * e0(ch, gamma) > e_si(s, gamma);
  return iv;
}

double default_bias_si(const JointSource& s, double gamma) {
  require_positive_gamma(gamma);
  return (1.0 + gamma) / gamma * (e_si(s, gamma) - f_si(s, gamma));
}

double default_bias_jsc(const JointSource& s, const Channel& ch, int lambda, double gamma) {
  require_positive_gamma(gamma);
  require_lambda(lambda);
  return (1.0 + gamma) / gamma *
         (e_si(s, gamma) - f_si(s, gamma) - lambda * e0(ch, gamma) + lambda * f_ch(ch, gamma));
}

ParetoRoot pareto_root(const JointSource& s, double rate) {
  ParetoRoot out;
  if (rate <= conditional_entropy(s)) {
    out.status = RootStatus::NoRoot;
    return out;
  }
  // h(gamma) = gamma R - e_si(gamma) starts positive (slope R - H(U|V) > 0)
  // and is concave; find the first sign change on (0, 10] and bisect.
  constexpr double kGammaMax = 10.0;
  constexpr double kScanStep = 0.01;
  auto h = [&](double g) { return g * rate - e_si(s, g); };
  double lo = 0.0;
  double hi = -1.0;
  for (double g = kScanStep; g <= kGammaMax + 1e-12; g += kScanStep) {
    if (h(g) < 0.0) {
      hi = g;
      break;
    }
    lo = g;
  }
  if (hi < 0.0) {
    out.status = RootStatus::Unbounded;
    return out;
  }
  if (lo == 0.0) lo = 1e-12;  // h(0) = 0 exactly, keep the bracket open
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) < 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.status = RootStatus::Found;
  out.gamma_star = 0.5 * (lo + hi);
  return out;
}

}  // namespace swsim
