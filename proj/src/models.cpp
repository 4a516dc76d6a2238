#include "swsim/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace swsim {

namespace {

constexpr double kSumTol = 1e-12;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

int draw_from_cumulative(const double* cum, int n, double r) {
  for (int i = 0; i < n - 1; ++i) {
    if (r < cum[i]) return i;
  }
  return n - 1;
}

JointSource::JointSource(Eigen::MatrixXd pmf) : pmf_(std::move(pmf)) {
  require(pmf_.rows() >= 1 && pmf_.cols() >= 1, "source pmf must be non-empty");
  for (int u = 0; u < pmf_.rows(); ++u) {
    for (int v = 0; v < pmf_.cols(); ++v) {
      double q = pmf_(u, v);
      if (!(q >= 0.0) || !std::isfinite(q)) {
        std::ostringstream os;
        os << "source pmf entry (" << u << "," << v << ") = " << q << " is not a probability";
        throw std::invalid_argument(os.str());
      }
    }
  }
  double total = pmf_.sum();
  if (std::abs(total - 1.0) > kSumTol) {
    std::ostringstream os;
    os << "source pmf sums to " << total << ", expected 1 within 1e-12";
    throw std::invalid_argument(os.str());
  }
  pu_ = pmf_.rowwise().sum();
  pv_ = pmf_.colwise().sum().transpose();
  for (int v = 0; v < pv_.size(); ++v) {
    if (!(pv_(v) > 0.0)) {
      std::ostringstream os;
      os << "side-information marginal Q(v) must be positive, column " << v << " sums to "
         << pv_(v);
      throw std::invalid_argument(os.str());
    }
  }
  cond_ = pmf_.array().rowwise() / pv_.transpose().array();
  for (int v = 0; v < cond_.cols(); ++v) {
    double s = cond_.col(v).sum();
    require(std::abs(s - 1.0) <= kSumTol, "conditional column does not sum to 1");
  }
  cum_.resize(static_cast<size_t>(pmf_.size()));
  double acc = 0.0;
  size_t k = 0;
  for (int u = 0; u < pmf_.rows(); ++u) {
    for (int v = 0; v < pmf_.cols(); ++v) {
      acc += pmf_(u, v);
      cum_[k++] = acc;
    }
  }
}

std::pair<int, int> JointSource::sample(Rng& rng) const {
  int cell = draw_from_cumulative(cum_.data(), static_cast<int>(cum_.size()), rng.next_double());
  int nv = alphabet_v();
  return {cell / nv, cell % nv};
}

Channel::Channel(Eigen::MatrixXd transition, Eigen::VectorXd input_dist)
    : w_(std::move(transition)), beta_(std::move(input_dist)) {
  require(w_.rows() >= 1 && w_.cols() >= 1, "channel matrix must be non-empty");
  require(beta_.size() == w_.rows(), "input distribution size must match channel rows");
  for (int x = 0; x < w_.rows(); ++x) {
    for (int y = 0; y < w_.cols(); ++y) {
      double p = w_(x, y);
      if (!(p >= 0.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "channel entry W(" << y << "|" << x << ") = " << p << " is not a probability";
        throw std::invalid_argument(os.str());
      }
    }
    double s = w_.row(x).sum();
    if (std::abs(s - 1.0) > kSumTol) {
      std::ostringstream os;
      os << "channel row " << x << " sums to " << s << ", expected 1 within 1e-12";
      throw std::invalid_argument(os.str());
    }
  }
  for (int x = 0; x < beta_.size(); ++x) {
    require(beta_(x) >= 0.0 && std::isfinite(beta_(x)), "input distribution entry is not a probability");
  }
  require(std::abs(beta_.sum() - 1.0) <= kSumTol, "input distribution does not sum to 1");
  py_ = w_.transpose() * beta_;
  require(std::abs(py_.sum() - 1.0) <= kSumTol, "output marginal does not sum to 1");
  cum_rows_.resize(w_.rows(), w_.cols());
  for (int x = 0; x < w_.rows(); ++x) {
    double acc = 0.0;
    for (int y = 0; y < w_.cols(); ++y) {
      acc += w_(x, y);
      cum_rows_(x, y) = acc;
    }
  }
}

int Channel::sample_output(int x, Rng& rng) const {
  return draw_from_cumulative(cum_rows_.row(x).data(), alphabet_y(), rng.next_double());
}

double conditional_entropy(const JointSource& source) {
  double h = 0.0;
  for (int v = 0; v < source.alphabet_v(); ++v) {
    double hv = 0.0;
    for (int u = 0; u < source.alphabet_u(); ++u) {
      double q = source.cond(u, v);
      if (q > 0.0) hv -= q * std::log2(q);
    }
    h += source.marginal_v()(v) * hv;
  }
  return h;
}

double entropy(const Eigen::VectorXd& pmf) {
  double h = 0.0;
  for (int i = 0; i < pmf.size(); ++i) {
    if (pmf(i) > 0.0) h -= pmf(i) * std::log2(pmf(i));
  }
  return h;
}

double mutual_information(const Channel& channel) {
  double mi = 0.0;
  for (int x = 0; x < channel.alphabet_x(); ++x) {
    for (int y = 0; y < channel.alphabet_y(); ++y) {
      double w = channel.w(x, y);
      if (w > 0.0 && channel.input_dist()(x) > 0.0) {
        mi += channel.input_dist()(x) * w * std::log2(w / channel.output_dist()(y));
      }
    }
  }
  return mi;
}

}  // namespace swsim
