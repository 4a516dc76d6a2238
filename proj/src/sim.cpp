#include "swsim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <thread>

#include "swsim/oracle.hpp"
#include "swsim/treecode.hpp"

namespace swsim {

namespace {

using nlohmann::ordered_json;

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

Seed128 trial_code_seed(uint64_t master, int64_t trial) {
  return Seed128{prf(master, 0x636f646573656564ULL, static_cast<uint64_t>(trial), 0),
                 prf(master, 0x636f646573656564ULL, static_cast<uint64_t>(trial), 1)};
}

struct LineFit {
  double slope = 0.0;
  double std_error = 0.0;
  int points = 0;
};

std::optional<LineFit> least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  if (n < 4) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) return std::nullopt;
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.points = n;
  double intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = ys[i] - (intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.std_error = (n > 2) ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return fit;
}

ordered_json fit_to_json(const std::optional<FitResult>& fit) {
  if (!fit) return nullptr;
  ordered_json j;
  j["exponent"] = fit->exponent;
  j["std_error"] = fit->std_error;
  j["points"] = fit->points;
  return j;
}

}  // namespace

TrialResult run_trial(const JointSource& source, const Channel* channel, const RunConfig& cfg,
                      const BranchScores& scores, int64_t trial_index) {
  Rng rng = Rng::from_seed(cfg.master_seed).split(static_cast<uint64_t>(trial_index));
  const int64_t T = cfg.stream_len;
  std::vector<int> u(static_cast<size_t>(T));
  std::vector<int> v(static_cast<size_t>(T));
  for (int64_t t = 0; t < T; ++t) {
    auto [uu, vv] = source.sample(rng);
    u[static_cast<size_t>(t)] = uu;
    v[static_cast<size_t>(t)] = vv;
  }

  DecoderConfig dcfg;
  dcfg.caps = cfg.caps;
  DecodeResult r;
  if (cfg.mode == Mode::Si) {
    TreeCode code(trial_code_seed(cfg.master_seed, trial_index), source.alphabet_u(),
                  TreeCode::Si{cfg.rate});
    r = run(source, u, v, code, nullptr, scores, dcfg, rng);
  } else {
    TreeCode code(trial_code_seed(cfg.master_seed, trial_index), source.alphabet_u(),
                  TreeCode::Jsc{cfg.lambda, channel->input_dist()});
    r = run(source, u, v, code, channel, scores, dcfg, rng);
  }

  TrialResult out;
  out.status = r.status;
  out.abort_step = r.abort_step;
  out.agree_len = std::move(r.agree_len);
  out.pops_per_step = std::move(r.ledger.pops_per_step);
  out.visits_total = r.ledger.visits_total;
  return out;
}

std::optional<FitResult> fit_loglinear(const std::vector<std::pair<double, double>>& points,
                                       double lo, double hi) {
  std::vector<double> xs, ys;
  for (const auto& [d, p] : points) {
    if (d < lo || d > hi || !(p > 0.0)) continue;
    xs.push_back(d);
    ys.push_back(std::log2(p));
  }
  auto fit = least_squares(xs, ys);
  if (!fit) return std::nullopt;
  return FitResult{-fit->slope, fit->std_error, fit->points};
}

std::optional<FitResult> fit_pareto(const std::vector<CcdfPoint>& points, double lo, double hi) {
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    double n = static_cast<double>(p.n);
    if (n < lo || n > hi || !(p.ccdf > 0.0)) continue;
    xs.push_back(std::log2(n));
    ys.push_back(std::log2(p.ccdf));
  }
  auto fit = least_squares(xs, ys);
  if (!fit) return std::nullopt;
  return FitResult{-fit->slope, fit->std_error, fit->points};
}

SimReport simulate(const RunConfig& cfg, int workers) {
  validate_for_simulate(cfg);
  JointSource source = make_source(cfg);
  std::optional<Channel> channel = make_channel(cfg);
  const Channel* ch = channel ? &*channel : nullptr;
  const double bias = resolve_bias(cfg, source, ch);
  const BranchScores scores = ch ? BranchScores(source, *ch, bias) : BranchScores(source, bias);

  SimReport report;
  report.trials_total = cfg.trials;
  report.bias_used = bias;
  report.master_seed = cfg.master_seed;
  report.config_hash = config_hash(cfg);

  const int64_t T = cfg.stream_len;
  std::vector<int> delays = cfg.delays;
  std::sort(delays.begin(), delays.end());
  delays.erase(std::unique(delays.begin(), delays.end()), delays.end());
  const int max_d = delays.empty() ? 0 : delays.back();
  const int64_t warmup = max_d;  // boundary effects at stream start discarded
  const int64_t first_emit = warmup + max_d;

  // Results land in trial-index order regardless of worker scheduling.
  std::vector<TrialResult> results(static_cast<size_t>(cfg.trials));
  if (cfg.trials > 0) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = std::max(1, hw);
    workers = static_cast<int>(std::min<int64_t>(workers, cfg.trials));
    std::atomic<int64_t> next{0};
    auto worker = [&]() {
      while (true) {
        int64_t i = next.fetch_add(1);
        if (i >= cfg.trials) break;
        results[static_cast<size_t>(i)] = run_trial(source, ch, cfg, scores, i);
      }
    };
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<size_t>(workers));
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  for (const auto& r : results) {
    if (r.status == DecodeStatus::CapAborted) {
      ++report.cap_abort_count;
    }
  }
  report.trials_observed = report.trials_total - report.cap_abort_count;

  // P_e(d): pool the indicator {emitted prefix of length m-d differs from
  // the truth} over trials and emit times m in [warmup + max_d, T].
  // Cap-aborted trials are excluded here and accounted separately.
  std::vector<uint64_t> errors(delays.size(), 0);
  uint64_t samples_per_delay = 0;
  std::vector<std::vector<uint32_t>> errors_by_time(
      delays.size(), std::vector<uint32_t>(static_cast<size_t>(T) + 1, 0));
  for (const auto& r : results) {
    if (r.status != DecodeStatus::Completed) continue;
    for (int64_t m = first_emit; m <= T; ++m) {
      uint32_t agree = r.agree_len[static_cast<size_t>(m - 1)];
      for (size_t k = 0; k < delays.size(); ++k) {
        if (agree < static_cast<uint32_t>(m - delays[k])) {
          ++errors[k];
          ++errors_by_time[k][static_cast<size_t>(m)];
        }
      }
    }
  }
  if (report.trials_observed > 0 && first_emit <= T) {
    samples_per_delay = static_cast<uint64_t>(report.trials_observed) *
                        static_cast<uint64_t>(T - first_emit + 1);
  }
  for (size_t k = 0; k < delays.size(); ++k) {
    PeRow row;
    row.d = delays[k];
    row.samples = samples_per_delay;
    row.errors = errors[k];
    row.pe = samples_per_delay > 0 ? static_cast<double>(errors[k]) / samples_per_delay : 0.0;
    report.pe_curve.push_back(row);
    double sup = 0.0;
    if (report.trials_observed > 0) {
      for (int64_t m = first_emit; m <= T; ++m) {
        sup = std::max(sup, static_cast<double>(errors_by_time[k][static_cast<size_t>(m)]) /
                                static_cast<double>(report.trials_observed));
      }
    }
    report.pe_sup_over_n.push_back(sup);
  }

  // Computation CCDF over pooled post-warmup decode steps. A cap abort
  // right-censors its step at the recorded count, which stays correct for
  // every threshold at or below the cap.
  uint32_t max_c = 0;
  for (const auto& r : results) {
    int64_t steps = static_cast<int64_t>(r.pops_per_step.size());
    for (int64_t m = warmup + 1; m <= steps; ++m) {
      max_c = std::max(max_c, r.pops_per_step[static_cast<size_t>(m - 1)]);
    }
  }
  std::vector<uint64_t> hist(static_cast<size_t>(max_c) + 2, 0);
  uint64_t pooled = 0;
  double comp_sum = 0.0;
  for (const auto& r : results) {
    int64_t steps = static_cast<int64_t>(r.pops_per_step.size());
    for (int64_t m = warmup + 1; m <= steps; ++m) {
      uint32_t c = r.pops_per_step[static_cast<size_t>(m - 1)];
      ++hist[c];
      ++pooled;
      comp_sum += c;
      if (r.status == DecodeStatus::CapAborted && m == steps) ++report.censored_steps;
    }
  }
  report.steps_pooled = pooled;
  report.comp_mean = pooled > 0 ? comp_sum / static_cast<double>(pooled) : 0.0;
  if (pooled > 0) {
    std::vector<uint64_t> tail(hist.size() + 1, 0);
    for (size_t c = hist.size(); c-- > 0;) tail[c] = tail[c + 1] + hist[c];
    // log-spaced integer thresholds, eighth-octave steps
    int64_t last = 0;
    for (int j = 0;; ++j) {
      int64_t n = static_cast<int64_t>(std::llround(std::pow(2.0, j / 8.0)));
      if (n <= last) continue;
      if (n > static_cast<int64_t>(max_c)) break;
      last = n;
      report.comp_ccdf.push_back(
          {n, static_cast<double>(tail[static_cast<size_t>(n)]) / static_cast<double>(pooled)});
    }
    if (max_c >= 1 && last < static_cast<int64_t>(max_c)) {
      report.comp_ccdf.push_back(
          {static_cast<int64_t>(max_c),
           static_cast<double>(tail[static_cast<size_t>(max_c)]) / static_cast<double>(pooled)});
    }
  }

  std::vector<std::pair<double, double>> pe_points;
  for (const auto& row : report.pe_curve) pe_points.push_back({double(row.d), row.pe});
  report.delay_fit = fit_loglinear(pe_points, cfg.fit.delay_lo, cfg.fit.delay_hi);
  report.pareto_fit = fit_pareto(report.comp_ccdf, cfg.fit.comp_lo, cfg.fit.comp_hi);
  return report;
}

void write_artifacts(const SimReport& report, const RunConfig& cfg, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string stamp =
      "# config_hash=" + report.config_hash + " master_seed=" + std::to_string(report.master_seed);

  {
    std::ofstream out(fs::path(dir) / "pe.csv");
    out << stamp << "\n";
    out << "d,trials,errors,pe,log2_pe\n";
    for (const auto& row : report.pe_curve) {
      out << row.d << "," << row.samples << "," << row.errors << "," << fmt_double(row.pe) << ","
          << fmt_double(row.pe > 0 ? std::log2(row.pe)
                                   : -std::numeric_limits<double>::infinity())
          << "\n";
    }
  }
  {
    std::ofstream out(fs::path(dir) / "comp.csv");
    out << stamp << "\n";
    out << "n,ccdf,log2_n,log2_ccdf\n";
    for (const auto& p : report.comp_ccdf) {
      out << p.n << "," << fmt_double(p.ccdf) << "," << fmt_double(std::log2(double(p.n))) << ","
          << fmt_double(p.ccdf > 0 ? std::log2(p.ccdf)
                                   : -std::numeric_limits<double>::infinity())
          << "\n";
    }
  }

  ordered_json j;
  j["config_hash"] = report.config_hash;
  j["master_seed"] = report.master_seed;
  j["config"] = ordered_json::parse(canonical_config_json(cfg));
  j["mode"] = cfg.mode == Mode::Si ? "si" : "jsc";
  j["bias_used"] = report.bias_used;
  j["trials"]["total"] = report.trials_total;
  j["trials"]["observed"] = report.trials_observed;
  j["trials"]["cap_aborted"] = report.cap_abort_count;
  j["stream_len"] = cfg.stream_len;
  j["delays"] = cfg.delays;

  // Closed-form reference values alongside the measurements.
  JointSource source = make_source(cfg);
  std::optional<Channel> channel = make_channel(cfg);
  ordered_json theory;
  theory["conditional_entropy"] = conditional_entropy(source);
  ExponentReport er = cfg.mode == Mode::Si
                          ? random_coding_exponent_si(source, cfg.rate)
                          : random_coding_exponent_jsc(source, *channel, cfg.lambda);
  theory["random_coding_exponent"] = {{"exponent", er.exponent},
                                      {"rho_star", er.rho_star},
                                      {"feasible", er.feasible}};
  if (cfg.mode == Mode::Si) {
    theory["rate"] = cfg.rate;
    ParetoRoot pr = pareto_root(source, cfg.rate);
    if (pr.status == RootStatus::Found) {
      theory["pareto_root"] = pr.gamma_star;
    } else {
      theory["pareto_root"] = pr.status == RootStatus::Unbounded ? "unbounded" : "none";
    }
    BiasInterval iv = bias_range_comp_si(source, cfg.rate, 1.0);
    theory["comp_bias_interval_gamma1"] = {{"lower", iv.lower},
                                           {"upper", iv.upper},
                                           {"feasible", iv.feasible}};
    theory["default_bias_gamma1"] = default_bias_si(source, 1.0);
    theory["error_bias_cap_gamma1"] = *bias_cap_error_si(source, 1.0);
  } else {
    theory["lambda"] = cfg.lambda;
    BiasInterval iv = bias_range_comp_jsc(source, *channel, cfg.lambda, 1.0);
    theory["comp_bias_interval_gamma1"] = {{"lower", iv.lower},
                                           {"upper", iv.upper},
                                           {"feasible", iv.feasible}};
    theory["default_bias_gamma1"] = default_bias_jsc(source, *channel, cfg.lambda, 1.0);
    theory["error_bias_cap_gamma1"] = *bias_cap_error_jsc(source, *channel, cfg.lambda, 1.0);
  }
  j["theory"] = theory;

  j["fit"]["delay_exponent"] = fit_to_json(report.delay_fit);
  j["fit"]["pareto_exponent"] = fit_to_json(report.pareto_fit);
  j["pe_sup_over_n"] = report.pe_sup_over_n;
  j["comp"]["steps_pooled"] = report.steps_pooled;
  j["comp"]["censored_steps"] = report.censored_steps;
  j["comp"]["mean"] = report.comp_mean;

  std::ofstream out(std::filesystem::path(dir) / "summary.json");
  out << j.dump(2) << "\n";
}

void write_exponent_artifacts(const RunConfig& cfg, const std::string& dir) {
  namespace fs = std::filesystem;
  validate_for_exponents(cfg);
  JointSource source = make_source(cfg);
  std::optional<Channel> channel = make_channel(cfg);
  fs::create_directories(dir);
  const std::string stamp =
      "# config_hash=" + config_hash(cfg) + " master_seed=" + std::to_string(cfg.master_seed);

  {
    std::ofstream out(fs::path(dir) / "exponents.csv");
    out << stamp << "\n";
    out << "rho,e_si,f_si,g_si,e_s,f_s,g_s";
    if (channel) out << ",e0,f,g";
    out << "\n";
    for (int i = 0; i <= 100; ++i) {
      double rho = i / 100.0;
      out << fmt_double(rho) << "," << fmt_double(e_si(source, rho)) << ","
          << fmt_double(f_si(source, rho)) << "," << fmt_double(g_si(source, rho)) << ","
          << fmt_double(e_s(source.marginal_u(), rho)) << ","
          << fmt_double(f_s(source.marginal_u(), rho)) << ","
          << fmt_double(g_s(source.marginal_u(), rho));
      if (channel) {
        out << "," << fmt_double(e0(*channel, rho)) << "," << fmt_double(f_ch(*channel, rho))
            << "," << fmt_double(g_ch(*channel, rho));
      }
      out << "\n";
    }
  }

  ordered_json j;
  j["config_hash"] = config_hash(cfg);
  j["master_seed"] = cfg.master_seed;
  j["mode"] = cfg.mode == Mode::Si ? "si" : "jsc";
  j["conditional_entropy"] = conditional_entropy(source);
  ExponentReport er = cfg.mode == Mode::Si
                          ? random_coding_exponent_si(source, cfg.rate)
                          : random_coding_exponent_jsc(source, *channel, cfg.lambda);
  j["random_coding_exponent"] = {{"exponent", er.exponent},
                                 {"rho_star", er.rho_star},
                                 {"feasible", er.feasible}};
  auto cap_at = [&](double rho) -> ordered_json {
    auto cap = cfg.mode == Mode::Si ? bias_cap_error_si(source, rho)
                                    : bias_cap_error_jsc(source, *channel, cfg.lambda, rho);
    if (!cap) return "unbounded";
    return *cap;
  };
  if (er.rho_star > 0.0) j["error_bias_cap_at_rho_star"] = cap_at(er.rho_star);
  j["error_bias_cap_gamma1"] = cap_at(1.0);
  BiasInterval iv = cfg.mode == Mode::Si
                        ? bias_range_comp_si(source, cfg.rate, 1.0)
                        : bias_range_comp_jsc(source, *channel, cfg.lambda, 1.0);
  j["comp_bias_interval_gamma1"] = {{"lower", iv.lower},
                                    {"upper", iv.upper},
                                    {"feasible", iv.feasible},
                                    {"nonempty", iv.nonempty()}};
  j["default_bias_gamma1"] = cfg.mode == Mode::Si
                                 ? default_bias_si(source, 1.0)
                                 : default_bias_jsc(source, *channel, cfg.lambda, 1.0);
  if (cfg.mode == Mode::Si) {
    j["rate"] = cfg.rate;
    ParetoRoot pr = pareto_root(source, cfg.rate);
    if (pr.status == RootStatus::Found) {
      j["pareto_root"] = pr.gamma_star;
    } else {
      j["pareto_root"] = pr.status == RootStatus::Unbounded ? "unbounded" : "none";
    }
  } else {
    j["lambda"] = cfg.lambda;
  }
  if (cfg.has_bias && cfg.bias.kind == BiasSpec::Kind::Explicit) {
    JointSource s2 = make_source(cfg);
    const Channel* chp = channel ? &*channel : nullptr;
    double g = resolve_bias(cfg, s2, chp);
    j["configured_bias"] = g;
    auto cap1 = cfg.mode == Mode::Si ? bias_cap_error_si(source, 1.0)
                                     : bias_cap_error_jsc(source, *channel, cfg.lambda, 1.0);
    j["configured_bias_meets_error_cap_gamma1"] = g <= *cap1;
    j["configured_bias_in_comp_interval_gamma1"] = iv.lower < g && g < iv.upper;
  }

  std::ofstream out(fs::path(dir) / "exponents.json");
  out << j.dump(2) << "\n";
}

}  // namespace swsim
