#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swsim/config.hpp"
#include "swsim/decoder.hpp"
#include "swsim/exponents.hpp"

namespace swsim {

struct TrialResult {
  DecodeStatus status = DecodeStatus::Completed;
  int64_t abort_step = -1;
  std::vector<uint32_t> agree_len;
  std::vector<uint32_t> pops_per_step;
  uint64_t visits_total = 0;
};

struct PeRow {
  int d = 0;
  uint64_t samples = 0;  // pooled (trial, time) observations
  uint64_t errors = 0;
  double pe = 0.0;
};

struct CcdfPoint {
  int64_t n = 0;
  double ccdf = 0.0;  // P(C >= n) over pooled decode steps
};

struct FitResult {
  double exponent = 0.0;   // negated slope
  double std_error = 0.0;  // standard error of the slope
  int points = 0;
};

struct SimReport {
  int64_t trials_total = 0;
  int64_t trials_observed = 0;
  int64_t cap_abort_count = 0;
  double bias_used = 0.0;
  uint64_t master_seed = 0;
  std::string config_hash;
  std::vector<PeRow> pe_curve;
  std::vector<double> pe_sup_over_n;  // per delay: max over emit times of the per-time rate
  std::vector<CcdfPoint> comp_ccdf;
  uint64_t steps_pooled = 0;
  uint64_t censored_steps = 0;
  double comp_mean = 0.0;
  std::optional<FitResult> delay_fit;
  std::optional<FitResult> pareto_fit;
};

/// Per-trial seeds and codes derive from (master seed, trial index) alone,
/// so any partition of trials across workers reproduces the same pooled
/// statistics bit for bit.
TrialResult run_trial(const JointSource& source, const Channel* channel, const RunConfig& cfg,
                      const BranchScores& scores, int64_t trial_index);

/// Full Monte-Carlo pass: trials in parallel (workers <= 0 picks the
/// hardware count), then the P_e(d) pooling, computation CCDF, and both
/// straight-line fits.
SimReport simulate(const RunConfig& cfg, int workers = 0);

/// Least-squares slope of log2(p) against d over d in [lo, hi]; requires
/// at least four points with p > 0 inside the window. Returns the negated
/// slope and its standard error.
std::optional<FitResult> fit_loglinear(const std::vector<std::pair<double, double>>& points,
                                       double lo, double hi);

/// Least-squares slope of log2 P(C >= n) against log2 n over n in [lo, hi];
/// the negated slope estimates the tail index.
std::optional<FitResult> fit_pareto(const std::vector<CcdfPoint>& points, double lo, double hi);

/// Writes pe.csv, comp.csv and summary.json under dir (created if needed).
/// Every artifact carries the config hash and master seed; a rerun with
/// the same config and seed reproduces the bytes exactly.
void write_artifacts(const SimReport& report, const RunConfig& cfg, const std::string& dir);

/// rho-grid table of the source and channel functions plus the closed-form
/// report block (exponents.csv + exponents.json).
void write_exponent_artifacts(const RunConfig& cfg, const std::string& dir);

}  // namespace swsim
