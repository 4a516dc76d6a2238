#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swsim/decoder.hpp"
#include "swsim/models.hpp"

namespace swsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { Si, Jsc };

struct BiasSpec {
  enum class Kind { Explicit, AutoError, AutoComp };
  Kind kind = Kind::Explicit;
  double value = 0.0;  // Explicit
  double param = 0.0;  // rho (AutoError) or gamma (AutoComp)
};

struct FitWindows {
  double delay_lo = 8.0;
  double delay_hi = 40.0;
  double comp_lo = 8.0;
  double comp_hi = 16384.0;
};

/// One run description, parsed from a strict JSON document. Field names
/// and defaults are documented in the README; unknown keys are rejected so
/// a typo cannot silently reconfigure a probability matrix.
struct RunConfig {
  Mode mode = Mode::Si;
  Eigen::MatrixXd pmf;  // rows u, columns v
  double rate = 0.0;    // bit mode
  int lambda = 0;       // symbol mode
  Eigen::MatrixXd channel_w;
  Eigen::VectorXd channel_beta;
  bool has_bias = false;
  BiasSpec bias;
  uint64_t master_seed = 1;
  int64_t seed_count = 0;  // 0: derive exactly one stream per trial
  int64_t trials = -1;     // -1: absent
  int64_t stream_len = -1;
  std::vector<int> delays;  // default 1..40
  DecoderCaps caps;
  FitWindows fit;
  std::string output_dir = "out";
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Checks the fields a given subcommand needs; throws ConfigError.
void validate_for_exponents(const RunConfig& cfg);
void validate_for_simulate(const RunConfig& cfg);

JointSource make_source(const RunConfig& cfg);
std::optional<Channel> make_channel(const RunConfig& cfg);

/// Bias in bits after resolving auto-error:rho / auto-comp:gamma.
double resolve_bias(const RunConfig& cfg, const JointSource& source, const Channel* channel);

/// Canonical serialization (normalized defaults, fixed key order) and its
/// 64-bit FNV-1a hash, embedded in every output artifact.
std::string canonical_config_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace swsim
