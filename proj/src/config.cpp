#include "swsim/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "swsim/exponents.hpp"

namespace swsim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown field \"" + it.key() + "\" in " + where);
    }
  }
}

double as_number(const json& j, const std::string& name) {
  if (!j.is_number()) throw ConfigError("field \"" + name + "\" must be a number");
  return j.get<double>();
}

int64_t as_integer(const json& j, const std::string& name) {
  if (!j.is_number_integer()) throw ConfigError("field \"" + name + "\" must be an integer");
  return j.get<int64_t>();
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw ConfigError("field \"" + name + "\" must be a non-empty matrix");
  size_t cols = 0;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty())
      throw ConfigError("field \"" + name + "\" must be a matrix of rows");
    if (cols == 0) cols = row.size();
    if (row.size() != cols)
      throw ConfigError("field \"" + name + "\" has ragged rows");
  }
  Eigen::MatrixXd m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    for (size_t c = 0; c < cols; ++c) {
      const auto& cell = j[r][c];
      if (!cell.is_number())
        throw ConfigError("field \"" + name + "\" row " + std::to_string(r) + " has a non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cell.get<double>();
    }
  }
  return m;
}

Eigen::VectorXd as_vector(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw ConfigError("field \"" + name + "\" must be a non-empty vector");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("field \"" + name + "\" has a non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

BiasSpec parse_bias(const json& j) {
  BiasSpec spec;
  if (j.is_number()) {
    spec.kind = BiasSpec::Kind::Explicit;
    spec.value = j.get<double>();
    return spec;
  }
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    std::string prefix_err = "bias string must be \"auto-error:RHO\" or \"auto-comp:GAMMA\"";
    std::string::size_type colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError(prefix_err);
    std::string head = s.substr(0, colon);
    double param;
    try {
      param = std::stod(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError(prefix_err);
    }
    if (!(param > 0.0 && param <= 1.0))
      throw ConfigError("bias auto parameter must lie in (0, 1]");
    if (head == "auto-error") {
      spec.kind = BiasSpec::Kind::AutoError;
    } else if (head == "auto-comp") {
      spec.kind = BiasSpec::Kind::AutoComp;
    } else {
      throw ConfigError(prefix_err);
    }
    spec.param = param;
    return spec;
  }
  throw ConfigError("bias must be a number or an auto string");
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(root,
                 {"mode", "source", "rate", "lambda", "channel", "bias", "seeds", "trials",
                  "stream_len", "delays", "caps", "fit", "output_dir"},
                 "config root");

  RunConfig cfg;
  if (!root.contains("mode")) throw ConfigError("missing required field \"mode\"");
  std::string mode = root["mode"].is_string() ? root["mode"].get<std::string>() : "";
  if (mode == "si") {
    cfg.mode = Mode::Si;
  } else if (mode == "jsc") {
    cfg.mode = Mode::Jsc;
  } else {
    throw ConfigError("mode must be \"si\" or \"jsc\"");
  }

  if (!root.contains("source")) throw ConfigError("missing required field \"source\"");
  reject_unknown(root["source"], {"pmf"}, "source");
  if (!root["source"].contains("pmf")) throw ConfigError("missing required field \"source.pmf\"");
  cfg.pmf = as_matrix(root["source"]["pmf"], "source.pmf");

  if (cfg.mode == Mode::Si) {
    if (!root.contains("rate")) throw ConfigError("si mode requires field \"rate\"");
    if (root.contains("lambda")) throw ConfigError("si mode does not take \"lambda\"");
    if (root.contains("channel")) throw ConfigError("si mode does not take \"channel\"");
    cfg.rate = as_number(root["rate"], "rate");
    if (!(cfg.rate >= 0.0)) throw ConfigError("rate must be >= 0");
  } else {
    if (!root.contains("lambda")) throw ConfigError("jsc mode requires field \"lambda\"");
    if (root.contains("rate")) throw ConfigError("jsc mode does not take \"rate\"");
    if (!root.contains("channel")) throw ConfigError("jsc mode requires field \"channel\"");
    cfg.lambda = static_cast<int>(as_integer(root["lambda"], "lambda"));
    if (cfg.lambda < 1) throw ConfigError("lambda must be a positive integer");
    reject_unknown(root["channel"], {"W", "beta"}, "channel");
    if (!root["channel"].contains("W") || !root["channel"].contains("beta"))
      throw ConfigError("channel requires fields \"W\" and \"beta\"");
    cfg.channel_w = as_matrix(root["channel"]["W"], "channel.W");
    cfg.channel_beta = as_vector(root["channel"]["beta"], "channel.beta");
  }

  if (root.contains("bias")) {
    cfg.has_bias = true;
    cfg.bias = parse_bias(root["bias"]);
  }

  if (root.contains("seeds")) {
    reject_unknown(root["seeds"], {"master", "count"}, "seeds");
    if (!root["seeds"].contains("master"))
      throw ConfigError("seeds requires field \"master\"");
    int64_t m = as_integer(root["seeds"]["master"], "seeds.master");
    if (m < 0) throw ConfigError("seeds.master must be nonnegative");
    cfg.master_seed = static_cast<uint64_t>(m);
    if (root["seeds"].contains("count")) {
      cfg.seed_count = as_integer(root["seeds"]["count"], "seeds.count");
      if (cfg.seed_count < 0) throw ConfigError("seeds.count must be nonnegative");
    }
  }

  if (root.contains("trials")) {
    cfg.trials = as_integer(root["trials"], "trials");
    if (cfg.trials < 0) throw ConfigError("trials must be >= 0");
  }
  if (root.contains("stream_len")) {
    cfg.stream_len = as_integer(root["stream_len"], "stream_len");
    if (cfg.stream_len < 1) throw ConfigError("stream_len must be >= 1");
  }

  if (root.contains("delays")) {
    if (!root["delays"].is_array() || root["delays"].empty())
      throw ConfigError("delays must be a non-empty list of integers");
    for (const auto& d : root["delays"]) {
      int64_t di = as_integer(d, "delays");
      if (di < 1) throw ConfigError("delays must be >= 1");
      cfg.delays.push_back(static_cast<int>(di));
    }
  } else {
    for (int d = 1; d <= 40; ++d) cfg.delays.push_back(d);
  }

  if (root.contains("caps")) {
    reject_unknown(root["caps"], {"max_pops_per_step", "max_stack"}, "caps");
    if (root["caps"].contains("max_pops_per_step")) {
      cfg.caps.max_pops_per_step = as_integer(root["caps"]["max_pops_per_step"], "caps.max_pops_per_step");
    }
    if (root["caps"].contains("max_stack")) {
      cfg.caps.max_stack = as_integer(root["caps"]["max_stack"], "caps.max_stack");
    }
    if (cfg.caps.max_pops_per_step < 1 || cfg.caps.max_stack < 1)
      throw ConfigError("caps must be positive");
  }

  if (root.contains("fit")) {
    reject_unknown(root["fit"], {"delay_window", "comp_window"}, "fit");
    auto window = [&](const char* key, double* lo, double* hi) {
      if (!root["fit"].contains(key)) return;
      const auto& w = root["fit"][key];
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
        throw ConfigError(std::string("fit.") + key + " must be [lo, hi]");
      *lo = w[0].get<double>();
      *hi = w[1].get<double>();
      if (!(*lo < *hi)) throw ConfigError(std::string("fit.") + key + " must have lo < hi");
    };
    window("delay_window", &cfg.fit.delay_lo, &cfg.fit.delay_hi);
    window("comp_window", &cfg.fit.comp_lo, &cfg.fit.comp_hi);
  }

  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string()) throw ConfigError("output_dir must be a string");
    cfg.output_dir = root["output_dir"].get<std::string>();
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_for_exponents(const RunConfig& cfg) {
  if (cfg.mode == Mode::Si && !(cfg.rate >= 0.0)) throw ConfigError("rate must be >= 0");
}

void validate_for_simulate(const RunConfig& cfg) {
  if (!cfg.has_bias) throw ConfigError("simulate requires field \"bias\"");
  if (cfg.trials < 0) throw ConfigError("simulate requires field \"trials\"");
  if (cfg.stream_len < 1) throw ConfigError("simulate requires field \"stream_len\"");
  int max_d = 0;
  for (int d : cfg.delays) max_d = std::max(max_d, d);
  if (max_d >= cfg.stream_len)
    throw ConfigError("max delay must be smaller than stream_len");
  if (2 * max_d >= cfg.stream_len)
    throw ConfigError("stream_len must exceed twice the maximum delay (warmup)");
  if (cfg.seed_count != 0 && cfg.seed_count < cfg.trials)
    throw ConfigError("seeds.count must cover the trial count");
}

JointSource make_source(const RunConfig& cfg) {
  try {
    return JointSource(cfg.pmf);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::optional<Channel> make_channel(const RunConfig& cfg) {
  if (cfg.mode == Mode::Si) return std::nullopt;
  try {
    return Channel(cfg.channel_w, cfg.channel_beta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

double resolve_bias(const RunConfig& cfg, const JointSource& source, const Channel* channel) {
  if (!cfg.has_bias) throw ConfigError("bias is not configured");
  switch (cfg.bias.kind) {
    case BiasSpec::Kind::Explicit:
      return cfg.bias.value;
    case BiasSpec::Kind::AutoError: {
      auto cap = (cfg.mode == Mode::Si)
                     ? bias_cap_error_si(source, cfg.bias.param)
                     : bias_cap_error_jsc(source, *channel, cfg.lambda, cfg.bias.param);
      return *cap;  // param validated in (0,1], cap is finite
    }
    case BiasSpec::Kind::AutoComp:
      return (cfg.mode == Mode::Si)
                 ? default_bias_si(source, cfg.bias.param)
                 : default_bias_jsc(source, *channel, cfg.lambda, cfg.bias.param);
  }
  throw ConfigError("unreachable bias kind");
}

std::string canonical_config_json(const RunConfig& cfg) {
  ordered_json j;
  j["mode"] = cfg.mode == Mode::Si ? "si" : "jsc";
  ordered_json pmf = ordered_json::array();
  for (int r = 0; r < cfg.pmf.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < cfg.pmf.cols(); ++c) row.push_back(cfg.pmf(r, c));
    pmf.push_back(row);
  }
  j["source"]["pmf"] = pmf;
  if (cfg.mode == Mode::Si) {
    j["rate"] = cfg.rate;
  } else {
    j["lambda"] = cfg.lambda;
    ordered_json w = ordered_json::array();
    for (int r = 0; r < cfg.channel_w.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (int c = 0; c < cfg.channel_w.cols(); ++c) row.push_back(cfg.channel_w(r, c));
      w.push_back(row);
    }
    ordered_json beta = ordered_json::array();
    for (int i = 0; i < cfg.channel_beta.size(); ++i) beta.push_back(cfg.channel_beta(i));
    j["channel"]["W"] = w;
    j["channel"]["beta"] = beta;
  }
  if (cfg.has_bias) {
    switch (cfg.bias.kind) {
      case BiasSpec::Kind::Explicit:
        j["bias"] = cfg.bias.value;
        break;
      case BiasSpec::Kind::AutoError:
        j["bias"] = "auto-error:" + std::to_string(cfg.bias.param);
        break;
      case BiasSpec::Kind::AutoComp:
        j["bias"] = "auto-comp:" + std::to_string(cfg.bias.param);
        break;
    }
  }
  j["seeds"]["master"] = cfg.master_seed;
  if (cfg.seed_count != 0) j["seeds"]["count"] = cfg.seed_count;
  if (cfg.trials >= 0) j["trials"] = cfg.trials;
  if (cfg.stream_len >= 1) j["stream_len"] = cfg.stream_len;
  j["delays"] = cfg.delays;
  j["caps"]["max_pops_per_step"] = cfg.caps.max_pops_per_step;
  j["caps"]["max_stack"] = cfg.caps.max_stack;
  j["fit"]["delay_window"] = {cfg.fit.delay_lo, cfg.fit.delay_hi};
  j["fit"]["comp_window"] = {cfg.fit.comp_lo, cfg.fit.comp_hi};
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  uint64_t h = fnv1a(canonical_config_json(cfg));
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace swsim
