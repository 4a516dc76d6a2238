#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "swsim/config.hpp"
#include "swsim/verify.hpp"

namespace swsim {

// Exit codes shared by the CLI: 0 ok, 2 config error, 3 degenerate run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDegenerate = 3;

struct CommandOverrides {
  std::optional<std::string> out_dir;
  std::optional<uint64_t> seed;
  int workers = 0;  // <= 0: hardware count
};

int cmd_exponents(const std::string& config_path, const CommandOverrides& ov, std::ostream& out,
                  std::ostream& err);
int cmd_simulate(const std::string& config_path, const CommandOverrides& ov, std::ostream& out,
                 std::ostream& err);
int cmd_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace swsim
