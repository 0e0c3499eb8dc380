#pragma once

#include "blinkforge/error.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace blinkforge::cli {

inline constexpr std::string_view kVersion = "0.1.0";

// 0 success, 2 usage error, 3 data validation error, 4 internal error.
int exit_code_for(ErrorKind kind) noexcept;

// Runs one pipeline. `args` excludes the program name. Every pipeline
// writes <primary output>.manifest.json next to its main output.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// Splices the flags of a --config JSON object in after the subcommand
// words, ahead of the explicit flags (explicit flags win). Returns the
// expanded argument list without the --config pair.
struct ExpandedArgs {
  std::vector<std::string> args;
  std::string config_path;  // empty when no --config was given
  std::string config_text;
};
ExpandedArgs expand_config(const std::vector<std::string>& args);

}  // namespace blinkforge::cli
