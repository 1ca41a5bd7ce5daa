#ifndef HOSIM_CLI_APP_HPP
#define HOSIM_CLI_APP_HPP

#include <string>
#include <vector>

namespace hosim::cli {

// Exit codes: 0 ok, 1 validation (bad input, theorem violations), 2 runtime.
int run_cli(std::vector<std::string> args);
int run_cli(int argc, const char* const* argv);

// The full --help-all text (every subcommand, every flag with its default).
std::string help_text();

}  // namespace hosim::cli

#endif
