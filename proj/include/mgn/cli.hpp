#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mgn {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point of the command-line tool. Returns 0 on success, 2 on usage
/// errors and 1 on runtime failures (reported as a JSON object on err).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace mgn
