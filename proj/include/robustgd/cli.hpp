#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robustgd {

/// Entry point of the `robustgd` tool. Exit codes: 0 success, 1 usage
/// error, 2 runtime error. args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robustgd
