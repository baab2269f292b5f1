#pragma once

#include <iosfwd>

namespace inferbench {

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 ok, 1 usage, 2 data error, 3 shortfall.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inferbench
