#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mathwb::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error. Payloads go to
/// `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mathwb::cli
