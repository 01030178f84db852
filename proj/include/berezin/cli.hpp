#pragma once

#include <iosfwd>

namespace berezin {

/// Exit codes: 0 ok, 1 violations found, 2 bad input or config,
/// 3 dimension mismatch, 4 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace berezin
