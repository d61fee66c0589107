#pragma once

#include <iosfwd>

namespace liespec {

/// Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
/// 3 computation failure (uncertified result, cap exceeded).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace liespec
