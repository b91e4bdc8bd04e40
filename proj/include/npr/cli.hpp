#ifndef NPR_CLI_HPP
#define NPR_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace npr::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInconsistent = 1;
inline constexpr int kParseError = 2;
inline constexpr int kUndefined = 3;
inline constexpr int kNumericFailure = 4;

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Renders a real with 9 significant digits (round-half-even), "-0" folded
/// into "0"; used for every number the CLI prints.
std::string format_real(double v);

}  // namespace npr::cli

#endif
