#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qwalk {

enum ExitCode : int {
    exit_success = 0,
    exit_usage = 1,
    exit_numerical = 2,
    exit_verification = 3,
};

/// Environment variable consulted for the default OpenMP thread count.
inline constexpr const char* threads_env_var = "QWALK_NUM_THREADS";

/// Angle given as a multiple of pi: "1/3" -> pi/3, "-0.25" -> -pi/4.
double parse_pi_multiple(const std::string& text);

/// "lo:hi:count" with lo, hi multiples of pi; count >= 1 evenly spaced values.
std::vector<double> parse_axis(const std::string& text);

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// `out` unless an --out path is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace qwalk
