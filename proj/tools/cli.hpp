#pragma once

// Command-line front end: lens-exact, verify, alpha and sweep. Everything the
// binary does is reachable through run() so tests can drive it in-process.

#include <filesystem>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace faberlab::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_runtime = 1,
    exit_config = 2,
    exit_identity = 3,
    exit_tolerance = 4,
};

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct RunConfig
{
    std::string command;
    unsigned n_max = 0;
    unsigned precision_bits = 256;
    double tol = 0;
    std::vector<std::string> curves; // spec files, or the built-in names lens / circle
    std::filesystem::path out = ".";
    std::set<Format> formats{Format::csv};
    unsigned exact_max = 4000;       // lens-exact: largest n handled in exact arithmetic
    unsigned decomposition_max = 16; // alpha: decomposition residual for n <= decomposition_max
    unsigned limit_n_max = 2000;     // sweep: 0 skips the lens limit report
};

/// Parses the arguments after the program name. Throws ConfigError on any
/// malformed, unknown or out-of-range setting.
RunConfig parse_command_line(const std::vector<std::string>& args);

/// Runs a parsed configuration, writing files under config.out and a short
/// summary to `log`. Returns one of the ExitCode values.
int execute(const RunConfig& config, std::ostream& log);

/// parse_command_line + execute with exit-code mapping; help goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace faberlab::cli
