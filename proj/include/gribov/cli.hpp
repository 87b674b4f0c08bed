#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gribov {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // module error or failed invariant
inline constexpr int kExitInvalid = 2;  // bad flags or input

enum class OutputFormat { json, csv, svg };

// Flags of every subcommand; each subcommand reads only its own.
struct RunConfig {
    std::string subcommand;
    double mu = 1.0;
    double lambda = 1.0;
    int p = 1;
    int m = 1;
    std::optional<std::size_t> n;  // unset: per-subcommand default
    std::size_t jmax = 200;
    std::size_t nmax = 200;
    double L = 12.0;
    std::size_t nodes = 400;
    double tol = 1e-10;
    std::vector<double> mu_list{0.5, 1.0, 2.0, 4.0};
    std::string method = "both";
    std::string input;
    double ymax = 3.0;
    std::size_t samples = 31;
    std::string kind = "first";
    double x_re = 0.0, x_im = 0.0;
    double xi_re = 0.0, xi_im = 0.0;
    std::optional<OutputFormat> format;  // unset: per-subcommand default
    std::string output;                  // empty: standard output
};

struct ParseOutcome {
    std::optional<RunConfig> config;  // empty when parsing ended the run (help, error)
    int exit_code = kExitOk;
};

// Unknown flags and malformed values are rejected with a JSON error on err.
ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gribov
