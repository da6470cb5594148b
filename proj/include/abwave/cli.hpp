#pragma once

// Command-line front end. Kept in the library so tests can drive it in-process.

#include "abwave/types.hpp"

#include <iosfwd>
#include <string>

namespace abwave::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_domain = 2,
    exit_accuracy = 3,
    exit_criterion = 4,
};

struct RunConfig {
    double alpha = 0.5;
    double r1 = 1.0;
    double r2 = 1.0;
    double theta1 = pi / 6;
    double theta2 = -pi / 6;
    std::string window = "gaussian";  // gaussian | bump
    double lambda_center = 30.0;
    double lambda_halfwidth = 5.0;
    std::string k_max = "auto";  // "auto" or a positive integer
    double tail_tol = 1e-10;
    double t_center = 0.0;      // 0: r1 + r2
    double t_half_width = 0.0;  // 0: command default
    int n = 64;
    double band_lo = 20.0;
    double band_hi = 40.0;
    bool subtract_geometric = true;
    double tolerance = 0.10;        // probe pass/fail on rel_mag_err
    double excluded_guard = 1e-6;   // |dtheta| within this of pi is rejected
    std::string output;             // empty: stdout
    std::string format = "csv";     // tables: csv | json

    // Throws ConfigError on the first invalid field.
    void validate() const;
    double dtheta() const;
    int k_max_value() const;  // 0 for auto
};

// Parses argv, runs one subcommand, writes results to out (or the configured file)
// and diagnostics to err. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace abwave::cli
