#pragma once

#include "blowup/reduction.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace blowup::cli {

enum class Subcommand { profile, solve, bifurcate, asympt, verify };
enum class Format { csv, json };

struct Sweep {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::size_t n = 0;
    bool log_spaced = true;
};

struct RunConfig {
    Subcommand subcommand = Subcommand::solve;
    ProblemParams params;
    /// q values whose norms the profile subcommand reports.
    std::vector<double> q_values;
    std::size_t n_points = kDefaultProfilePoints;
    std::optional<double> u_max;
    /// bifurcate: the λ grid. asympt: decades between lambda_min and lambda_max.
    std::optional<Sweep> sweep;
    double tol = kDefaultRootTol;
    std::optional<std::string> output_path;
    Format format = Format::csv;
    bool numeric_norm = false;
    unsigned threads = 0;  // 0: hardware concurrency
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

/// Executes one subcommand and writes its artifact to config.output_path or
/// `out`. Diagnostics go to `err`. Returns 0, 2 (invalid parameters) or
/// 3 (numerical failure, or a failed verification check).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace blowup::cli
