#pragma once

#include "katzrank/katz.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace katzrank::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_usage = 2,
    exit_domain = 3,
    exit_io = 4,
};

/// Entry point shared by the katzrank binary and the tests. args[0] is the
/// program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Fraction of node pairs ordered the same way by two rankings of the same
/// node set (1.0 for fewer than two nodes). O(n log n).
double concordant_fraction(const std::vector<node> &reference, const std::vector<node> &other);

} // namespace katzrank::cli
