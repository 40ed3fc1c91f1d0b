// Built-in oracle suite behind the `validate` subcommand. Each check recomputes
// a quantity through an independent path (direct formulas, grid scans) and
// compares against the library implementation.

#pragma once

#include <string>
#include <vector>

namespace ctsf {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CheckResult> run_selfchecks();

}  // namespace ctsf
