#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace utpc {

struct CriterionResult {
    int number;
    std::string name;
    bool passed;
    std::string detail;
    double seconds;
};

/// Runs the full acceptance suite, printing one pass/fail line per criterion
/// to `log`. All expected values are produced by independent oracles inside
/// the suite; every comparison is exact. Workers > 1 parallelizes the
/// brute-force commutator scans.
std::vector<CriterionResult> run_acceptance(std::ostream & log, int workers = 1);

bool all_passed(const std::vector<CriterionResult> & results);

}
