#pragma once

// The acceptance suite: ten property- and oracle-based checks over all modules.

#include <string>
#include <vector>

namespace abwave {

struct CriterionResult {
    int criterion_id = 0;
    std::string description;
    std::string paper_anchor;
    double measured = 0.0;   // worst observed error (or worst error/tolerance ratio for multi-part checks)
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;      // per-part numbers, or the exception that stopped the check
};

enum class Suite { fast, full };

Suite parse_suite(const std::string& name);  // "fast" or "full"; ConfigError otherwise
std::vector<int> suite_criteria(Suite suite);

// Runs one criterion (1..10). Library exceptions are caught and reported as a failure.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_suite(Suite suite);

}  // namespace abwave
