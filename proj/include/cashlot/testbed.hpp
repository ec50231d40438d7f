#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cashlot/instance.hpp"

namespace cashlot {

/**
 * One benchmark case: a demand pattern over ten periods combined with a
 * fixed ordering cost, a selling price and an initial cash capacity.
 * Fixed across the bed: c = 1, W = 2, gamma = 0, x0 = 0, R0 = K + c*capacity.
 */
struct TestbedCase {
    std::string pattern;
    Money K = 0;
    Money p = 0;
    int capacity = 0;

    std::string id() const;
    ProblemInstance instance() const;
};

// The full 10-pattern x {10,15,20} x {5,6,7} x {6,8,10} grid (270 cases).
std::vector<TestbedCase> build_cases();

// One case per pattern at the hardest corner (K=20, p=5, capacity=6).
std::vector<TestbedCase> build_subset();

struct CaseResult {
    TestbedCase tc;
    bool ok = false;
    std::string error;
    double reference = 0.0; // SDP optimum at the initial state
    double sdp_mean = 0.0, sdp_gap = 0.0;
    double mip_mean = 0.0, mip_gap = 0.0;
    double solve_seconds = 0.0, total_seconds = 0.0;
};

struct GroupStat {
    std::string label;
    int cases = 0;
    double sdp_max = 0.0, sdp_avg = 0.0;
    double mip_max = 0.0, mip_avg = 0.0;
};

struct GapReport {
    std::vector<CaseResult> results;
    std::vector<GroupStat> groups; // by K, margin, capacity, pattern, overall
    int sdp_gaps_over_1pct = 0;
    int mip_gaps_over_1pct = 0;
    bool mip_monotone_in_K = true; // soft trend check, reported not enforced
};

struct RunOptions {
    long long samples = 100000;
    std::uint64_t seed = 42;
    int jobs = 1;
    double solve_budget_seconds = 600.0;
    bool stable_output = false; // zero out wall times in emitted files
};

GapReport run_cases(const std::vector<TestbedCase>& cases, const RunOptions& opt);

void write_case_csv(const GapReport& report, const RunOptions& opt,
                    const std::string& path);
void write_summary_markdown(const GapReport& report, const RunOptions& opt,
                            const std::string& path);

// Re-aggregate grouped statistics from a per-case CSV (consistency checks).
std::vector<GroupStat> aggregate_from_csv(const std::string& path);

} // namespace cashlot
