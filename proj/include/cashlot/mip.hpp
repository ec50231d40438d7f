#pragma once

#include <utility>
#include <vector>

#include "cashlot/policy.hpp"

namespace cashlot {

/**
 * Expected-value replenishment plan: binary order indicators z per period
 * plus the deterministic order-up-to / inventory / cash trajectories that
 * the chosen pattern induces on the expected demands.
 */
struct ReplenishmentPlan {
    std::vector<int> z;
    std::vector<double> order_up_to; // S~_n, equals inventory[n-1] when z_n = 0
    std::vector<double> inventory;   // x~_0..x~_N (index 0 = initial stock)
    std::vector<double> cash;        // R~_0..R~_N
    double objective = 0.0;          // expected terminal cash increment
    std::vector<std::pair<int, int>> cycles; // ordering cycles [first, last]
};

// Enumerate all order patterns (horizon <= 24) and keep the best plan by
// the expected-value objective; ties prefer fewer and later orders.
ReplenishmentPlan solve_plan(const ProblemInstance& inst);

// Expected-value objective of one fixed pattern.
double evaluate_plan(const ProblemInstance& inst, const std::vector<int>& z);

// Newsvendor-style expected profit of serving periods i..n2 from stock y:
// revenue minus c*y against the convolved demand, plus salvage when the
// cycle ends the horizon. No overhead term.
double cycle_profit_L(const ProblemInstance& inst, int i, int n2, Qty y);

struct CyclePolicyEntry {
    int period = 0;
    Qty s = 0;
    Qty S = 0;
    std::map<Qty, Money> C;
};

std::vector<CyclePolicyEntry> cycle_policy(const ProblemInstance& inst,
                                           const ReplenishmentPlan& plan,
                                           std::pair<int, int> cycle);

// Full pipeline: plan, per-cycle parameters, final period from the
// closed-form last-period policy.
ScsPolicy build_policy(const ProblemInstance& inst);

} // namespace cashlot
