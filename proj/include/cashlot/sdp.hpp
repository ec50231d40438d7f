#pragma once

#include <cstddef>
#include <vector>

#include "cashlot/instance.hpp"

namespace cashlot {

/**
 * Rectangular state grid shared by all periods: inventory in [0, x_max],
 * cash in [r_min, r_max]. All reachable states from (x0, R0) stay inside.
 */
struct StateGrid {
    Qty x_max = 0;
    Money r_min = 0;
    Money r_max = 0;

    size_t x_count() const { return static_cast<size_t>(x_max) + 1; }
    size_t r_count() const { return static_cast<size_t>(r_max - r_min) + 1; }
    size_t cells() const { return x_count() * r_count(); }
    bool contains(Qty x, Money R) const {
        return x >= 0 && x <= x_max && R >= r_min && R <= r_max;
    }
    size_t index(Qty x, Money R) const {
        return static_cast<size_t>(x) * r_count() + static_cast<size_t>(R - r_min);
    }
};

StateGrid default_grid(const ProblemInstance& inst);

struct SolveOptions {
    size_t max_cells = 300'000'000; // guard against runaway grids
    int threads = 0;                // 0 = hardware concurrency
};

/**
 * Value and argmax tables of the backward induction, one pair per period.
 * value[n-1] holds F_n over the grid (expected cash increment over periods
 * n..N plus terminal salvage); action[n-1] holds the optimal order quantity,
 * ties broken toward the smaller order.
 */
struct SdpSolution {
    StateGrid grid;
    int horizon = 0;
    Money salvage = 0;
    std::vector<std::vector<double>> value;
    std::vector<std::vector<Qty>> action;

    double value_at(int period, Qty x, Money R) const {
        return value[static_cast<size_t>(period - 1)][grid.index(x, R)];
    }
    Qty action_at(int period, Qty x, Money R) const {
        return action[static_cast<size_t>(period - 1)][grid.index(x, R)];
    }
    double terminal_value(Qty x) const { return static_cast<double>(salvage) * x; }
};

SdpSolution solve(const ProblemInstance& inst, const SolveOptions& opt = {});

/**
 * Closed-form policy of the final period: order-up-to level S at the
 * critical fractile (p-c)/(p-gamma), reorder point s, and per-inventory
 * cash thresholds C[x] for x < s.
 */
struct LastPeriodPolicy {
    Qty S = 0;
    Qty s = 0;
    std::vector<Money> C; // C[x] for x in [0, s)
};

LastPeriodPolicy last_period_policy(const ProblemInstance& inst);

// Final-period optimal order: min{S-x, B(R)} when x < s and R > C(x), else 0.
Qty optimal_last_period_order(const ProblemInstance& inst,
                              const LastPeriodPolicy& pol, Qty x, Money R);
Qty optimal_last_period_order(const ProblemInstance& inst, Qty x, Money R);

// Reorder-point upper bound for period n from the demand convolved to the
// end of the horizon: above it, never order regardless of cash.
Qty s_threshold(const ProblemInstance& inst, int period);

// Cash level below which not ordering is provably optimal for inventory x.
Money conservative_C(const ProblemInstance& inst, int period, Qty x);

// Single-period profit with terminal salvage: L'(y) = L(y) + gamma*E[(y-xi)^+].
double last_period_profit(const ProblemInstance& inst, Qty y);

void dump_tables_csv(const SdpSolution& sol, const std::string& path);

} // namespace cashlot
