#pragma once

#include <string>
#include <vector>

#include "cashlot/demand.hpp"
#include "cashlot/types.hpp"

namespace cashlot {

/**
 * One planning problem: a retailer ordering a single item over a finite
 * horizon under a per-period cash constraint and a fixed ordering cost.
 *
 * Money amounts and item counts are integers; 0 <= gamma < c < p.
 */
struct ProblemInstance {
    int horizon = 0;          // N >= 1
    Money K = 0;              // fixed ordering cost per order
    Money c = 0;              // unit purchase cost
    Money p = 0;              // unit selling price
    Money gamma = 0;          // unit salvage value of terminal stock
    Money W = 0;              // per-period overhead, paid unconditionally
    Qty x0 = 0;               // initial inventory
    Money R0 = 0;             // initial cash
    std::vector<DemandDistribution> demands; // one per period

    void validate() const; // throws std::invalid_argument

    const DemandDistribution& demand(int period) const {
        return demands[static_cast<size_t>(period - 1)];
    }
};

// Largest affordable order quantity with cash R: max{0, floor((R-K-W)/c)}.
Qty order_capacity(const ProblemInstance& inst, Money R);

// Realized cash change of period n when ordering from x up to y and demand
// is d: p*min(d,y) - K*[y>x] - c*(y-x) - W. Requires y >= x.
Money cash_increment(const ProblemInstance& inst, int period, Qty x, Qty y, Qty d);

// Lost-sales stock carryover max{y - d, 0}.
Qty inventory_transition(Qty y, Qty d);

// Single-period expected profit L(y) = E[p*min(demand,y)] - c*y - W.
double expected_profit_L(const ProblemInstance& inst, int period, Qty y);

// JSON instance files: {horizon, K, c, p, gamma, W, x0, R0, demand:{...}}
ProblemInstance instance_from_json(const std::string& text);
ProblemInstance load_instance(const std::string& path);
std::string instance_to_json(const ProblemInstance& inst);

} // namespace cashlot
