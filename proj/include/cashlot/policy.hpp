#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "cashlot/instance.hpp"

namespace cashlot {

/**
 * Parametric (s, C(x), S) ordering policy: in period n, order up to S_n
 * (capped by cash capacity) iff inventory x < s_n and cash R > C_n(x);
 * otherwise do not order. C defaults to K for inventory levels without a
 * tabulated threshold; kNeverOrder marks levels that must never order.
 */
struct ScsPolicy {
    static constexpr Money kNeverOrder = std::numeric_limits<Money>::max() / 4;

    struct PeriodRule {
        Qty s = 0;
        Qty S = 0;
        std::map<Qty, Money> C; // thresholds for x < s
    };

    int horizon = 0;
    std::vector<PeriodRule> periods;

    const PeriodRule& rule(int period) const {
        return periods[static_cast<size_t>(period - 1)];
    }
};

Qty policy_order(const ScsPolicy& policy, int period, Qty x, Money R,
                 const ProblemInstance& inst);

std::string policy_to_json(const ScsPolicy& policy);
ScsPolicy policy_from_json(const std::string& text);
ScsPolicy load_policy(const std::string& path);
void save_policy(const ScsPolicy& policy, const std::string& path);

} // namespace cashlot
