#include "cashlot/extract.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace cashlot {

ScsPolicy extract(const SdpSolution& sdp, const ProblemInstance& inst) {
    if (sdp.horizon != inst.horizon)
        throw std::invalid_argument("solution horizon does not match instance");
    const StateGrid& grid = sdp.grid;
    if (!grid.contains(inst.x0, inst.R0))
        throw std::invalid_argument("initial state outside the solved grid");

    ScsPolicy policy;
    policy.horizon = inst.horizon;
    policy.periods.resize(static_cast<size_t>(inst.horizon));

    for (int n = 1; n <= inst.horizon; ++n) {
        auto& rule = policy.periods[static_cast<size_t>(n - 1)];

        if (n == 1) {
            Qty q = sdp.action_at(1, inst.x0, inst.R0);
            if (q > 0) {
                rule.s = inst.x0 + 1;
                rule.S = inst.x0 + q;
                rule.C[inst.x0] = 0;
            } else {
                rule.s = inst.x0;
                rule.S = inst.x0;
            }
            continue;
        }

        if (n == inst.horizon) {
            LastPeriodPolicy lp = last_period_policy(inst);
            rule.s = lp.s;
            rule.S = lp.S;
            for (Qty x = 0; x < lp.s; ++x) rule.C[x] = lp.C[static_cast<size_t>(x)];
            if (rule.S < rule.s) rule.S = rule.s;
            continue;
        }

        const auto& actions = sdp.action[static_cast<size_t>(n - 1)];
        const size_t nr = grid.r_count();

        Qty s = grid.x_max + 1;
        for (Qty x = 0; x <= grid.x_max; ++x) {
            const Qty* row = actions.data() + static_cast<size_t>(x) * nr;
            if (std::all_of(row, row + nr, [](Qty q) { return q == 0; })) {
                s = x;
                break;
            }
        }
        rule.s = s;

        std::unordered_map<Qty, long long> level_count;
        for (Qty x = 0; x <= grid.x_max; ++x) {
            const Qty* row = actions.data() + static_cast<size_t>(x) * nr;
            for (size_t ri = 0; ri < nr; ++ri)
                if (row[ri] > 0) ++level_count[x + row[ri]];
        }
        Qty S = 0;
        long long best = 0;
        for (const auto& [level, count] : level_count)
            if (count > best || (count == best && level < S)) {
                best = count;
                S = level;
            }
        rule.S = std::max(S, rule.s); // keep s <= S coherent on degenerate grids

        for (Qty x = 0; x < rule.s && x <= grid.x_max; ++x) {
            const Qty* row = actions.data() + static_cast<size_t>(x) * nr;
            for (size_t ri = nr; ri-- > 0;) {
                if (row[ri] == 0) {
                    rule.C[x] = grid.r_min + static_cast<Money>(ri);
                    break;
                }
            }
        }
    }
    return policy;
}

} // namespace cashlot
