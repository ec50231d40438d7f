#include "cashlot/mip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cashlot/sdp.hpp"

namespace cashlot {

namespace {

// Keep threshold scans in step with the solver's tie handling: ordering has
// to win by more than rounding noise.
constexpr double kValueTie = 1e-7;

// Real-valued order capacity along the expected trajectory, same budget rule
// the executed policy faces.
double plan_capacity(const ProblemInstance& inst, double cash) {
    return std::max(0.0, (cash - static_cast<double>(inst.K + inst.W))
                             / static_cast<double>(inst.c));
}

// Level caps used when sizing the policy parameters: the cash budget before
// overhead settles. Execution clamps every order to the strict capacity, so
// these only shape the targets.
double level_capacity(const ProblemInstance& inst, double cash) {
    return std::max(0.0, (cash - static_cast<double>(inst.K))
                             / static_cast<double>(inst.c));
}

std::vector<std::pair<int, int>> find_cycles(const std::vector<int>& z) {
    std::vector<std::pair<int, int>> cycles;
    const int N = static_cast<int>(z.size());
    for (int n = 1; n <= N; ++n) {
        if (!z[static_cast<size_t>(n - 1)]) continue;
        int end = n;
        while (end + 1 <= N && !z[static_cast<size_t>(end)]) ++end;
        cycles.emplace_back(n, end);
    }
    return cycles;
}

struct ForwardResult {
    double objective;
    std::vector<double> order_up_to, inventory, cash;
};

// Deterministic forward pass on the expected demands. An ordering period
// raises the level toward its cycle's cumulative demand as far as cash
// allows; when the budget binds, expected lost sales occur downstream.
ForwardResult forward_evaluate(const ProblemInstance& inst,
                               const std::vector<int>& z,
                               const std::vector<double>& mean_demand,
                               const std::vector<std::pair<int, int>>& cycles) {
    const int N = inst.horizon;
    ForwardResult r;
    r.order_up_to.assign(static_cast<size_t>(N), 0.0);
    r.inventory.assign(static_cast<size_t>(N) + 1, static_cast<double>(inst.x0));
    r.cash.assign(static_cast<size_t>(N) + 1, static_cast<double>(inst.R0));

    size_t ci = 0;
    for (int n = 1; n <= N; ++n) {
        const double x_prev = r.inventory[static_cast<size_t>(n - 1)];
        const double cash_prev = r.cash[static_cast<size_t>(n - 1)];
        double S;
        if (z[static_cast<size_t>(n - 1)]) {
            while (ci < cycles.size() && cycles[ci].first != n) ++ci;
            const auto [first, last] = cycles[ci];
            double cum = 0.0;
            for (int k = first; k <= last; ++k)
                cum += mean_demand[static_cast<size_t>(k - 1)];
            const double cap = x_prev + plan_capacity(inst, cash_prev);
            S = std::max(std::min(cap, cum), x_prev);
        } else {
            S = x_prev;
        }
        const double d = mean_demand[static_cast<size_t>(n - 1)];
        const double sales = std::min(d, S);
        r.order_up_to[static_cast<size_t>(n - 1)] = S;
        r.inventory[static_cast<size_t>(n)] = S - sales;
        r.cash[static_cast<size_t>(n)] =
            cash_prev + static_cast<double>(inst.p) * sales
            - static_cast<double>(inst.K) * z[static_cast<size_t>(n - 1)]
            - static_cast<double>(inst.c) * (S - x_prev)
            - static_cast<double>(inst.W);
    }
    r.objective = r.cash[static_cast<size_t>(N)]
                + static_cast<double>(inst.gamma) * r.inventory[static_cast<size_t>(N)]
                - static_cast<double>(inst.R0);
    return r;
}

int popcount(unsigned mask) {
    int c = 0;
    while (mask) {
        mask &= mask - 1;
        ++c;
    }
    return c;
}

} // namespace

double evaluate_plan(const ProblemInstance& inst, const std::vector<int>& z) {
    if (z.size() != static_cast<size_t>(inst.horizon))
        throw std::invalid_argument("pattern length does not match the horizon");
    std::vector<double> mean_demand;
    for (const auto& d : inst.demands) mean_demand.push_back(d.mean());
    return forward_evaluate(inst, z, mean_demand, find_cycles(z)).objective;
}

ReplenishmentPlan solve_plan(const ProblemInstance& inst) {
    inst.validate();
    const int N = inst.horizon;
    if (N > 24)
        throw std::invalid_argument("plan enumeration supports at most 24 periods");

    std::vector<double> mean_demand;
    mean_demand.reserve(static_cast<size_t>(N));
    for (const auto& d : inst.demands) mean_demand.push_back(d.mean());

    ReplenishmentPlan best;
    bool have_best = false;
    int best_orders = 0;
    // Evaluation order fixes tie-breaking: fewer orders first, then patterns
    // whose orders sit later in the horizon (less cash committed early).
    std::vector<unsigned> order;
    for (unsigned mask = 0; mask < (1u << N); ++mask) order.push_back(mask);
    std::stable_sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
        int pa = popcount(a), pb = popcount(b);
        if (pa != pb) return pa < pb;
        return a > b;
    });

    for (unsigned mask : order) {
        std::vector<int> z(static_cast<size_t>(N));
        for (int n = 0; n < N; ++n) z[static_cast<size_t>(n)] = (mask >> n) & 1u;
        auto cycles = find_cycles(z);
        auto res = forward_evaluate(inst, z, mean_demand, cycles);
        // strict improvement only: the evaluation order makes ties resolve
        // toward fewer orders, then toward ordering later
        if (!have_best || res.objective > best.objective + 1e-9) {
            best.z = z;
            best.order_up_to = std::move(res.order_up_to);
            best.inventory = std::move(res.inventory);
            best.cash = std::move(res.cash);
            best.objective = res.objective;
            best.cycles = std::move(cycles);
            best_orders = popcount(mask);
            have_best = true;
        }
    }
    (void)best_orders;
    return best;
}

double cycle_profit_L(const ProblemInstance& inst, int i, int n2, Qty y) {
    if (!(1 <= i && i <= n2 && n2 <= inst.horizon))
        throw std::invalid_argument("bad cycle bounds");
    std::span<const DemandDistribution> part(inst.demands.data() + (i - 1),
                                             static_cast<size_t>(n2 - i + 1));
    ConvolvedDemand dist = convolve(part, i);
    const Money salvage = (n2 == inst.horizon) ? inst.gamma : 0;
    double acc = 0.0;
    for (Qty d = dist.min_demand; d <= dist.max_demand; ++d) {
        double term = static_cast<double>(inst.p) * std::min(d, y);
        if (salvage != 0)
            term += static_cast<double>(salvage) * std::max(y - d, 0);
        acc += dist.prob(d) * term;
    }
    return acc - static_cast<double>(inst.c) * y;
}

std::vector<CyclePolicyEntry> cycle_policy(const ProblemInstance& inst,
                                           const ReplenishmentPlan& plan,
                                           std::pair<int, int> cycle) {
    const auto [n1, n2] = cycle;
    std::vector<CyclePolicyEntry> entries;

    for (int i = n1; i <= n2; ++i) {
        CyclePolicyEntry e;
        e.period = i;

        std::span<const DemandDistribution> part(inst.demands.data() + (i - 1),
                                                 static_cast<size_t>(n2 - i + 1));
        ConvolvedDemand rest = convolve(part, i);
        const double fractile =
            (n2 == inst.horizon)
                ? static_cast<double>(inst.p - inst.c) / static_cast<double>(inst.p - inst.gamma)
                : static_cast<double>(inst.p - inst.c) / static_cast<double>(inst.p);
        const Qty y_star = inverse_cdf(rest, fractile);

        const double cap = plan.inventory[static_cast<size_t>(i - 1)]
                         + level_capacity(inst, plan.cash[static_cast<size_t>(i - 1)]);
        e.S = static_cast<Qty>(std::floor(
            std::min(cap, static_cast<double>(y_star)) + 1e-9));
        if (e.S < 0) e.S = 0;

        const double LS = cycle_profit_L(inst, i, n2, e.S);
        e.s = e.S;
        for (Qty y = 0; y <= e.S; ++y) {
            if (cycle_profit_L(inst, i, n2, y) >=
                LS - static_cast<double>(inst.K) - kValueTie) {
                e.s = y;
                break;
            }
        }
        if (i == n1 && plan.z[static_cast<size_t>(i - 1)]) {
            // the pattern commits to an order here, so the reorder point
            // must at least cover the planned entry state
            Qty entry = static_cast<Qty>(
                std::floor(plan.inventory[static_cast<size_t>(i - 1)] + 1e-9));
            e.s = std::max(e.s, std::min<Qty>(entry + 1, e.S));
        }

        // Cash thresholds. An order placed here serves the rest of its
        // cycle, so the "never order" screen compares the cycle's best
        // attainable profit against the fixed cost; the threshold scan
        // itself stays on the single-period profit.
        const auto& own = inst.demand(i);
        const double own_fractile =
            static_cast<double>(inst.p - inst.c) / static_cast<double>(inst.p);
        const Qty S1 = inverse_cdf(own, own_fractile);
        auto L1 = [&](Qty y) {
            return static_cast<double>(inst.p) * own.expected_min(y)
                 - static_cast<double>(inst.c) * y;
        };
        // A committed opening order is never screened out: the pattern
        // already priced this cycle, including a possibly loss-leading
        // first order that unlocks later capacity.
        const bool committed = (i == n1) && plan.z[static_cast<size_t>(i - 1)];
        const double cycle_best = cycle_profit_L(inst, i, n2, y_star);
        for (Qty x = 0; x < e.s; ++x) {
            if (!committed &&
                cycle_best <= cycle_profit_L(inst, i, n2, x) +
                                  static_cast<double>(inst.K) + kValueTie) {
                e.C[x] = ScsPolicy::kNeverOrder;
                continue;
            }
            Money best = 0;
            for (Money R = 0;; ++R) {
                Qty b = static_cast<Qty>(
                    std::max<Money>(0, (R - inst.K) / inst.c));
                Qty target = std::min<Qty>(x + b, S1);
                if (L1(x) + static_cast<double>(inst.K) >= L1(target) - kValueTie)
                    best = R;
                if (target >= S1) break;
            }
            e.C[x] = best;
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

ScsPolicy build_policy(const ProblemInstance& inst) {
    ReplenishmentPlan plan = solve_plan(inst);

    ScsPolicy policy;
    policy.horizon = inst.horizon;
    policy.periods.resize(static_cast<size_t>(inst.horizon));

    for (const auto& cyc : plan.cycles) {
        for (auto& e : cycle_policy(inst, plan, cyc)) {
            auto& rule = policy.periods[static_cast<size_t>(e.period - 1)];
            rule.s = e.s;
            rule.S = e.S;
            rule.C = std::move(e.C);
        }
    }

    // The final period always follows the closed-form policy.
    LastPeriodPolicy lp = last_period_policy(inst);
    auto& last = policy.periods[static_cast<size_t>(inst.horizon - 1)];
    last.s = lp.s;
    last.S = lp.S;
    last.C.clear();
    for (Qty x = 0; x < lp.s; ++x) last.C[x] = lp.C[static_cast<size_t>(x)];

    return policy;
}

} // namespace cashlot
