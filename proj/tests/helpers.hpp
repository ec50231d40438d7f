#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "cashlot/instance.hpp"

namespace cashlot::testing {

// ---------------------------------------------------------------------------
// Independent brute-force oracle: a plain backward recursion over states and
// actions, written without any of the solver's reformulations. Only suitable
// for tiny instances.
// ---------------------------------------------------------------------------
class BruteForce {
public:
    explicit BruteForce(const ProblemInstance& inst) : inst_(inst) {}

    double value(int period, Qty x, Money R) {
        if (period > inst_.horizon)
            return static_cast<double>(inst_.gamma) * x;
        auto key = std::tuple<int, Qty, Money>(period, x, R);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        const auto& dist = inst_.demand(period);
        Money budget = R - inst_.K - inst_.W;
        Qty cap = budget >= 0 ? static_cast<Qty>(budget / inst_.c) : 0;
        double best = -1e300;
        for (Qty y = x; y <= x + cap; ++y) {
            double acc = 0.0;
            for (Qty d = dist.min_demand; d <= dist.max_demand; ++d) {
                Money fixed = (y > x) ? inst_.K : 0;
                Money dr = inst_.p * std::min(d, y) - fixed - inst_.c * (y - x) - inst_.W;
                acc += dist.prob(d) *
                       (static_cast<double>(dr) +
                        value(period + 1, std::max(y - d, 0), R + dr));
            }
            best = std::max(best, acc);
        }
        memo_.emplace(key, best);
        return best;
    }

private:
    const ProblemInstance& inst_;
    std::map<std::tuple<int, Qty, Money>, double> memo_;
};

// ---------------------------------------------------------------------------
// Deterministic pseudo-random small instances for property checks.
// ---------------------------------------------------------------------------
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    long long range(long long lo, long long hi) { // inclusive
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Random instance with N <= max_horizon periods and demand support <= 12.
inline ProblemInstance random_small_instance(Rng& rng, int max_horizon = 4) {
    ProblemInstance inst;
    inst.horizon = static_cast<int>(rng.range(1, max_horizon));
    inst.c = rng.range(1, 3);
    inst.p = inst.c + rng.range(1, 5);
    inst.gamma = rng.range(0, inst.c - 1);
    inst.K = rng.range(0, 12);
    inst.W = rng.range(0, 3);
    inst.x0 = static_cast<Qty>(rng.range(0, 5));
    inst.R0 = rng.range(0, 50);
    for (int n = 0; n < inst.horizon; ++n) {
        if (rng.unit() < 0.5) {
            double mean = 0.5 + 3.5 * rng.unit();
            inst.demands.push_back(truncated_poisson(mean, 1e-3));
        } else {
            Qty lo = static_cast<Qty>(rng.range(0, 3));
            Qty width = static_cast<Qty>(rng.range(0, std::min<long long>(12 - lo, 6)));
            std::vector<double> probs(static_cast<size_t>(width) + 1);
            double sum = 0.0;
            for (auto& q : probs) {
                q = 0.05 + rng.unit();
                sum += q;
            }
            for (auto& q : probs) q /= sum;
            inst.demands.push_back(make_pmf(lo, std::move(probs)));
        }
    }
    inst.validate();
    return inst;
}

// The four-period worked example with demand means 20, 7, 2, 14.
inline ProblemInstance worked_example() {
    ProblemInstance inst;
    inst.horizon = 4;
    inst.K = 24;
    inst.c = 1;
    inst.p = 5;
    inst.gamma = 0;
    inst.W = 2;
    inst.x0 = 0;
    inst.R0 = 33;
    for (double m : {20.0, 7.0, 2.0, 14.0})
        inst.demands.push_back(truncated_poisson(m));
    return inst;
}

// The four-period example with demand means 9, 13, 20, 16 whose first-period
// action table is checked cell by cell.
inline ProblemInstance action_table_example() {
    ProblemInstance inst;
    inst.horizon = 4;
    inst.K = 20;
    inst.c = 1;
    inst.p = 5;
    inst.gamma = 0;
    inst.W = 2;
    inst.x0 = 0;
    inst.R0 = 49;
    for (double m : {9.0, 13.0, 20.0, 16.0})
        inst.demands.push_back(truncated_poisson(m));
    return inst;
}

} // namespace cashlot::testing
