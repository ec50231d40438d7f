#pragma once

#include <span>
#include <vector>

#include "cashlot/types.hpp"

namespace cashlot {

/**
 * Discrete demand distribution with finite support [min_demand, max_demand].
 * pmf[k] is the probability of demand (min_demand + k); the pmf sums to one.
 */
struct DemandDistribution {
    Qty min_demand = 0;
    Qty max_demand = 0;
    std::vector<double> pmf;
    std::vector<double> cdf; // cdf[k] = P(demand <= min_demand + k), cdf.back() == 1

    double prob(Qty d) const {
        if (d < min_demand || d > max_demand) return 0.0;
        return pmf[static_cast<size_t>(d - min_demand)];
    }
    double cdf_at(Qty d) const {
        if (d < min_demand) return 0.0;
        if (d >= max_demand) return 1.0;
        return cdf[static_cast<size_t>(d - min_demand)];
    }
    double mean() const;

    // E[min(demand, y)] and E[(y - demand)^+]
    double expected_min(Qty y) const;
    double expected_leftover(Qty y) const;

    void validate() const; // throws std::invalid_argument on a broken pmf
};

// Demand summed over a consecutive run of periods [first_period, last_period],
// built by convolving the per-period distributions.
struct ConvolvedDemand : DemandDistribution {
    int first_period = 0;
    int last_period = 0;
};

/**
 * Poisson pmf truncated to the smallest support [0, D_u] holding at least
 * 1 - tail_mass probability, renormalized to sum to one.
 */
DemandDistribution truncated_poisson(double mean, double tail_mass = 1e-6);

DemandDistribution make_pmf(Qty min_demand, std::vector<double> probs);

ConvolvedDemand convolve(std::span<const DemandDistribution> parts,
                         int first_period = 1);

// Smallest integer y with CDF(y) >= q.
Qty inverse_cdf(const DemandDistribution& dist, double q);

} // namespace cashlot
