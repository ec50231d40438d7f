#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "cashlot/policy.hpp"
#include "cashlot/sdp.hpp"

namespace cashlot {

/**
 * Monte Carlo estimate of the expected terminal cash increment under a
 * policy. Deterministic for a fixed (instance, policy, samples, seed):
 * demands are drawn by inverse-CDF from stateless splitmix64 streams keyed
 * by (seed, sample, period), so batch order cannot change the draw.
 */
struct SimulationReport {
    double mean = 0.0;
    double std_error = 0.0;
    long long samples = 0;
    std::uint64_t seed = 0;
    std::string rng = "splitmix64";
    std::optional<double> reference;
    std::optional<double> gap_value;
};

// Order decision interface used by the simulator. Decisions are clamped to
// the cash capacity before execution.
class OrderPolicy {
public:
    virtual ~OrderPolicy() = default;
    virtual Qty order(int period, Qty x, Money R) const = 0;
    virtual std::string name() const = 0;
};

class ScsOrderPolicy final : public OrderPolicy {
public:
    ScsOrderPolicy(const ScsPolicy& policy, const ProblemInstance& inst)
        : policy_(policy), inst_(inst) {
        if (policy.horizon != inst.horizon)
            throw std::invalid_argument("policy horizon does not match instance");
    }
    Qty order(int period, Qty x, Money R) const override {
        return policy_order(policy_, period, x, R, inst_);
    }
    std::string name() const override { return "scs"; }

private:
    const ScsPolicy& policy_;
    const ProblemInstance& inst_;
};

class SdpArgmaxPolicy final : public OrderPolicy {
public:
    explicit SdpArgmaxPolicy(const SdpSolution& sol) : sol_(sol) {}
    Qty order(int period, Qty x, Money R) const override {
        if (!sol_.grid.contains(x, R))
            throw std::out_of_range("simulated state escaped the solved grid");
        return sol_.action_at(period, x, R);
    }
    std::string name() const override { return "sdp"; }

private:
    const SdpSolution& sol_;
};

SimulationReport simulate(const ProblemInstance& inst, const OrderPolicy& policy,
                          long long samples, std::uint64_t seed,
                          std::optional<double> reference = std::nullopt);

// Relative shortfall (reference - achieved) / |reference|.
double gap(double reference, double achieved);

std::string report_to_json(const SimulationReport& report);

// Stateless uniform draw in [0,1) for path j, period n under a seed.
double uniform_draw(std::uint64_t seed, long long path, int period);

} // namespace cashlot
