#include "cashlot/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace cashlot {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

Qty draw_demand(const DemandDistribution& dist, double u) {
    // smallest d with CDF(d) > u; u in [0,1)
    auto it = std::upper_bound(dist.cdf.begin(), dist.cdf.end(), u);
    if (it == dist.cdf.end()) return dist.max_demand;
    return dist.min_demand + static_cast<Qty>(it - dist.cdf.begin());
}

} // namespace

double uniform_draw(std::uint64_t seed, long long path, int period) {
    std::uint64_t stream = splitmix64(seed ^ (0xD1342543DE82EF95ull *
                                              static_cast<std::uint64_t>(path + 1)));
    std::uint64_t bits = splitmix64(stream + static_cast<std::uint64_t>(period));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

SimulationReport simulate(const ProblemInstance& inst, const OrderPolicy& policy,
                          long long samples, std::uint64_t seed,
                          std::optional<double> reference) {
    inst.validate();
    if (samples < 1)
        throw std::invalid_argument("need at least one sample path");

    // Fixed-size batches accumulated in batch order keep the result
    // identical whether batches run serially or concurrently.
    constexpr long long kBatch = 8192;
    const long long n_batches = (samples + kBatch - 1) / kBatch;

    auto run_batch = [&](long long b) {
        double sum = 0.0, sumsq = 0.0;
        const long long lo = b * kBatch;
        const long long hi = std::min(samples, lo + kBatch);
        for (long long j = lo; j < hi; ++j) {
            Qty x = inst.x0;
            Money R = inst.R0;
            for (int n = 1; n <= inst.horizon; ++n) {
                Qty q = policy.order(n, x, R);
                q = std::clamp<Qty>(q, 0, order_capacity(inst, R));
                const Qty y = x + q;
                const Qty d = draw_demand(inst.demand(n), uniform_draw(seed, j, n));
                R += cash_increment(inst, n, x, y, d);
                x = inventory_transition(y, d);
            }
            const double inc =
                static_cast<double>(R) + static_cast<double>(inst.gamma) * x
                - static_cast<double>(inst.R0);
            sum += inc;
            sumsq += inc * inc;
        }
        return std::pair<double, double>(sum, sumsq);
    };

    double sum = 0.0, sumsq = 0.0;
    if (n_batches > 1) {
        std::vector<std::future<std::pair<double, double>>> futs;
        futs.reserve(static_cast<size_t>(n_batches));
        for (long long b = 0; b < n_batches; ++b)
            futs.push_back(std::async(std::launch::async | std::launch::deferred,
                                      run_batch, b));
        for (auto& f : futs) {
            auto [s, s2] = f.get();
            sum += s;
            sumsq += s2;
        }
    } else {
        std::tie(sum, sumsq) = run_batch(0);
    }

    SimulationReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.mean = sum / static_cast<double>(samples);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(samples) - rep.mean * rep.mean);
    rep.std_error = std::sqrt(var / static_cast<double>(samples));
    if (reference) {
        rep.reference = reference;
        rep.gap_value = gap(*reference, rep.mean);
    }
    return rep;
}

double gap(double reference, double achieved) {
    if (reference == 0.0)
        throw std::invalid_argument("gap is undefined for a zero reference");
    return (reference - achieved) / std::abs(reference);
}

std::string report_to_json(const SimulationReport& report) {
    nlohmann::json j;
    j["mean"] = report.mean;
    j["std_error"] = report.std_error;
    j["samples"] = report.samples;
    j["seed"] = report.seed;
    j["rng"] = report.rng;
    if (report.reference) {
        j["reference"] = *report.reference;
        j["gap"] = *report.gap_value;
    }
    return j.dump(2);
}

} // namespace cashlot
