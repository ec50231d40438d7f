#include "cashlot/demand.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cashlot {

namespace {

std::vector<double> running_sum(const std::vector<double>& p) {
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    if (!cdf.empty()) cdf.back() = 1.0;
    return cdf;
}

} // namespace

double DemandDistribution::mean() const {
    double m = 0.0;
    for (size_t k = 0; k < pmf.size(); ++k)
        m += pmf[k] * static_cast<double>(min_demand + static_cast<Qty>(k));
    return m;
}

double DemandDistribution::expected_min(Qty y) const {
    double m = 0.0;
    for (size_t k = 0; k < pmf.size(); ++k) {
        Qty d = min_demand + static_cast<Qty>(k);
        m += pmf[k] * static_cast<double>(std::min(d, y));
    }
    return m;
}

double DemandDistribution::expected_leftover(Qty y) const {
    double m = 0.0;
    for (size_t k = 0; k < pmf.size(); ++k) {
        Qty d = min_demand + static_cast<Qty>(k);
        m += pmf[k] * static_cast<double>(std::max(y - d, 0));
    }
    return m;
}

void DemandDistribution::validate() const {
    if (min_demand < 0 || max_demand < min_demand)
        throw std::invalid_argument("demand support must be nonnegative and ordered");
    if (pmf.size() != static_cast<size_t>(max_demand - min_demand + 1))
        throw std::invalid_argument("pmf size does not match support");
    double sum = 0.0;
    for (double p : pmf) {
        if (p < 0.0) throw std::invalid_argument("pmf has a negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("pmf does not sum to one");
}

DemandDistribution truncated_poisson(double mean, double tail_mass) {
    if (!(mean > 0.0))
        throw std::invalid_argument("poisson mean must be positive");
    if (!(tail_mass > 0.0 && tail_mass < 1.0))
        throw std::invalid_argument("tail mass must lie in (0, 1)");

    std::vector<double> pmf;
    double p = std::exp(-mean); // P(demand = 0)
    double cum = p;
    pmf.push_back(p);
    const double target = 1.0 - tail_mass;
    Qty d = 0;
    while (cum < target) {
        ++d;
        p *= mean / static_cast<double>(d);
        cum += p;
        pmf.push_back(p);
        if (d > 100000)
            throw std::invalid_argument("poisson mean too large to truncate");
    }
    for (double& q : pmf) q /= cum;

    DemandDistribution dist;
    dist.min_demand = 0;
    dist.max_demand = d;
    dist.pmf = std::move(pmf);
    dist.cdf = running_sum(dist.pmf);
    return dist;
}

DemandDistribution make_pmf(Qty min_demand, std::vector<double> probs) {
    DemandDistribution dist;
    dist.min_demand = min_demand;
    dist.max_demand = min_demand + static_cast<Qty>(probs.size()) - 1;
    dist.pmf = std::move(probs);
    dist.validate();
    dist.cdf = running_sum(dist.pmf);
    return dist;
}

ConvolvedDemand convolve(std::span<const DemandDistribution> parts, int first_period) {
    if (parts.empty())
        throw std::invalid_argument("convolve requires at least one distribution");

    std::vector<double> acc = parts[0].pmf;
    Qty lo = parts[0].min_demand;
    Qty hi = parts[0].max_demand;
    for (size_t i = 1; i < parts.size(); ++i) {
        const auto& d = parts[i];
        std::vector<double> next(acc.size() + d.pmf.size() - 1, 0.0);
        for (size_t a = 0; a < acc.size(); ++a) {
            if (acc[a] == 0.0) continue;
            for (size_t b = 0; b < d.pmf.size(); ++b)
                next[a + b] += acc[a] * d.pmf[b];
        }
        acc = std::move(next);
        lo += d.min_demand;
        hi += d.max_demand;
    }
    // guard against drift from repeated convolution
    double sum = std::accumulate(acc.begin(), acc.end(), 0.0);
    for (double& q : acc) q /= sum;

    ConvolvedDemand out;
    out.min_demand = lo;
    out.max_demand = hi;
    out.pmf = std::move(acc);
    out.cdf = running_sum(out.pmf);
    out.first_period = first_period;
    out.last_period = first_period + static_cast<int>(parts.size()) - 1;
    return out;
}

Qty inverse_cdf(const DemandDistribution& dist, double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("quantile must lie in [0, 1]");
    auto it = std::lower_bound(dist.cdf.begin(), dist.cdf.end(), q);
    if (it == dist.cdf.end()) return dist.max_demand;
    return dist.min_demand + static_cast<Qty>(it - dist.cdf.begin());
}

} // namespace cashlot
