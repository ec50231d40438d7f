#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cashlot/demand.hpp"
#include "helpers.hpp"

using namespace cashlot;

TEST_CASE("truncated poisson matches a cumulative-sum oracle") {
    auto dist = truncated_poisson(9.0, 1e-6);
    CHECK(dist.min_demand == 0);
    CHECK(dist.max_demand >= 9);
    double sum = std::accumulate(dist.pmf.begin(), dist.pmf.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    // independent check of the support rule: smallest D_u with raw poisson
    // mass >= 1 - tail
    double p = std::exp(-9.0), cum = p;
    int d = 0;
    while (cum < 1.0 - 1e-6) {
        ++d;
        p *= 9.0 / d;
        cum += p;
    }
    CHECK(dist.max_demand == d);
    CHECK(dist.mean() == doctest::Approx(9.0).epsilon(1e-4));
}

TEST_CASE("tiny poisson mean concentrates at zero") {
    auto dist = truncated_poisson(0.01, 1e-6);
    CHECK(dist.max_demand <= 4);
    CHECK(dist.prob(0) > 0.98);
}

TEST_CASE("poisson rejects bad arguments") {
    CHECK_THROWS_AS(truncated_poisson(0.0), std::invalid_argument);
    CHECK_THROWS_AS(truncated_poisson(-2.0), std::invalid_argument);
    CHECK_THROWS_AS(truncated_poisson(5.0, 0.0), std::invalid_argument);
}

TEST_CASE("convolution of a single distribution is itself") {
    auto d = truncated_poisson(4.0);
    auto c = convolve(std::span(&d, 1), 2);
    CHECK(c.min_demand == d.min_demand);
    CHECK(c.max_demand == d.max_demand);
    CHECK(c.first_period == 2);
    CHECK(c.last_period == 2);
    for (size_t i = 0; i < d.pmf.size(); ++i)
        CHECK(c.pmf[i] == doctest::Approx(d.pmf[i]).epsilon(1e-12));
}

TEST_CASE("convolution of two poissons matches the summed mean") {
    std::vector<DemandDistribution> parts{truncated_poisson(9.0),
                                          truncated_poisson(13.0)};
    auto c = convolve(parts, 1);
    CHECK(c.mean() == doctest::Approx(22.0).epsilon(1e-4));
    auto direct = truncated_poisson(22.0);
    CHECK(std::abs(c.mean() - direct.mean()) < 1e-4);
    // the convolved mean equals the sum of component means up to truncation
    CHECK(std::abs(c.mean() - (parts[0].mean() + parts[1].mean())) < 1e-6);
}

TEST_CASE("point masses convolve to a point mass") {
    std::vector<DemandDistribution> parts{make_pmf(2, {1.0}), make_pmf(3, {1.0})};
    auto c = convolve(parts, 1);
    CHECK(c.min_demand == 5);
    CHECK(c.max_demand == 5);
    CHECK(c.prob(5) == doctest::Approx(1.0));
}

TEST_CASE("convolution is associative") {
    std::vector<DemandDistribution> abc{truncated_poisson(2.0),
                                        truncated_poisson(3.0),
                                        truncated_poisson(1.5)};
    auto left_first = convolve(std::span(abc.data(), 2), 1);
    std::vector<DemandDistribution> l{left_first, abc[2]};
    auto right_first = convolve(std::span(abc.data() + 1, 2), 2);
    std::vector<DemandDistribution> r{abc[0], right_first};
    auto lhs = convolve(l, 1);
    auto rhs = convolve(r, 1);
    REQUIRE(lhs.max_demand == rhs.max_demand);
    for (size_t i = 0; i < lhs.pmf.size(); ++i)
        CHECK(lhs.pmf[i] == doctest::Approx(rhs.pmf[i]).epsilon(1e-12));
}

TEST_CASE("inverse cdf boundaries and interior") {
    auto dist = truncated_poisson(20.0);
    CHECK(inverse_cdf(dist, 0.0) == dist.min_demand);
    CHECK(inverse_cdf(dist, 1.0) == dist.max_demand);

    // linear-scan oracle at the 0.8 fractile
    double q = 0.8, cum = 0.0;
    Qty expect = dist.max_demand;
    for (Qty d = dist.min_demand; d <= dist.max_demand; ++d) {
        cum += dist.prob(d);
        if (cum >= q) {
            expect = d;
            break;
        }
    }
    CHECK(inverse_cdf(dist, q) == expect);
}

TEST_CASE("cdf is monotone and inverse is a lower adjoint") {
    testing::Rng rng(7);
    for (int it = 0; it < 20; ++it) {
        auto inst = testing::random_small_instance(rng);
        for (const auto& dist : inst.demands) {
            double prev = 0.0;
            for (Qty d = dist.min_demand; d <= dist.max_demand; ++d) {
                CHECK(dist.cdf_at(d) >= prev - 1e-15);
                prev = dist.cdf_at(d);
                CHECK(inverse_cdf(dist, dist.cdf_at(d)) <= d);
            }
            CHECK(dist.cdf_at(dist.max_demand) == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("pmf tables are validated") {
    CHECK_THROWS_AS(make_pmf(0, {0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(make_pmf(0, {-0.1, 1.1}), std::invalid_argument);
    CHECK_NOTHROW(make_pmf(3, {0.25, 0.5, 0.25}));
}
