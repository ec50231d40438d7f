#include <doctest.h>

#include "cashlot/extract.hpp"
#include "helpers.hpp"

using namespace cashlot;

TEST_CASE("policy order rule") {
    auto inst = testing::worked_example();
    ScsPolicy policy;
    policy.horizon = 4;
    policy.periods.resize(4);
    auto& r1 = policy.periods[0];
    r1.s = 3;
    r1.S = 9;
    r1.C = {{0, 30}, {1, ScsPolicy::kNeverOrder}};

    CHECK(policy_order(policy, 1, 3, 100, inst) == 0);  // at/above s
    CHECK(policy_order(policy, 1, 0, 30, inst) == 0);   // cash at threshold
    CHECK(policy_order(policy, 1, 0, 33, inst) == 7);   // capacity binds
    CHECK(policy_order(policy, 1, 0, 1000, inst) == 9); // order up to S
    CHECK(policy_order(policy, 1, 1, 1000, inst) == 0); // never marker
    CHECK(policy_order(policy, 1, 2, 1000, inst) == 7); // untabulated: C = K

    // never exceeds capacity
    for (Money R = 0; R < 80; ++R)
        CHECK(policy_order(policy, 1, 0, R, inst) <= order_capacity(inst, R));
}

TEST_CASE("policy json round trip with never markers") {
    ScsPolicy policy;
    policy.horizon = 2;
    policy.periods.resize(2);
    policy.periods[0] = {3, 9, {{0, 30}, {1, ScsPolicy::kNeverOrder}, {2, 31}}};
    policy.periods[1] = {1, 4, {{0, 12}}};

    auto echoed = policy_from_json(policy_to_json(policy));
    CHECK(echoed.horizon == 2);
    CHECK(echoed.periods[0].s == 3);
    CHECK(echoed.periods[0].C.at(1) == ScsPolicy::kNeverOrder);
    CHECK(echoed.periods[0].C.at(2) == 31);
    CHECK(echoed.periods[1].S == 4);
}

TEST_CASE("extraction is deterministic and bounded by capacity") {
    testing::Rng rng(23);
    for (int it = 0; it < 6; ++it) {
        auto inst = testing::random_small_instance(rng);
        auto sol = solve(inst);
        auto a = extract(sol, inst);
        auto b = extract(sol, inst);
        CHECK(policy_to_json(a) == policy_to_json(b));
        for (int n = 1; n <= inst.horizon; ++n) {
            const auto& rule = a.rule(n);
            if (rule.s > 0) CHECK(rule.s <= rule.S);
            for (const auto& [x, cv] : rule.C)
                if (cv != ScsPolicy::kNeverOrder) CHECK(cv >= 0);
        }
    }
}

TEST_CASE("first-period rule reads the initial state") {
    auto inst = testing::worked_example();
    auto sol = solve(inst);
    auto policy = extract(sol, inst);
    const auto& r1 = policy.rule(1);
    CHECK(r1.s == 1);
    CHECK(r1.S == 7);
    CHECK(r1.C.at(0) == 0);
    CHECK(policy_order(policy, 1, 0, 33, inst) == 7);
}

TEST_CASE("a period that never orders extracts the defaults") {
    // only overhead, demand never worth serving: K far above any margin
    ProblemInstance inst;
    inst.horizon = 2;
    inst.K = 500;
    inst.c = 1;
    inst.p = 2;
    inst.gamma = 0;
    inst.W = 1;
    inst.x0 = 0;
    inst.R0 = 40;
    inst.demands = {make_pmf(0, {0.5, 0.5}), make_pmf(0, {0.5, 0.5})};
    auto sol = solve(inst);
    auto policy = extract(sol, inst);
    CHECK(policy.rule(1).s == 0);
    for (int n = 1; n <= 2; ++n)
        for (Money R = 0; R <= 40; ++R)
            CHECK(policy_order(policy, n, 0, R, inst) == 0);
}

TEST_CASE("extraction rejects a mismatched horizon") {
    auto inst = testing::worked_example();
    auto sol = solve(inst);
    auto other = inst;
    other.horizon = 3;
    other.demands.pop_back();
    CHECK_THROWS_AS(extract(sol, other), std::invalid_argument);
}

TEST_CASE("level frequency ties resolve to the smaller level") {
    // hand-built middle-period action table with two equally frequent
    // order-up-to levels (4 from x=0, 3 from x=1)
    ProblemInstance inst;
    inst.horizon = 3;
    inst.K = 2;
    inst.c = 1;
    inst.p = 3;
    inst.gamma = 0;
    inst.W = 0;
    inst.x0 = 0;
    inst.R0 = 5;
    for (int n = 0; n < 3; ++n) inst.demands.push_back(make_pmf(0, {0.5, 0.5}));

    SdpSolution sol;
    sol.grid = StateGrid{3, 0, 6};
    sol.horizon = 3;
    sol.salvage = 0;
    size_t cells = sol.grid.cells();
    sol.value.assign(3, std::vector<double>(cells, 0.0));
    sol.action.assign(3, std::vector<Qty>(cells, 0));
    sol.action[1][sol.grid.index(0, 6)] = 4; // level 4, once
    sol.action[1][sol.grid.index(1, 6)] = 2; // level 3, once

    auto policy = extract(sol, inst);
    CHECK(policy.rule(2).s == 2);
    CHECK(policy.rule(2).S == 3);
    CHECK(policy.rule(2).C.at(0) == 5);
    CHECK(policy.rule(2).C.at(1) == 5);
}

TEST_CASE("last period of the worked example extraction") {
    auto inst = testing::worked_example();
    auto sol = solve(inst);
    auto policy = extract(sol, inst);
    const auto& r4 = policy.rule(4);
    CHECK(r4.s == 7);
    CHECK(r4.S == 17);
    for (Qty x = 0; x <= 5; ++x) CHECK(r4.C.at(x) == 32);
    CHECK(r4.C.at(6) == 33);
}
