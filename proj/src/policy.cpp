#include "cashlot/policy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cashlot {

Qty policy_order(const ScsPolicy& policy, int period, Qty x, Money R,
                 const ProblemInstance& inst) {
    const auto& rule = policy.rule(period);
    if (x >= rule.s) return 0;
    auto it = rule.C.find(x);
    Money threshold = (it != rule.C.end()) ? it->second : inst.K;
    if (threshold == ScsPolicy::kNeverOrder || R <= threshold) return 0;
    Qty q = std::min<Qty>(order_capacity(inst, R), rule.S - x);
    return std::max<Qty>(q, 0);
}

std::string policy_to_json(const ScsPolicy& policy) {
    nlohmann::json arr = nlohmann::json::array();
    for (int n = 1; n <= policy.horizon; ++n) {
        const auto& rule = policy.rule(n);
        nlohmann::json cj = nlohmann::json::object();
        for (const auto& [x, v] : rule.C) {
            if (v == ScsPolicy::kNeverOrder)
                cj[std::to_string(x)] = "never";
            else
                cj[std::to_string(x)] = v;
        }
        arr.push_back({{"period", n}, {"s", rule.s}, {"S", rule.S}, {"C", cj}});
    }
    return arr.dump(2);
}

ScsPolicy policy_from_json(const std::string& text) {
    nlohmann::json arr = nlohmann::json::parse(text);
    if (!arr.is_array())
        throw std::invalid_argument("policy file must hold a JSON array");
    ScsPolicy policy;
    policy.horizon = static_cast<int>(arr.size());
    policy.periods.resize(arr.size());
    for (const auto& pj : arr) {
        int n = pj.at("period").get<int>();
        if (n < 1 || n > policy.horizon)
            throw std::invalid_argument("policy period out of range");
        auto& rule = policy.periods[static_cast<size_t>(n - 1)];
        rule.s = pj.at("s").get<Qty>();
        rule.S = pj.at("S").get<Qty>();
        for (const auto& [key, val] : pj.at("C").items()) {
            Qty x = std::stoi(key);
            if (val.is_string() && val.get<std::string>() == "never")
                rule.C[x] = ScsPolicy::kNeverOrder;
            else
                rule.C[x] = val.get<Money>();
        }
    }
    return policy;
}

ScsPolicy load_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open policy file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return policy_from_json(ss.str());
}

void save_policy(const ScsPolicy& policy, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << policy_to_json(policy) << "\n";
}

} // namespace cashlot
