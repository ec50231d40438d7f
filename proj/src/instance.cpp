#include "cashlot/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cashlot {

void ProblemInstance::validate() const {
    if (horizon < 1)
        throw std::invalid_argument("horizon must be at least 1");
    if (!(0 <= gamma && gamma < c && c < p))
        throw std::invalid_argument("prices must satisfy 0 <= gamma < c < p");
    if (K < 0 || W < 0)
        throw std::invalid_argument("K and W must be nonnegative");
    if (x0 < 0)
        throw std::invalid_argument("initial inventory must be nonnegative");
    if (demands.size() != static_cast<size_t>(horizon))
        throw std::invalid_argument("need one demand distribution per period");
    for (const auto& d : demands) d.validate();
}

Qty order_capacity(const ProblemInstance& inst, Money R) {
    Money budget = R - inst.K - inst.W;
    if (budget < 0) return 0;
    return static_cast<Qty>(budget / inst.c);
}

Money cash_increment(const ProblemInstance& inst, int period, Qty x, Qty y, Qty d) {
    (void)period;
    if (y < x)
        throw std::invalid_argument("order-up-to level below current inventory");
    Money fixed = (y > x) ? inst.K : 0;
    return inst.p * std::min(d, y) - fixed - inst.c * (y - x) - inst.W;
}

Qty inventory_transition(Qty y, Qty d) {
    return std::max(y - d, 0);
}

double expected_profit_L(const ProblemInstance& inst, int period, Qty y) {
    const auto& dist = inst.demand(period);
    return static_cast<double>(inst.p) * dist.expected_min(y)
         - static_cast<double>(inst.c) * y - static_cast<double>(inst.W);
}

namespace {

ProblemInstance parse_instance(const nlohmann::json& j) {
    ProblemInstance inst;
    inst.horizon = j.at("horizon").get<int>();
    inst.K = j.at("K").get<Money>();
    inst.c = j.at("c").get<Money>();
    inst.p = j.at("p").get<Money>();
    inst.gamma = j.at("gamma").get<Money>();
    inst.W = j.at("W").get<Money>();
    inst.x0 = j.at("x0").get<Qty>();
    inst.R0 = j.at("R0").get<Money>();

    const auto& dj = j.at("demand");
    const std::string kind = dj.at("kind").get<std::string>();
    if (kind == "poisson") {
        double tail = dj.value("tail_mass", 1e-6);
        for (double m : dj.at("means").get<std::vector<double>>())
            inst.demands.push_back(truncated_poisson(m, tail));
    } else if (kind == "pmf") {
        for (const auto& tj : dj.at("tables")) {
            Qty lo = tj.at("min").get<Qty>();
            auto probs = tj.at("probs").get<std::vector<double>>();
            inst.demands.push_back(make_pmf(lo, std::move(probs)));
        }
    } else {
        throw std::invalid_argument("unknown demand kind: " + kind);
    }
    inst.validate();
    return inst;
}

} // namespace

ProblemInstance instance_from_json(const std::string& text) {
    return parse_instance(nlohmann::json::parse(text));
}

ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open instance file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return instance_from_json(ss.str());
}

std::string instance_to_json(const ProblemInstance& inst) {
    nlohmann::json j;
    j["horizon"] = inst.horizon;
    j["K"] = inst.K;
    j["c"] = inst.c;
    j["p"] = inst.p;
    j["gamma"] = inst.gamma;
    j["W"] = inst.W;
    j["x0"] = inst.x0;
    j["R0"] = inst.R0;
    nlohmann::json tables = nlohmann::json::array();
    for (const auto& d : inst.demands)
        tables.push_back({{"min", d.min_demand}, {"probs", d.pmf}});
    j["demand"] = {{"kind", "pmf"}, {"tables", tables}};
    return j.dump(2);
}

} // namespace cashlot
