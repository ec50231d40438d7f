#pragma once

#include <cstdint>

namespace cashlot {

// Integer money units. Demand, prices and costs are integral in this model;
// only expectations are real-valued.
using Money = long long;
using Qty = int;

struct State {
    Qty inventory = 0;
    Money cash = 0;
};

} // namespace cashlot
