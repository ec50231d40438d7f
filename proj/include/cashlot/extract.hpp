#pragma once

#include "cashlot/policy.hpp"
#include "cashlot/sdp.hpp"

namespace cashlot {

/**
 * Derive the (s, C(x), S) parameters of every period from the solved
 * action tables. Period 1 reads the single initial state; the final period
 * uses the closed-form policy; the middle periods scan the grid: s is the
 * smallest inventory that never orders, S the most frequent order-up-to
 * level among ordering states (ties toward the smaller level), and C(x)
 * the largest cash that still does not order.
 */
ScsPolicy extract(const SdpSolution& sdp, const ProblemInstance& inst);

} // namespace cashlot
