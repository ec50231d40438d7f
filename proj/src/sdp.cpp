#include "cashlot/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cashlot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Ordering must beat staying put by more than accumulated rounding noise
// before an action table records it; values themselves stay exact maxima.
constexpr double kValueTie = 1e-7;

// Expected revenue plus salvage of stock level y against one distribution,
// accumulated per demand value so equal expressions round identically
// everywhere this quantity is needed.
double revenue_and_salvage(const DemandDistribution& dist, Money p, Money gamma, Qty y) {
    double acc = 0.0;
    for (Qty d = dist.min_demand; d <= dist.max_demand; ++d) {
        double term = static_cast<double>(p) * std::min(d, y);
        if (gamma != 0) term += static_cast<double>(gamma) * std::max(y - d, 0);
        acc += dist.prob(d) * term;
    }
    return acc;
}

void parallel_for(int threads, size_t n, const std::function<void(size_t, size_t)>& body);

} // namespace

StateGrid default_grid(const ProblemInstance& inst) {
    // Inventory can never usefully exceed the initial stock plus everything
    // the horizon can still sell; orders past that are dominated from any
    // cash level, reachable or not.
    Money total_demand = 0;
    for (const auto& d : inst.demands) total_demand += d.max_demand;

    StateGrid g;
    g.x_max = static_cast<Qty>(inst.x0 + total_demand);
    g.r_min = std::min<Money>(0, inst.R0) - inst.horizon * inst.W;
    // Top of the cash grid: every richer state behaves identically because
    // capacity already covers all remaining demand there.
    g.r_max = std::max(inst.R0 + inst.p * total_demand,
                       inst.K + inst.W + inst.c * (total_demand + inst.x0 + 1));
    return g;
}

namespace {

void parallel_for(int threads, size_t n, const std::function<void(size_t, size_t)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || n < 64) {
        body(0, n);
        return;
    }
    size_t nt = std::min<size_t>(static_cast<size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    size_t chunk = (n + nt - 1) / nt;
    for (size_t t = 0; t < nt; ++t) {
        size_t lo = t * chunk;
        size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

} // namespace

SdpSolution solve(const ProblemInstance& inst, const SolveOptions& opt) {
    inst.validate();
    const StateGrid grid = default_grid(inst);
    const int N = inst.horizon;
    const size_t cells = grid.cells();
    if (cells * static_cast<size_t>(N) > opt.max_cells)
        throw std::invalid_argument("state grid exceeds the cell budget");

    const Money K = inst.K, c = inst.c, p = inst.p, W = inst.W, gamma = inst.gamma;
    const Qty XU = grid.x_max;

    // The recursion is run on a grid padded N*W below the reported bottom:
    // each backward step reads one overhead payment further down, so values
    // inside the pad are inexact but everything at or above grid.r_min is
    // exact by the time the pad is sliced off.
    const Money RL = grid.r_min - static_cast<Money>(N) * W;
    const Money RU = grid.r_max;
    const size_t nR = static_cast<size_t>(RU - RL) + 1;

    SdpSolution sol;
    sol.grid = grid;
    sol.horizon = N;
    sol.salvage = gamma;
    sol.value.assign(static_cast<size_t>(N), {});
    sol.action.assign(static_cast<size_t>(N), {});

    // Post-payment cash range for the inner expectation table. Ordering
    // leaves nonnegative cash; not ordering leaves at least R - W.
    const Money WL = std::min<Money>(RL - W, 0);
    const Money WU = RU - W;
    const size_t nW = static_cast<size_t>(WU - WL) + 1;

    std::vector<double> value_next; // F_{n+1} on the padded grid, empty for n == N
    std::vector<double> F(static_cast<size_t>(XU + 1) * nR);
    std::vector<Qty> Q(static_cast<size_t>(XU + 1) * nR);
    std::vector<double> G(static_cast<size_t>(XU + 1) * nW);

    for (int n = N; n >= 1; --n) {
        const auto& dist = inst.demand(n);

        // G[y][w] = E[ p*min(xi,y) + F_{n+1}((y-xi)^+, w + p*min(xi,y)) ]
        // where w is cash after all payments of period n.
        if (n == N) {
            for (Qty y = 0; y <= XU; ++y) {
                double v = revenue_and_salvage(dist, p, gamma, y);
                std::fill_n(G.begin() + static_cast<size_t>(y) * nW, nW, v);
            }
        } else {
            const double* Fn1 = value_next.data();
            parallel_for(opt.threads, static_cast<size_t>(XU) + 1,
                         [&](size_t ylo, size_t yhi) {
                for (size_t yi = ylo; yi < yhi; ++yi) {
                    Qty y = static_cast<Qty>(yi);
                    double* row = G.data() + yi * nW;
                    std::fill_n(row, nW, 0.0);
                    for (Qty d = dist.min_demand; d <= dist.max_demand; ++d) {
                        const double q = dist.prob(d);
                        const double rev = static_cast<double>(p) * std::min(d, y);
                        const Qty xn = std::max(y - d, 0);
                        const double* fx = Fn1 + static_cast<size_t>(xn) * nR;
                        const Money rev_i = p * std::min(d, y);
                        for (size_t wi = 0; wi < nW; ++wi) {
                            Money Rn = WL + static_cast<Money>(wi) + rev_i;
                            if (Rn > RU) Rn = RU; // rich states: capacity no longer binds
                            if (Rn < RL) Rn = RL; // only reachable from inside the pad
                            row[wi] += q * (rev + fx[static_cast<size_t>(Rn - RL)]);
                        }
                    }
                }
            });
        }

        // Baseline: no order. Cash after payment is R - W.
        parallel_for(opt.threads, static_cast<size_t>(XU) + 1,
                     [&](size_t xlo, size_t xhi) {
            for (size_t xi = xlo; xi < xhi; ++xi) {
                const double* grow = G.data() + xi * nW;
                double* frow = F.data() + xi * nR;
                Qty* qrow = Q.data() + xi * nR;
                for (size_t ri = 0; ri < nR; ++ri) {
                    Money R = RL + static_cast<Money>(ri);
                    frow[ri] = -static_cast<double>(W)
                             + grow[static_cast<size_t>(R - W - WL)];
                    qrow[ri] = 0;
                }
            }
        });

        // Ordering branch. With v = R + c*x - K - W the affordability
        // constraint c*(y-x) <= R - K - W becomes c*y <= v, so states
        // sharing v share one suffix maximization over y.
        const Money VL = c; // smallest v that affords any order
        const Money VU = RU - K - W + c * XU;
        std::vector<double> bestJ(static_cast<size_t>(XU) + 2);
        std::vector<Qty> bestY(static_cast<size_t>(XU) + 2);
        for (Money v = VL; v <= VU; ++v) {
            Qty ymax = static_cast<Qty>(std::min<Money>(v / c, XU));
            if (ymax < 1) continue;
            bestJ[static_cast<size_t>(ymax) + 1] = kNegInf;
            bestY[static_cast<size_t>(ymax) + 1] = -1;
            for (Qty y = ymax; y >= 1; --y) {
                Money w = v - c * y;
                double J = kNegInf;
                if (w >= WL && w <= WU)
                    J = -static_cast<double>(c) * y
                      + G[static_cast<size_t>(y) * nW + static_cast<size_t>(w - WL)];
                if (J >= bestJ[static_cast<size_t>(y) + 1]) {
                    bestJ[static_cast<size_t>(y)] = J;
                    bestY[static_cast<size_t>(y)] = y;
                } else {
                    bestJ[static_cast<size_t>(y)] = bestJ[static_cast<size_t>(y) + 1];
                    bestY[static_cast<size_t>(y)] = bestY[static_cast<size_t>(y) + 1];
                }
            }
            const Qty x_hi = static_cast<Qty>(std::min<Money>(ymax - 1, XU));
            for (Qty x = 0; x <= x_hi; ++x) {
                Money R = v - c * x + K + W;
                if (R < RL || R > RU) continue;
                double cand = static_cast<double>(c) * x - static_cast<double>(K + W)
                            + bestJ[static_cast<size_t>(x) + 1];
                size_t id = static_cast<size_t>(x) * nR + static_cast<size_t>(R - RL);
                if (cand > F[id]) {
                    if (cand > F[id] + kValueTie)
                        Q[id] = bestY[static_cast<size_t>(x) + 1] - x;
                    F[id] = cand;
                }
            }
        }

        // Publish the exact window, dropping the padded bottom rows.
        auto& pubF = sol.value[static_cast<size_t>(n - 1)];
        auto& pubQ = sol.action[static_cast<size_t>(n - 1)];
        pubF.resize(cells);
        pubQ.resize(cells);
        const size_t pub_nr = grid.r_count();
        const size_t off = static_cast<size_t>(grid.r_min - RL);
        for (size_t xi = 0; xi <= static_cast<size_t>(XU); ++xi) {
            std::copy_n(F.data() + xi * nR + off, pub_nr, pubF.data() + xi * pub_nr);
            std::copy_n(Q.data() + xi * nR + off, pub_nr, pubQ.data() + xi * pub_nr);
        }

        value_next = F;
    }
    return sol;
}

double last_period_profit(const ProblemInstance& inst, Qty y) {
    const auto& dist = inst.demand(inst.horizon);
    return revenue_and_salvage(dist, inst.p, inst.gamma, y)
         - static_cast<double>(inst.c) * y - static_cast<double>(inst.W);
}

LastPeriodPolicy last_period_policy(const ProblemInstance& inst) {
    const auto& dist = inst.demand(inst.horizon);
    const double fractile = static_cast<double>(inst.p - inst.c)
                          / static_cast<double>(inst.p - inst.gamma);
    LastPeriodPolicy pol;
    pol.S = inverse_cdf(dist, fractile);

    const double LS = last_period_profit(inst, pol.S);
    pol.s = pol.S;
    for (Qty y = 0; y <= pol.S; ++y) {
        if (last_period_profit(inst, y) >= LS - static_cast<double>(inst.K) - kValueTie) {
            pol.s = y;
            break;
        }
    }

    pol.C.reserve(static_cast<size_t>(pol.s));
    for (Qty x = 0; x < pol.s; ++x) {
        const double lx = last_period_profit(inst, x);
        Money best = 0;
        for (Money R = 0;; ++R) {
            Qty target = std::min<Qty>(x + order_capacity(inst, R), pol.S);
            if (lx + static_cast<double>(inst.K) >=
                last_period_profit(inst, target) - kValueTie)
                best = R;
            if (target >= pol.S) break;
        }
        pol.C.push_back(best);
    }
    return pol;
}

Qty optimal_last_period_order(const ProblemInstance& inst,
                              const LastPeriodPolicy& pol, Qty x, Money R) {
    if (x >= pol.s) return 0;
    if (R <= pol.C[static_cast<size_t>(x)]) return 0;
    return std::max<Qty>(0, std::min<Qty>(pol.S - x, order_capacity(inst, R)));
}

Qty optimal_last_period_order(const ProblemInstance& inst, Qty x, Money R) {
    return optimal_last_period_order(inst, last_period_policy(inst), x, R);
}

Qty s_threshold(const ProblemInstance& inst, int period) {
    std::span<const DemandDistribution> tail(
        inst.demands.data() + (period - 1),
        static_cast<size_t>(inst.horizon - period + 1));
    ConvolvedDemand total = convolve(tail, period);
    const double fractile = static_cast<double>(inst.p - inst.c)
                          / static_cast<double>(inst.p - inst.gamma);
    return inverse_cdf(total, fractile);
}

Money conservative_C(const ProblemInstance& inst, int period, Qty x) {
    const auto& dist = inst.demand(period);
    Money best = inst.K;
    // Region where ordering b >= 1 units sells them all for sure yet cannot
    // recoup the fixed cost: x + b <= D_b and (p - c) * b <= K.
    for (Qty b = 1;; ++b) {
        if (x + b > dist.min_demand) break;
        if ((inst.p - inst.c) * b > inst.K) break;
        Money r_top = inst.K + inst.W + inst.c * (b + 1) - 1; // largest R with B(R) == b
        best = std::max(best, r_top);
    }
    return best;
}

void dump_tables_csv(const SdpSolution& sol, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << "period,x,R,F,Q\n";
    char buf[64];
    for (int n = 1; n <= sol.horizon; ++n) {
        for (Qty x = 0; x <= sol.grid.x_max; ++x) {
            for (Money R = sol.grid.r_min; R <= sol.grid.r_max; ++R) {
                std::snprintf(buf, sizeof(buf), "%.9g", sol.value_at(n, x, R));
                out << n << ',' << x << ',' << R << ',' << buf << ','
                    << sol.action_at(n, x, R) << '\n';
            }
        }
    }
}

} // namespace cashlot
