#include "discsched/opt_oracle.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "discsched/errors.hpp"
#include "discsched/rng.hpp"
#include "discsched/simulate.hpp"

namespace discsched {
namespace {

std::vector<TxInstance> flatten(const TransactionSchedule& schedule) {
    std::vector<TxInstance> txs;
    for (const auto& [step, emitted] : schedule.emissions) {
        for (const Transaction& tx : emitted) {
            txs.push_back(TxInstance{step, tx.ttl, tx.fee});
        }
    }
    return txs;
}

int slot_count(const TransactionSchedule& schedule, const MinerParams& params) {
    return std::min(horizon_of(schedule), params.horizon) + 1;
}

// Shortest-augmenting-path assignment with potentials on a dense cost matrix
// (rows <= cols; every row gets matched). Costs are negated weights, with 0
// for invalid pairs: all weights are nonnegative, so a row "parked" on an
// invalid slot is revenue-equivalent to leaving it unmatched and never blocks
// a better solution.
//
// Returns col_of_row; cost() is not exposed, the caller re-sums weights.
std::vector<int> dense_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const int m = n == 0 ? 0 : static_cast<int>(cost[0].size());
    assert(n <= m);
    const double kInf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> match(m + 1, 0); // match[col] = row (1-based), 0 = free
    std::vector<int> way(m + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> col_of_row(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (match[j] > 0) col_of_row[match[j] - 1] = j - 1;
    }
    return col_of_row;
}

} // namespace

AssignmentProblem build_assignment_problem(const TransactionSchedule& schedule,
                                           const MinerParams& params) {
    AssignmentProblem problem;
    problem.txs = flatten(schedule);
    problem.n_slots = slot_count(schedule, params);
    for (int t = 0; t < static_cast<int>(problem.txs.size()); ++t) {
        const TxInstance& tx = problem.txs[t];
        const int last = std::min(tx.arrival + tx.ttl - 1, problem.n_slots - 1);
        for (int slot = tx.arrival; slot <= last; ++slot) {
            problem.edges.push_back(AssignmentEdge{t, slot, params.weight(slot) * tx.fee});
        }
    }
    return problem;
}

OptResult solve_assignment(const AssignmentProblem& problem, const MinerParams& params) {
    OptResult result;
    result.txs = problem.txs;
    const int n_tx = static_cast<int>(problem.txs.size());
    const int n_slots = problem.n_slots;
    if (n_tx == 0 || n_slots == 0) return result;

    // Rows are the smaller side; invalid pairs cost 0 (unmatched-equivalent).
    const bool rows_are_txs = n_tx <= n_slots;
    const int n = rows_are_txs ? n_tx : n_slots;
    const int m = rows_are_txs ? n_slots : n_tx;
    std::vector<std::vector<double>> cost(n, std::vector<double>(m, 0.0));
    for (const AssignmentEdge& e : problem.edges) {
        if (rows_are_txs) {
            cost[e.tx][e.slot] = -e.weight;
        } else {
            cost[e.slot][e.tx] = -e.weight;
        }
    }

    const std::vector<int> col_of_row = dense_assignment(cost);
    for (int row = 0; row < n; ++row) {
        const int col = col_of_row[row];
        if (col < 0) continue;
        const int tx = rows_are_txs ? row : col;
        const int slot = rows_are_txs ? col : row;
        const TxInstance& inst = problem.txs[tx];
        const bool valid = slot >= inst.arrival && slot <= inst.arrival + inst.ttl - 1;
        if (!valid) continue; // parked pair, revenue 0
        result.assignment.emplace_back(tx, slot);
        result.revenue += params.weight(slot) * inst.fee;
    }
    std::sort(result.assignment.begin(), result.assignment.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return result;
}

OptResult opt_matching(const TransactionSchedule& schedule, const MinerParams& params) {
    return solve_assignment(build_assignment_problem(schedule, params), params);
}

double opt_bruteforce(const TransactionSchedule& schedule, const MinerParams& params) {
    const std::vector<TxInstance> txs = flatten(schedule);
    const int n_tx = static_cast<int>(txs.size());
    const int n_slots = slot_count(schedule, params);
    if (n_tx > 10 || horizon_of(schedule) > 10) {
        throw InstanceTooLarge("opt_bruteforce caps: <= 10 transactions, horizon <= 10");
    }
    if (n_tx == 0) return 0.0;

    // Exhaustive search over slots, memoized on (slot, used-transaction mask).
    const int n_masks = 1 << n_tx;
    std::vector<double> memo(static_cast<std::size_t>(n_slots + 1) * n_masks,
                             std::numeric_limits<double>::quiet_NaN());

    const auto solve = [&](auto&& self, int slot, unsigned mask) -> double {
        if (slot >= n_slots) return 0.0;
        double& cell = memo[static_cast<std::size_t>(slot) * n_masks + mask];
        if (!std::isnan(cell)) return cell;
        double best = self(self, slot + 1, mask); // leave the slot empty
        for (int t = 0; t < n_tx; ++t) {
            if (mask & (1u << t)) continue;
            const TxInstance& tx = txs[t];
            if (slot < tx.arrival || slot > tx.arrival + tx.ttl - 1) continue;
            best = std::max(best, params.weight(slot) * tx.fee +
                                      self(self, slot + 1, mask | (1u << t)));
        }
        cell = best;
        return best;
    };
    return solve(solve, 0, 0u);
}

RatioPoint competitive_ratio_point(const PolicyDescriptor& policy,
                                   const TransactionSchedule& schedule,
                                   const MinerParams& params,
                                   int n_samples,
                                   std::uint64_t seed) {
    if (n_samples < 1) {
        throw std::invalid_argument("n_samples must be >= 1");
    }
    RatioPoint point;
    point.opt_revenue = opt_matching(schedule, params).revenue;

    if (!is_randomized(policy)) {
        point.policy_revenue = simulate(policy, schedule, params, seed).revenue;
    } else {
        const SplitRng rng(seed);
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n_samples; ++i) {
            const double rev =
                simulate(policy, schedule, params, rng.stream(static_cast<std::uint64_t>(i)).key())
                    .revenue;
            sum += rev;
            sum_sq += rev * rev;
        }
        point.policy_revenue = sum / n_samples;
        if (n_samples > 1) {
            const double var =
                std::max(0.0, (sum_sq - sum * sum / n_samples) / (n_samples - 1));
            point.ci_halfwidth = 2.5758293035489004 * std::sqrt(var / n_samples);
        }
    }

    if (point.opt_revenue <= 0.0) {
        if (point.policy_revenue > 1e-12) {
            throw std::logic_error("policy revenue positive while OPT is zero");
        }
        point.ratio = 1.0;
        return point;
    }
    point.ratio = point.policy_revenue / point.opt_revenue;
    return point;
}

} // namespace discsched
