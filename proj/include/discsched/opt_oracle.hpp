#ifndef DISCSCHED_OPT_ORACLE_HPP
#define DISCSCHED_OPT_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "discsched/policies.hpp"
#include "discsched/types.hpp"

namespace discsched {

// One emitted transaction, flattened out of a schedule. Valid slots are
// [arrival, arrival + ttl - 1], further capped by the horizon.
struct TxInstance {
    int arrival = 0;
    int ttl = 1;
    double fee = 0.0;

    friend bool operator==(const TxInstance&, const TxInstance&) = default;
};

struct AssignmentEdge {
    int tx = 0;
    int slot = 0;
    double weight = 0.0;
};

// Bipartite formulation of the offline optimum: transactions vs. time slots
// 0..n_slots-1, edge weight = gamma(slot) * lambda^slot * fee.
struct AssignmentProblem {
    std::vector<TxInstance> txs;
    std::vector<AssignmentEdge> edges;
    int n_slots = 0;
};

AssignmentProblem build_assignment_problem(const TransactionSchedule& schedule,
                                           const MinerParams& params);

struct OptResult {
    double revenue = 0.0;
    std::vector<std::pair<int, int>> assignment; // (tx index, slot), matched pairs only
    std::vector<TxInstance> txs;                 // index space of `assignment`
};

// Exact offline optimum via maximum-weight bipartite matching; leaving
// transactions or slots unmatched is allowed (weights are nonnegative).
OptResult opt_matching(const TransactionSchedule& schedule, const MinerParams& params);
OptResult solve_assignment(const AssignmentProblem& problem, const MinerParams& params);

// Independent check: exhaustive search over all feasible partial assignments.
// Throws InstanceTooLarge beyond 10 transactions or horizon 10.
double opt_bruteforce(const TransactionSchedule& schedule, const MinerParams& params);

struct RatioPoint {
    double ratio = 1.0;
    double ci_halfwidth = 0.0;
    double policy_revenue = 0.0;
    double opt_revenue = 0.0;
};

// mean(simulate revenue over n_samples seeds) / opt_matching revenue, with a
// 99% normal-approximation half-width for randomized policies (0 for
// deterministic ones, which are evaluated once). Both zero -> ratio 1.
RatioPoint competitive_ratio_point(const PolicyDescriptor& policy,
                                   const TransactionSchedule& schedule,
                                   const MinerParams& params,
                                   int n_samples,
                                   std::uint64_t seed);

} // namespace discsched

#endif
