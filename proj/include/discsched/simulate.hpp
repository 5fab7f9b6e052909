#ifndef DISCSCHED_SIMULATE_HPP
#define DISCSCHED_SIMULATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "discsched/mempool.hpp"
#include "discsched/policies.hpp"
#include "discsched/types.hpp"

namespace discsched {

// Record of one run: the per-step choices, the mempool size entering each
// step, and the realized discounted revenue (recomputable from the choices).
struct SimulationTrace {
    std::string schedule_label;
    std::vector<std::pair<int, std::optional<Transaction>>> choices;
    std::vector<int> mempool_sizes;
    double revenue = 0.0;
};

// Step-level decision hook: (step index, presented set) -> choice.
using ChooseFn = std::function<PolicyChoice(int, std::span<const Transaction>)>;

// Core loop: for j = 0..params.horizon, present emissions(j) + mempool(j),
// record the choice, advance the mempool, accumulate weight(j) * fee.
// Throws PolicyChoseUnavailable if the hook returns a transaction outside the
// presented set, and std::invalid_argument if the schedule emits past the
// horizon.
SimulationTrace simulate_with(const ChooseFn& choose,
                              const TransactionSchedule& schedule,
                              const MinerParams& params);

// Policy-descriptor front end; deterministic given (policy, schedule, params,
// seed). RMIX's per-step draw is a pure function of (seed, step).
SimulationTrace simulate(const PolicyDescriptor& policy,
                         const TransactionSchedule& schedule,
                         const MinerParams& params,
                         std::uint64_t seed);

// Sum of weight(step) * fee over the allocations. Empty list -> 0.
double discounted_revenue(std::span<const std::pair<int, Transaction>> choices,
                          const MinerParams& params);

// The trace's non-empty choices, in step order.
std::vector<std::pair<int, Transaction>> allocated_choices(const SimulationTrace& trace);

} // namespace discsched

#endif
