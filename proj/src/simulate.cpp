#include "discsched/simulate.hpp"

#include <algorithm>
#include <stdexcept>

#include "discsched/errors.hpp"
#include "discsched/rng.hpp"

namespace discsched {

SimulationTrace simulate_with(const ChooseFn& choose,
                              const TransactionSchedule& schedule,
                              const MinerParams& params) {
    if (!schedule.emissions.empty() &&
        schedule.emissions.rbegin()->first > params.horizon) {
        throw std::invalid_argument("schedule emits past params.horizon");
    }

    SimulationTrace trace;
    trace.schedule_label = schedule.label;
    trace.choices.reserve(params.horizon + 1);
    trace.mempool_sizes.reserve(params.horizon + 1);

    MempoolState pool;
    for (int step = 0; step <= params.horizon; ++step) {
        trace.mempool_sizes.push_back(static_cast<int>(pool.size()));
        const std::vector<Transaction>& emitted = schedule.at(step);
        const std::vector<Transaction> available = available_set(pool, emitted);

        PolicyChoice choice = choose(step, available);
        if (choice.chosen.has_value()) {
            if (std::find(available.begin(), available.end(), *choice.chosen) ==
                available.end()) {
                throw PolicyChoseUnavailable("policy chose a transaction outside the presented set");
            }
            trace.revenue += params.weight(step) * choice.chosen->fee;
        }
        trace.choices.emplace_back(step, choice.chosen);
        pool = mempool_step(pool, emitted, choice.chosen);
    }
    return trace;
}

SimulationTrace simulate(const PolicyDescriptor& policy,
                         const TransactionSchedule& schedule,
                         const MinerParams& params,
                         std::uint64_t seed) {
    const SplitRng rng(seed);
    const ChooseFn choose = [&](int step, std::span<const Transaction> available) {
        return policy_choose(policy, available, rng.uniform(static_cast<std::uint64_t>(step)));
    };
    return simulate_with(choose, schedule, params);
}

double discounted_revenue(std::span<const std::pair<int, Transaction>> choices,
                          const MinerParams& params) {
    double total = 0.0;
    for (const auto& [step, tx] : choices) {
        total += params.weight(step) * tx.fee;
    }
    return total;
}

std::vector<std::pair<int, Transaction>> allocated_choices(const SimulationTrace& trace) {
    std::vector<std::pair<int, Transaction>> out;
    for (const auto& [step, tx] : trace.choices) {
        if (tx.has_value()) out.emplace_back(step, *tx);
    }
    return out;
}

} // namespace discsched
