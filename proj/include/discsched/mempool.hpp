#ifndef DISCSCHED_MEMPOOL_HPP
#define DISCSCHED_MEMPOOL_HPP

#include <optional>
#include <vector>

#include "discsched/types.hpp"

namespace discsched {

// Multiset of alive transactions, insertion-ordered. TTLs are expressed in
// the current step's frame, so every member has ttl >= 1. States are only
// produced by mempool_step.
struct MempoolState {
    std::vector<Transaction> alive;

    std::size_t size() const { return alive.size(); }
    bool empty() const { return alive.empty(); }
};

// One round of the mempool transition: merge the step's emissions into the
// pool, remove exactly one copy of the allocated transaction (if any), then
// decrement TTLs and drop expirations.
//
// Throws AllocatedNotPresent if `allocated` is in neither the pool nor the
// emissions.
MempoolState mempool_step(const MempoolState& pool,
                          const std::vector<Transaction>& emitted,
                          const std::optional<Transaction>& allocated);

// The set a policy chooses from at one step: pool members first (they arrived
// earlier), then the fresh emissions. The ordering fixes insertion-order
// tie-breaking.
std::vector<Transaction> available_set(const MempoolState& pool,
                                       const std::vector<Transaction>& emitted);

} // namespace discsched

#endif
