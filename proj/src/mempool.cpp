#include "discsched/mempool.hpp"

#include <algorithm>

#include "discsched/errors.hpp"

namespace discsched {

std::vector<Transaction> available_set(const MempoolState& pool,
                                       const std::vector<Transaction>& emitted) {
    std::vector<Transaction> out;
    out.reserve(pool.alive.size() + emitted.size());
    out.insert(out.end(), pool.alive.begin(), pool.alive.end());
    out.insert(out.end(), emitted.begin(), emitted.end());
    return out;
}

MempoolState mempool_step(const MempoolState& pool,
                          const std::vector<Transaction>& emitted,
                          const std::optional<Transaction>& allocated) {
    std::vector<Transaction> combined = available_set(pool, emitted);

    if (allocated.has_value()) {
        auto it = std::find(combined.begin(), combined.end(), *allocated);
        if (it == combined.end()) {
            throw AllocatedNotPresent("allocated transaction not present in pool or emissions");
        }
        combined.erase(it);
    }

    MempoolState next;
    next.alive.reserve(combined.size());
    for (const Transaction& tx : combined) {
        if (tx.ttl > 1) {
            next.alive.push_back(Transaction{tx.ttl - 1, tx.fee});
        }
    }
    return next;
}

} // namespace discsched
