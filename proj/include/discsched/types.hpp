#ifndef DISCSCHED_TYPES_HPP
#define DISCSCHED_TYPES_HPP

#include <map>
#include <string>
#include <vector>

namespace discsched {

// A schedulable unit: expires after `ttl` further steps (ttl == 1 means "this
// step is the last chance"), paying `fee` revenue units when allocated.
struct Transaction {
    int ttl = 1;
    double fee = 0.0;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

// Validating constructor: ttl >= 1, fee >= 0.
Transaction make_transaction(int ttl, double fee);

// Discounting parameters of the miner. Revenue earned at step j is weighted by
// gamma(j) * lambda^j with gamma(0) = 1 and gamma(j) = gamma for j >= 1.
struct MinerParams {
    double lambda = 1.0;
    double gamma = 1.0;
    int horizon = 1;

    double weight(int step) const;
};

// Validating constructor: lambda, gamma in [0,1], horizon >= 1.
MinerParams make_params(double lambda, double gamma, int horizon);

// Fixed emission schedule: step index -> transactions broadcast at that step.
// Steps without an entry emit nothing.
struct TransactionSchedule {
    std::string label;
    std::map<int, std::vector<Transaction>> emissions;

    void emit(int step, Transaction tx);
    const std::vector<Transaction>& at(int step) const;
    std::size_t total_transactions() const;
};

// Last step at which any emitted transaction could still be allocated:
// max over emissions of (step + ttl - 1); 0 for an empty schedule.
int horizon_of(const TransactionSchedule& schedule);

// Replace TTLs exceeding the horizon by horizon + 1 (finite-horizon stand-in
// for unbounded validity).
void clamp_ttls(TransactionSchedule& schedule, int horizon);

} // namespace discsched

#endif
