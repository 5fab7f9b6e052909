#include "discsched/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace discsched {

Transaction make_transaction(int ttl, double fee) {
    if (ttl < 1) {
        throw std::invalid_argument("transaction ttl must be >= 1");
    }
    if (!(fee >= 0.0)) {
        throw std::invalid_argument("transaction fee must be >= 0");
    }
    return Transaction{ttl, fee};
}

double MinerParams::weight(int step) const {
    const double ratio = step == 0 ? 1.0 : gamma;
    return ratio * std::pow(lambda, step);
}

MinerParams make_params(double lambda, double gamma, int horizon) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("lambda must be in [0,1]");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("gamma must be in [0,1]");
    }
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be >= 1");
    }
    return MinerParams{lambda, gamma, horizon};
}

void TransactionSchedule::emit(int step, Transaction tx) {
    if (step < 0) {
        throw std::invalid_argument("schedule step must be >= 0");
    }
    emissions[step].push_back(make_transaction(tx.ttl, tx.fee));
}

const std::vector<Transaction>& TransactionSchedule::at(int step) const {
    static const std::vector<Transaction> kEmpty;
    auto it = emissions.find(step);
    return it == emissions.end() ? kEmpty : it->second;
}

std::size_t TransactionSchedule::total_transactions() const {
    std::size_t n = 0;
    for (const auto& [step, txs] : emissions) {
        n += txs.size();
    }
    return n;
}

int horizon_of(const TransactionSchedule& schedule) {
    int last = 0;
    for (const auto& [step, txs] : schedule.emissions) {
        for (const Transaction& tx : txs) {
            last = std::max(last, step + tx.ttl - 1);
        }
    }
    return last;
}

void clamp_ttls(TransactionSchedule& schedule, int horizon) {
    for (auto& [step, txs] : schedule.emissions) {
        for (Transaction& tx : txs) {
            tx.ttl = std::min(tx.ttl, horizon + 1);
        }
    }
}

} // namespace discsched
