#include "discsched/adversaries.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "discsched/bounds.hpp"
#include "discsched/errors.hpp"
#include "discsched/mempool.hpp"
#include "discsched/rng.hpp"

namespace discsched {
namespace {

std::string tag(double v) {
    return std::to_string(v);
}

} // namespace

TransactionSchedule greedy_lb_adversary(double lambda, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("greedy_lb_adversary: epsilon must be > 0");
    }
    TransactionSchedule schedule;
    schedule.label = "greedy_lb(lambda=" + tag(lambda) + ",eps=" + tag(epsilon) + ")";
    schedule.emit(1, Transaction{1, 1.0});
    schedule.emit(1, Transaction{2, 1.0 + epsilon});
    return schedule;
}

TransactionSchedule det_ub_psi_adversary(int n, double lambda) {
    if (n < 1) {
        throw std::invalid_argument("det_ub_psi_adversary: n must be >= 1");
    }
    const double ratio = psi(lambda);
    TransactionSchedule schedule;
    schedule.label = "det_ub_psi(n=" + std::to_string(n) + ",lambda=" + tag(lambda) + ")";
    double prev = 1.0; // ratio^{i-1}
    for (int i = 1; i <= n; ++i) {
        const double cur = prev * ratio;
        schedule.emit(i, Transaction{1, prev});
        schedule.emit(i, Transaction{2, cur});
        prev = cur;
    }
    return schedule;
}

TransactionSchedule det_ub_general_adversary(const std::vector<double>& x, bool with_tail) {
    if (x.size() < 2) {
        throw std::invalid_argument("det_ub_general_adversary: need x0 and at least x1");
    }
    if (std::abs(x[0] - 1.0) > 1e-12) {
        throw std::invalid_argument("det_ub_general_adversary: x[0] must be 1");
    }
    for (double v : x) {
        if (!(v > 0.0)) {
            throw NonPositiveFee("det_ub_general_adversary: fees must be strictly positive");
        }
    }
    const int n = static_cast<int>(x.size()) - 1;
    TransactionSchedule schedule;
    schedule.label = "det_ub_general(n=" + std::to_string(n) +
                     (with_tail ? ",tail" : "") + ")";
    for (int i = 1; i <= n; ++i) {
        schedule.emit(i, Transaction{1, x[i - 1]});
        schedule.emit(i, Transaction{2, x[i]});
    }
    if (with_tail) {
        schedule.emit(n + 1, Transaction{1, x[n]});
    }
    return schedule;
}

int a1_truncation_horizon(double lambda, double tail_tol) {
    if (lambda <= 0.0) return 1;
    if (lambda >= 1.0) {
        throw std::invalid_argument("a1_truncation_horizon: lambda must be < 1");
    }
    const double steps = std::log(tail_tol * (1.0 - lambda)) / std::log(lambda);
    return std::max(1, static_cast<int>(std::ceil(steps)));
}

TransactionSchedule golden_adversary(GoldenKind kind, const AdversaryFamilyParams& params) {
    if (!(params.epsilon > 0.0 && params.epsilon < 1.0)) {
        throw std::invalid_argument("golden_adversary: epsilon must be in (0,1)");
    }
    const double ratio = psi(params.lambda);
    const double eps = params.epsilon;
    TransactionSchedule schedule;
    switch (kind) {
        case GoldenKind::A1: {
            if (params.truncation_horizon < 1) {
                throw std::invalid_argument("golden_adversary A1: truncation_horizon required");
            }
            schedule.label = "golden_a1(lambda=" + tag(params.lambda) + ",eps=" + tag(eps) +
                             ",N=" + std::to_string(params.truncation_horizon) + ")";
            for (int i = 0; i <= params.truncation_horizon; ++i) {
                schedule.emit(i, Transaction{1, 1.0});
                schedule.emit(i, Transaction{2, ratio - eps});
            }
            break;
        }
        case GoldenKind::A2: {
            schedule.label = "golden_a2(lambda=" + tag(params.lambda) + ",eps=" + tag(eps) + ")";
            schedule.emit(1, Transaction{1, 1.0});
            schedule.emit(1, Transaction{2, ratio + eps});
            break;
        }
        case GoldenKind::A3: {
            if (params.n < 1) {
                throw std::invalid_argument("golden_adversary A3: n must be >= 1");
            }
            schedule.label = "golden_a3(n=" + std::to_string(params.n) +
                             ",lambda=" + tag(params.lambda) + ",eps=" + tag(eps) + ")";
            for (int i = 1; i <= params.n; ++i) {
                schedule.emit(i, Transaction{params.n + 2, 1.0 + eps});
                schedule.emit(i, Transaction{params.n + 2 - i, 1.0});
            }
            break;
        }
        case GoldenKind::A4: {
            schedule.label = "golden_a4(lambda=" + tag(params.lambda) + ",eps=" + tag(eps) + ")";
            schedule.emit(1, Transaction{4, 1.0});
            schedule.emit(1, Transaction{1, eps});
            schedule.emit(1, Transaction{2, 1.0 - eps});
            schedule.emit(2, Transaction{2, ratio + eps});
            schedule.emit(2, Transaction{1, 1.0});
            break;
        }
    }
    return schedule;
}

// ---------------------------------------------------------------------------
// Adaptive adversary
// ---------------------------------------------------------------------------

AdaptiveAdversary::AdaptiveAdversary(int n, double lambda) : n_(n), lambda_(lambda) {
    if (n < 1) {
        throw std::invalid_argument("AdaptiveAdversary: n must be >= 1");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("AdaptiveAdversary: lambda must be in [0,1]");
    }
    base_ = 2.0 / (2.0 - lambda);
    realized_.label = "adaptive(n=" + std::to_string(n) + ",lambda=" + tag(lambda) + ")";
}

double AdaptiveAdversary::power(int exponent) const {
    return std::pow(base_, exponent);
}

std::vector<Transaction> AdaptiveAdversary::step_emissions() {
    if (finished_ || phase_ != Phase::Emit) {
        throw ProtocolViolation("step_emissions out of order");
    }
    const std::vector<Transaction> txs = {Transaction{1, power(step_ - 1)},
                                          Transaction{2, power(step_)}};
    for (const Transaction& tx : txs) {
        realized_.emit(step_, tx);
    }
    phase_ = Phase::Commit;
    return txs;
}

Transaction AdaptiveAdversary::commit_probability(double p_i) {
    if (finished_ || phase_ != Phase::Commit) {
        throw ProtocolViolation("commit_probability out of order");
    }
    if (!(p_i >= 0.0 && p_i <= 1.0)) {
        throw std::invalid_argument("commit_probability: p_i must be in [0,1]");
    }
    last_p_ = p_i;
    const Transaction pick = p_i > 0.5 ? Transaction{2, power(step_)}
                                       : Transaction{1, power(step_ - 1)};
    choices_.emplace_back(step_, pick);
    phase_ = Phase::Observe;
    return pick;
}

void AdaptiveAdversary::observe_choice(bool policy_chose_ttl1) {
    if (finished_ || phase_ != Phase::Observe) {
        throw ProtocolViolation("observe_choice out of order");
    }
    if (step_ < n_) {
        if (last_p_ <= 0.5 && !policy_chose_ttl1) {
            // The policy spent the TTL=2 transaction; the adversary's own
            // leftover (2, b^i) is collected at step i+1 and emissions stop.
            choices_.emplace_back(step_ + 1, Transaction{1, power(step_)});
            finished_ = true;
        } else {
            ++step_;
            phase_ = Phase::Emit;
        }
        return;
    }
    if (last_p_ <= 0.5) {
        // Adversary took TTL=1 at step n; its leftover is still collectable.
        choices_.emplace_back(n_ + 1, Transaction{1, power(n_)});
    } else if (policy_chose_ttl1) {
        // Contest the policy's carried transaction with one extra emission.
        realized_.emit(n_ + 1, Transaction{1, power(n_)});
        choices_.emplace_back(n_ + 1, Transaction{1, power(n_)});
    }
    finished_ = true;
}

double AdaptiveAdversary::adversary_revenue(const MinerParams& params) const {
    double total = 0.0;
    for (const auto& [step, tx] : choices_) {
        total += params.weight(step) * tx.fee;
    }
    return total;
}

AdaptiveRunResult run_adaptive(const PolicyDescriptor& policy,
                               int n,
                               const MinerParams& params,
                               std::uint64_t seed) {
    AdaptiveAdversary adversary(n, params.lambda);
    const SplitRng rng(seed);
    MempoolState pool;
    AdaptiveRunResult result;

    int step = 1;
    while (!adversary.finished()) {
        const std::vector<Transaction> emitted = adversary.step_emissions();
        const std::vector<Transaction> available = available_set(pool, emitted);
        const double p = policy_urgent_probability(policy, available);
        adversary.commit_probability(p);

        const PolicyChoice choice =
            policy_choose(policy, available, rng.uniform(static_cast<std::uint64_t>(step)));
        result.alg_revenue += params.weight(step) * choice.chosen->fee;
        adversary.observe_choice(choice.chosen->ttl == 1);
        pool = mempool_step(pool, emitted, choice.chosen);
        ++step;
    }

    // Drain: the realized schedule may carry one final emission, and the
    // policy may still hold live transactions.
    while (true) {
        const std::vector<Transaction>& emitted = adversary.realized_schedule().at(step);
        if (emitted.empty() && pool.empty()) break;
        const std::vector<Transaction> available = available_set(pool, emitted);
        const PolicyChoice choice =
            policy_choose(policy, available, rng.uniform(static_cast<std::uint64_t>(step)));
        if (choice.chosen.has_value()) {
            result.alg_revenue += params.weight(step) * choice.chosen->fee;
        }
        pool = mempool_step(pool, emitted, choice.chosen);
        ++step;
    }

    result.adv_revenue = adversary.adversary_revenue(params);
    result.realized = adversary.realized_schedule();
    result.adversary_choices = adversary.adversary_choices();
    return result;
}

} // namespace discsched
