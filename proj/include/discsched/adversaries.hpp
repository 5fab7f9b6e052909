#ifndef DISCSCHED_ADVERSARIES_HPP
#define DISCSCHED_ADVERSARIES_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "discsched/policies.hpp"
#include "discsched/types.hpp"

namespace discsched {

// Shared knobs of the fixed adversary families. `epsilon` is the fee
// perturbation, `n` the family index, `truncation_horizon` the cut point for
// families defined at every step.
struct AdversaryFamilyParams {
    double lambda = 1.0;
    double epsilon = 1e-6;
    int n = 1;
    int truncation_horizon = 0;
};

// sigma(1) = {(1,1), (2,1+eps)}; drives greedy to its tight 1/(1+lambda) bound.
TransactionSchedule greedy_lb_adversary(double lambda, double epsilon);

// Psi-power family: sigma(i) = {(1, psi^{i-1}), (2, psi^i)} for i = 1..n.
TransactionSchedule det_ub_psi_adversary(int n, double lambda);

// General equal-ratio family from a fee sequence x (x[0] must be 1, all
// positive): sigma(i) = {(1, x[i-1]), (2, x[i])} for i = 1..n, plus
// sigma(n+1) = {(1, x[n])} when with_tail. Throws NonPositiveFee.
TransactionSchedule det_ub_general_adversary(const std::vector<double>& x, bool with_tail);

// The four constructions bounding the immediacy-biased policy.
// A1: sigma(i) = {(1,1), (2,psi-eps)} for i = 0..truncation_horizon.
// A2: sigma(1) = {(1,1), (2,psi+eps)}.
// A3: sigma(i) = {(n+2, 1+eps), (n+2-i, 1)} for i = 1..n.
// A4: sigma(1) = {(4,1), (1,eps), (2,1-eps)}, sigma(2) = {(2,psi+eps), (1,1)}.
enum class GoldenKind { A1, A2, A3, A4 };
TransactionSchedule golden_adversary(GoldenKind kind, const AdversaryFamilyParams& params);

// Truncation point making the geometric tail of an every-step adversary
// smaller than tail_tol: ceil(ln(tail_tol * (1 - lambda)) / ln(lambda)).
int a1_truncation_horizon(double lambda, double tail_tol = 1e-9);

// ---------------------------------------------------------------------------
// Adaptive adversary for the randomized upper bound.
//
// Per-step protocol, steps i = 1..n with base b = 2/(2-lambda):
//   1. step_emissions() -> {(1, b^{i-1}), (2, b^i)} is published.
//   2. commit_probability(p_i) with the policy's urgent probability (taken
//      before its coin flip) fixes the adversary's own pick: the TTL=2
//      transaction if p_i > 1/2, else the TTL=1 one.
//   3. observe_choice(policy_chose_ttl1) with the realized class advances the
//      protocol. If p_i <= 1/2 and the policy realized the TTL=2 choice, the
//      emissions stop and the adversary takes its leftover at step i+1. At
//      step n with p_n > 1/2 and a realized TTL=1 choice, one extra
//      transaction (1, b^n) is emitted at n+1 and taken.
//
// Out-of-order calls throw ProtocolViolation.
// ---------------------------------------------------------------------------
class AdaptiveAdversary {
public:
    AdaptiveAdversary(int n, double lambda);

    bool finished() const { return finished_; }
    int current_step() const { return step_; }
    double base() const { return base_; }

    std::vector<Transaction> step_emissions();
    Transaction commit_probability(double p_i);
    void observe_choice(bool policy_chose_ttl1);

    // Emissions so far (grows as the protocol runs; final after finished()).
    const TransactionSchedule& realized_schedule() const { return realized_; }
    const std::vector<std::pair<int, Transaction>>& adversary_choices() const {
        return choices_;
    }
    double adversary_revenue(const MinerParams& params) const;

private:
    enum class Phase { Emit, Commit, Observe };

    double power(int exponent) const;

    int n_;
    double lambda_;
    double base_;
    int step_ = 1;
    Phase phase_ = Phase::Emit;
    bool finished_ = false;
    double last_p_ = 0.0;
    TransactionSchedule realized_;
    std::vector<std::pair<int, Transaction>> choices_;
};

// One full run of a policy against the adaptive adversary.
struct AdaptiveRunResult {
    double alg_revenue = 0.0;
    double adv_revenue = 0.0;
    TransactionSchedule realized;
    std::vector<std::pair<int, Transaction>> adversary_choices;
};

AdaptiveRunResult run_adaptive(const PolicyDescriptor& policy,
                               int n,
                               const MinerParams& params,
                               std::uint64_t seed);

} // namespace discsched

#endif
