#ifndef DISCSCHED_POLICIES_HPP
#define DISCSCHED_POLICIES_HPP

#include <optional>
#include <span>
#include <string>

#include "discsched/types.hpp"

namespace discsched {

enum class PolicyKind { Greedy, ImmediacyBiased, Rmix, Mg };

// Value description of an online allocation policy. `psi` is the threshold of
// the immediacy-biased and MG rules (psi >= 1); `lambda` is RMIX's discount.
// `psi_auto` marks descriptors parsed as "ib:auto" / "mg:auto": the caller
// resolves psi from the discount before use (see bounds::resolve_policy).
struct PolicyDescriptor {
    PolicyKind kind = PolicyKind::Greedy;
    double psi = 1.0;
    double lambda = 0.0;
    bool psi_auto = false;
};

bool is_randomized(const PolicyDescriptor& policy);

// Parses "greedy", "ib:<psi|auto>", "rmix", "mg:<psi|auto>".
PolicyDescriptor parse_policy(const std::string& text);
std::string policy_name(const PolicyDescriptor& policy);

// Outcome of one decision. `urgent_probability` is the probability mass the
// policy puts on choosing a TTL=1 transaction at this step, evaluated before
// any randomization is resolved; it is 0 or 1 for deterministic policies.
struct PolicyChoice {
    std::optional<Transaction> chosen;
    double urgent_probability = 0.0;
};

// Highest fee wins; equal fees prefer the lower TTL, then earlier insertion.
PolicyChoice greedy_choose(std::span<const Transaction> available);

// Best TTL=1 transaction unless the best TTL>1 transaction pays at least psi
// times more. A single nonempty class is chosen unconditionally.
PolicyChoice immediacy_choose(std::span<const Transaction> available, double psi);

// Best earliest-deadline transaction unless the overall best pays more than
// psi times it.
PolicyChoice mg_choose(std::span<const Transaction> available, double psi);

// Randomized mix: with x drawn uniform on [-lambda, 0], take the best
// minimum-TTL transaction iff its fee >= e^x * (max fee), else the max-fee
// transaction. `unit_draw` in [0,1) supplies the randomness.
PolicyChoice rmix_choose(std::span<const Transaction> available, double lambda,
                         double unit_draw);

// Closed-form probability that rmix_choose picks a TTL=1 transaction on this
// set: clamp((lambda + ln(fee_urg/fee_max)) / lambda, 0, 1) when the minimum
// TTL present is 1; 0 when no TTL=1 transaction exists. lambda = 0 is the
// deterministic limit.
double rmix_urgent_probability(std::span<const Transaction> available, double lambda);

// Dispatch on the descriptor. `unit_draw` is consumed only by RMIX.
PolicyChoice policy_choose(const PolicyDescriptor& policy,
                           std::span<const Transaction> available,
                           double unit_draw);

// The policy's urgent probability on this set without resolving randomness
// (dry run for deterministic kinds).
double policy_urgent_probability(const PolicyDescriptor& policy,
                                 std::span<const Transaction> available);

} // namespace discsched

#endif
