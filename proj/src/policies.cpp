#include "discsched/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace discsched {
namespace {

// Index of the best transaction under the predicate, by (fee desc, ttl asc,
// insertion asc); -1 when no member satisfies the predicate.
template <typename Pred>
int best_index(std::span<const Transaction> available, Pred&& keep) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(available.size()); ++i) {
        if (!keep(available[i])) continue;
        if (best < 0) {
            best = i;
            continue;
        }
        const Transaction& tx = available[i];
        const Transaction& cur = available[best];
        if (tx.fee > cur.fee || (tx.fee == cur.fee && tx.ttl < cur.ttl)) {
            best = i;
        }
    }
    return best;
}

int min_ttl_present(std::span<const Transaction> available) {
    int m = 0;
    for (const Transaction& tx : available) {
        if (m == 0 || tx.ttl < m) m = tx.ttl;
    }
    return m;
}

PolicyChoice as_choice(std::span<const Transaction> available, int index) {
    PolicyChoice choice;
    if (index >= 0) {
        choice.chosen = available[index];
        choice.urgent_probability = available[index].ttl == 1 ? 1.0 : 0.0;
    }
    return choice;
}

} // namespace

bool is_randomized(const PolicyDescriptor& policy) {
    return policy.kind == PolicyKind::Rmix;
}

PolicyDescriptor parse_policy(const std::string& text) {
    PolicyDescriptor d;
    if (text == "greedy") {
        d.kind = PolicyKind::Greedy;
        return d;
    }
    if (text == "rmix") {
        d.kind = PolicyKind::Rmix;
        return d;
    }
    const auto parse_threshold = [&](const std::string& arg) {
        if (arg == "auto") {
            d.psi_auto = true;
            return;
        }
        d.psi = std::stod(arg);
        if (!(d.psi >= 1.0)) {
            throw std::invalid_argument("policy psi must be >= 1");
        }
    };
    if (text.rfind("ib:", 0) == 0) {
        d.kind = PolicyKind::ImmediacyBiased;
        parse_threshold(text.substr(3));
        return d;
    }
    if (text.rfind("mg:", 0) == 0) {
        d.kind = PolicyKind::Mg;
        parse_threshold(text.substr(3));
        return d;
    }
    throw std::invalid_argument("unknown policy spec: " + text);
}

std::string policy_name(const PolicyDescriptor& policy) {
    switch (policy.kind) {
        case PolicyKind::Greedy: return "greedy";
        case PolicyKind::Rmix: return "rmix";
        case PolicyKind::ImmediacyBiased: return "ib:" + std::to_string(policy.psi);
        case PolicyKind::Mg: return "mg:" + std::to_string(policy.psi);
    }
    return "?";
}

PolicyChoice greedy_choose(std::span<const Transaction> available) {
    return as_choice(available, best_index(available, [](const Transaction&) { return true; }));
}

PolicyChoice immediacy_choose(std::span<const Transaction> available, double psi) {
    const int urgent = best_index(available, [](const Transaction& tx) { return tx.ttl == 1; });
    const int later = best_index(available, [](const Transaction& tx) { return tx.ttl > 1; });
    if (urgent < 0) return as_choice(available, later);
    if (later < 0) return as_choice(available, urgent);
    // Multiplicative form of m_{>1} / m_1 >= psi; avoids 0/0 when both maxima
    // are zero-fee (then the comparison is false and the urgent one wins).
    const bool take_later = available[later].fee >= psi * available[urgent].fee;
    return as_choice(available, take_later ? later : urgent);
}

PolicyChoice mg_choose(std::span<const Transaction> available, double psi) {
    if (available.empty()) return PolicyChoice{};
    const int earliest_ttl = min_ttl_present(available);
    const int earliest =
        best_index(available, [&](const Transaction& tx) { return tx.ttl == earliest_ttl; });
    const int heaviest = best_index(available, [](const Transaction&) { return true; });
    // m_e >= m_h / psi, in multiplicative form.
    const bool take_earliest = psi * available[earliest].fee >= available[heaviest].fee;
    return as_choice(available, take_earliest ? earliest : heaviest);
}

PolicyChoice rmix_choose(std::span<const Transaction> available, double lambda,
                         double unit_draw) {
    if (available.empty()) return PolicyChoice{};
    const int earliest_ttl = min_ttl_present(available);
    const int urgent =
        best_index(available, [&](const Transaction& tx) { return tx.ttl == earliest_ttl; });
    const int heaviest = best_index(available, [](const Transaction&) { return true; });

    const double x = -lambda * unit_draw;
    const bool take_urgent =
        available[urgent].fee >= std::exp(x) * available[heaviest].fee;
    PolicyChoice choice = as_choice(available, take_urgent ? urgent : heaviest);
    choice.urgent_probability = rmix_urgent_probability(available, lambda);
    return choice;
}

double rmix_urgent_probability(std::span<const Transaction> available, double lambda) {
    const int earliest_ttl = min_ttl_present(available);
    if (earliest_ttl != 1) return 0.0;
    const int urgent = best_index(available, [](const Transaction& tx) { return tx.ttl == 1; });
    const int heaviest = best_index(available, [](const Transaction&) { return true; });
    const double fee_urg = available[urgent].fee;
    const double fee_max = available[heaviest].fee;
    if (fee_max == 0.0) return 1.0; // all fees zero: the urgent branch always fires
    if (lambda == 0.0) return fee_urg >= fee_max ? 1.0 : 0.0;
    const double p = (lambda + std::log(fee_urg / fee_max)) / lambda;
    return std::clamp(p, 0.0, 1.0);
}

PolicyChoice policy_choose(const PolicyDescriptor& policy,
                           std::span<const Transaction> available,
                           double unit_draw) {
    switch (policy.kind) {
        case PolicyKind::Greedy: return greedy_choose(available);
        case PolicyKind::ImmediacyBiased: return immediacy_choose(available, policy.psi);
        case PolicyKind::Mg: return mg_choose(available, policy.psi);
        case PolicyKind::Rmix: return rmix_choose(available, policy.lambda, unit_draw);
    }
    return PolicyChoice{};
}

double policy_urgent_probability(const PolicyDescriptor& policy,
                                 std::span<const Transaction> available) {
    if (policy.kind == PolicyKind::Rmix) {
        return rmix_urgent_probability(available, policy.lambda);
    }
    return policy_choose(policy, available, 0.0).urgent_probability;
}

} // namespace discsched
