#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "discsched/bounds.hpp"
#include "discsched/policies.hpp"
#include "discsched/rng.hpp"
#include "discsched/simulate.hpp"
#include "test_support.hpp"

using namespace discsched;
using discsched::testing::fuzz_schedule;

namespace {

std::vector<Transaction> txs(std::initializer_list<Transaction> list) {
    return std::vector<Transaction>(list);
}

// Empirical urgent-choice frequency of rmix_choose over n seeded draws.
double urgent_frequency(const std::vector<Transaction>& available, double lambda,
                        int n, std::uint64_t seed) {
    const SplitRng rng(seed);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const PolicyChoice c = rmix_choose(available, lambda, rng.uniform(i));
        if (c.chosen.has_value() && c.chosen->ttl == 1) ++hits;
    }
    return static_cast<double>(hits) / n;
}

} // namespace

TEST_SUITE("policies") {

TEST_CASE("greedy_choose") {
    auto c = greedy_choose(txs({{1, 2.0}, {2, 4.0}}));
    CHECK(c.chosen == Transaction{2, 4.0});
    CHECK(c.urgent_probability == 0.0);

    CHECK_FALSE(greedy_choose({}).chosen.has_value());

    c = greedy_choose(txs({{1, 5.0}, {3, 5.0}}));
    CHECK(c.chosen == Transaction{1, 5.0}); // fee tie -> lowest ttl
    CHECK(c.urgent_probability == 1.0);
}

TEST_CASE("immediacy_choose") {
    const double p = psi(0.5);
    const double eps = 1e-6;

    auto c = immediacy_choose(txs({{1, 1.0}, {2, p - eps}}), p);
    CHECK(c.chosen == Transaction{1, 1.0});

    c = immediacy_choose(txs({{1, 1.0}, {2, p + eps}}), p);
    CHECK(c.chosen == Transaction{2, p + eps});

    c = immediacy_choose(txs({{5, 10.0}}), 3.0);
    CHECK(c.chosen == Transaction{5, 10.0}); // single-class case

    CHECK_FALSE(immediacy_choose({}, 2.0).chosen.has_value());
}

TEST_CASE("immediacy boundary thresholds") {
    const auto set = txs({{1, 3.0}, {4, 3.0}, {2, 2.0}});

    // psi = 1: the best later transaction wins whenever it matches m1.
    auto c = immediacy_choose(set, 1.0);
    CHECK(c.chosen == Transaction{4, 3.0});

    // Large sentinel: always urgent while a TTL=1 transaction exists.
    const double inf = std::numeric_limits<double>::infinity();
    c = immediacy_choose(set, inf);
    CHECK(c.chosen == Transaction{1, 3.0});
    c = immediacy_choose(txs({{3, 7.0}, {2, 5.0}}), inf);
    CHECK(c.chosen == Transaction{3, 7.0}); // no TTL=1: max of the later class

    // When a TTL=1 transaction holds the global max fee, the sentinel
    // matches greedy's pick.
    const auto g = greedy_choose(set);
    CHECK(immediacy_choose(set, inf).chosen == g.chosen);
}

TEST_CASE("mg_choose") {
    const double p = psi(0.5);
    const double eps = 1e-6;

    auto c = mg_choose(txs({{1, 1.0}, {2, p - eps}}), p);
    CHECK(c.chosen == Transaction{1, 1.0});

    c = mg_choose(txs({{2, 1.0}, {5, p + eps}}), p);
    CHECK(c.chosen == Transaction{5, p + eps}); // m_e = 1 < m_h / psi

    c = mg_choose(txs({{3, 7.0}}), p);
    CHECK(c.chosen == Transaction{3, 7.0});

    CHECK_FALSE(mg_choose({}, p).chosen.has_value());
}

TEST_CASE("mg agrees with immediacy-biased when a TTL=1 transaction is present") {
    const SplitRng rng(91);
    for (std::uint64_t i = 0; i < 400; ++i) {
        const SplitRng g = rng.stream(i);
        std::vector<Transaction> set;
        set.push_back(Transaction{1, 0.1 + 10.0 * g.uniform(0)});
        const int extra = 1 + static_cast<int>(g.uniform(1) * 5);
        for (int t = 0; t < extra; ++t) {
            set.push_back(Transaction{1 + static_cast<int>(g.uniform(2 + 2 * t) * 5),
                                      0.1 + 10.0 * g.uniform(3 + 2 * t)});
        }
        const double threshold = 1.0 + 2.0 * g.uniform(50);
        const auto a = immediacy_choose(set, threshold);
        const auto b = mg_choose(set, threshold);
        REQUIRE(a.chosen.has_value());
        REQUIRE(b.chosen.has_value());
        // Same decision class: both urgent or both the heavy pick.
        CHECK((a.chosen->ttl == 1) == (b.chosen->ttl == 1));
    }
}

TEST_CASE("every policy picks from the presented set") {
    const SplitRng rng(17);
    const std::vector<PolicyDescriptor> policies = {
        {PolicyKind::Greedy, 1.0, 0.0, false},
        {PolicyKind::ImmediacyBiased, 2.0, 0.0, false},
        {PolicyKind::Mg, 1.5, 0.0, false},
        {PolicyKind::Rmix, 1.0, 0.9, false},
    };
    for (std::uint64_t i = 0; i < 200; ++i) {
        const SplitRng g = rng.stream(i);
        std::vector<Transaction> set;
        const int n = static_cast<int>(g.uniform(0) * 6);
        for (int t = 0; t < n; ++t) {
            set.push_back(Transaction{1 + static_cast<int>(g.uniform(1 + 2 * t) * 4),
                                      10.0 * g.uniform(2 + 2 * t)});
        }
        for (const auto& policy : policies) {
            const auto c = policy_choose(policy, set, g.uniform(999));
            if (set.empty()) {
                CHECK_FALSE(c.chosen.has_value());
            } else {
                REQUIRE(c.chosen.has_value());
                CHECK(std::find(set.begin(), set.end(), *c.chosen) != set.end());
            }
        }
    }
}

TEST_CASE("greedy choices are independent of lambda and gamma") {
    const SplitRng rng(23);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const TransactionSchedule s = fuzz_schedule(rng, i);
        const int h = std::max(1, horizon_of(s));
        const auto base = simulate(PolicyDescriptor{}, s, make_params(1.0, 1.0, h), 1);
        for (double lambda : {0.0, 0.2, 0.5, 0.8}) {
            for (double gamma : {0.4, 1.0}) {
                const auto other =
                    simulate(PolicyDescriptor{}, s, make_params(lambda, gamma, h), 1);
                CHECK(other.choices == base.choices);
            }
        }
    }
}

TEST_CASE("rmix degenerate and forced cases") {
    SUBCASE("fee_urg equals fee_max: urgent always wins") {
        const auto set = txs({{1, 10.0}, {3, 10.0}});
        for (int i = 0; i < 200; ++i) {
            const auto c = rmix_choose(set, 0.7, SplitRng(5).uniform(i));
            CHECK(c.chosen == Transaction{1, 10.0});
        }
    }
    SUBCASE("fee_urg below e^{-lambda} fee_max: urgent never wins") {
        const double lambda = 0.8, F = 5.0;
        const auto set = txs({{1, std::exp(-lambda) * F - 1e-9}, {2, F}});
        const SplitRng rng(11);
        for (int i = 0; i < 100000; ++i) {
            const auto c = rmix_choose(set, lambda, rng.uniform(i));
            CHECK(c.chosen->ttl == 2);
        }
        CHECK(rmix_urgent_probability(set, lambda) == 0.0);
    }
    SUBCASE("threshold splits the interval in half") {
        const double lambda = 0.9;
        const auto set = txs({{1, 1.0}, {2, std::exp(lambda / 2.0)}});
        const int n = 100000;
        const double freq = urgent_frequency(set, lambda, n, 13);
        const double sigma = 0.5 / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(freq - 0.5) <= 3.0 * sigma);
        CHECK(rmix_urgent_probability(set, lambda) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("lambda = 0 degenerates to greedy with urgent preference") {
        auto c = rmix_choose(txs({{1, 4.0}, {2, 4.0}}), 0.0, 0.3);
        CHECK(c.chosen == Transaction{1, 4.0});
        c = rmix_choose(txs({{1, 3.0}, {2, 4.0}}), 0.0, 0.3);
        CHECK(c.chosen == Transaction{2, 4.0});
    }
}

TEST_CASE("rmix_urgent_probability closed form") {
    const double lambda = 0.6;
    CHECK(rmix_urgent_probability(txs({{1, 2.0}, {4, 2.0}}), lambda) == 1.0);
    CHECK(rmix_urgent_probability(txs({{1, std::exp(-lambda) * 3.0}, {2, 3.0}}), lambda) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rmix_urgent_probability(txs({{2, 1.0}, {3, 5.0}}), lambda) == 0.0); // no TTL=1
    CHECK(rmix_urgent_probability(txs({{1, 1.0}, {1, 0.5}}), lambda) == 1.0); // only TTL=1
}

TEST_CASE("rmix urgent probability matches empirical frequency on fuzzed sets") {
    const SplitRng rng(37);
    const int n = 100000;
    for (std::uint64_t i = 0; i < 12; ++i) {
        const SplitRng g = rng.stream(i);
        std::vector<Transaction> set;
        set.push_back(Transaction{1, 0.2 + 5.0 * g.uniform(0)});
        const int extra = 1 + static_cast<int>(g.uniform(1) * 4);
        for (int t = 0; t < extra; ++t) {
            set.push_back(Transaction{1 + static_cast<int>(g.uniform(2 + 2 * t) * 4),
                                      0.2 + 8.0 * g.uniform(3 + 2 * t)});
        }
        const double lambda = 0.2 + 0.8 * g.uniform(77);
        const double p = rmix_urgent_probability(set, lambda);
        const double freq = urgent_frequency(set, lambda, n, 1000 + i);
        const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
        CHECK(std::abs(freq - p) <= 4.0 * sigma + 1e-9);
    }
}

TEST_CASE("policy parsing") {
    CHECK(parse_policy("greedy").kind == PolicyKind::Greedy);
    CHECK(parse_policy("rmix").kind == PolicyKind::Rmix);

    const auto ib = parse_policy("ib:1.5");
    CHECK(ib.kind == PolicyKind::ImmediacyBiased);
    CHECK(ib.psi == 1.5);

    const auto mg = parse_policy("mg:auto");
    CHECK(mg.kind == PolicyKind::Mg);
    CHECK(mg.psi_auto);
    const auto resolved = resolve_policy(mg, 0.5);
    CHECK(resolved.psi == doctest::Approx(psi(0.5)).epsilon(1e-15));

    CHECK_THROWS_AS(parse_policy("ib:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_policy("nope"), std::invalid_argument);
}

} // TEST_SUITE
