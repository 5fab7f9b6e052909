// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "discsched/adversaries.hpp"
#include "discsched/bounds.hpp"
#include "discsched/opt_oracle.hpp"
#include "discsched/rng.hpp"
#include "discsched/simulate.hpp"
#include "test_support.hpp"

using namespace discsched;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void report(const std::string& id, bool pass, const std::string& detail, double ms) {
    if (!pass) ++g_failures;
    std::printf("%s criterion %s: %s (%.2f ms)\n", pass ? "PASS" : "FAIL", id.c_str(),
                detail.c_str(), ms);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

const PolicyDescriptor kGreedy{};
const PolicyDescriptor kAlwaysUrgent{PolicyKind::ImmediacyBiased,
                                     std::numeric_limits<double>::infinity(), 0.0, false};

PolicyDescriptor rho_psi(double lambda) {
    return PolicyDescriptor{PolicyKind::ImmediacyBiased, psi(lambda), 0.0, false};
}

// ---------------------------------------------------------------------------
// 1. Example reproduction
// ---------------------------------------------------------------------------
void criterion_1() {
    const auto start = Clock::now();
    const TransactionSchedule s = discsched::testing::example_schedule();

    const double greedy_rev = simulate(kGreedy, s, make_params(1.0, 1.0, 4), 1).revenue;
    const double opt_rev = opt_matching(s, make_params(1.0, 1.0, 4)).revenue;

    // At lambda = 1/4 the optimal assignment must coincide with greedy's.
    const MinerParams quarter = make_params(0.25, 1.0, 4);
    const OptResult opt_q = opt_matching(s, quarter);
    std::set<std::tuple<int, int, double, int>> opt_set;
    for (const auto& [tx, slot] : opt_q.assignment) {
        const TxInstance& t = opt_q.txs[tx];
        opt_set.insert({t.arrival, t.ttl, t.fee, slot});
    }
    // Greedy's picks with identity recovered through the distinct fees.
    const auto trace_q = simulate(kGreedy, s, quarter, 1);
    std::set<std::tuple<int, int, double, int>> greedy_set;
    for (const auto& [step, tx] : trace_q.choices) {
        if (!tx.has_value()) continue;
        for (const auto& [at, list] : s.emissions) {
            for (const Transaction& e : list) {
                if (e.fee == tx->fee) greedy_set.insert({at, e.ttl, e.fee, step});
            }
        }
    }
    const double ms = ms_since(start);

    const bool pass = greedy_rev == 18.0 && opt_rev == 20.0 && opt_set == greedy_set &&
                      ms < 1.0;
    report("1", pass,
           "greedy=" + fmt(greedy_rev) + " opt=" + fmt(opt_rev) +
               " quarter-assignments " + (opt_set == greedy_set ? "equal" : "DIFFER"),
           ms);
}

// ---------------------------------------------------------------------------
// 2. Greedy tight bound
// ---------------------------------------------------------------------------
void criterion_2() {
    const auto start = Clock::now();
    bool pass = true;
    std::string detail;
    for (double lambda : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        const auto schedule = greedy_lb_adversary(lambda, 1e-6);
        const auto point = competitive_ratio_point(kGreedy, schedule,
                                                   make_params(lambda, 1.0, 2), 1, 1);
        const double target = 1.0 / (1.0 + lambda);
        if (std::abs(point.ratio - target) > 1e-5) pass = false;
        detail += fmt(point.ratio) + " ";
    }
    const double ms = ms_since(start);
    pass = pass && ms < 10.0;
    report("2", pass, "ratios vs 1/(1+lambda): " + detail, ms);
}

// ---------------------------------------------------------------------------
// 3. Deterministic upper bound, psi-power family
// ---------------------------------------------------------------------------
void criterion_3() {
    const auto start = Clock::now();
    const double lambda = 0.5;
    const double p = psi(lambda);
    bool pass = true;
    double worst = 0.0;

    const auto measured_ratio = [&](int n) {
        const auto s = det_ub_psi_adversary(n, lambda);
        const MinerParams params = make_params(lambda, 1.0, horizon_of(s));
        const double urgent = simulate(kAlwaysUrgent, s, params, 1).revenue;
        const double greedy = simulate(kGreedy, s, params, 1).revenue;
        return urgent / greedy;
    };
    const auto closed_form = [&](int n) {
        const double lp = lambda * p;
        return (1.0 / p) * (1.0 - std::pow(lp, n + 1)) / (1.0 - std::pow(lp, n));
    };

    for (int n = 1; n <= 20; ++n) {
        const double diff = std::abs(measured_ratio(n) - closed_form(n));
        worst = std::max(worst, diff);
        if (diff > 1e-9) pass = false;
    }
    const double limit_gap = std::abs(measured_ratio(40) - 1.0 / p);
    if (limit_gap > 1e-6) pass = false;

    report("3", pass,
           "max |measured-closed|=" + fmt(worst) + ", |ratio(40)-1/psi|=" + fmt(limit_gap),
           ms_since(start));
}

// ---------------------------------------------------------------------------
// 4. Equal-ratio solver
// ---------------------------------------------------------------------------
void criterion_4() {
    const auto start = Clock::now();
    bool pass = true;
    std::string detail;
    for (double lambda : {0.3, 0.5, 0.75, 0.9}) {
        const auto t0 = Clock::now();
        const auto sol40 = solve_equal_ratio_system(40, lambda, 1e-8);
        const double solve_ms = ms_since(t0);

        bool ok = std::abs(sol40.residual) <= 1e-8;
        // Strict monotonicity and x2 > x1^2 are equivalent to x1 > psi; by
        // n = 40 that margin has collapsed below one ulp (the solution
        // saturates at 1/psi), so strictness is asserted at n = 10 where it
        // is representable, and degrades to exact non-decrease at n = 40.
        const auto sol10 = solve_equal_ratio_system(10, lambda, 1e-8);
        for (std::size_t i = 1; i + 1 < sol10.r.size(); ++i) {
            ok = ok && sol10.r[i + 1] > sol10.r[i];
        }
        for (std::size_t i = 1; i + 1 < sol40.r.size(); ++i) {
            ok = ok && sol40.r[i + 1] >= sol40.r[i];
        }
        ok = ok && sol10.x[2] > sol10.x[1] * sol10.x[1];
        ok = ok && sol40.x[2] >= sol40.x[1] * sol40.x[1] * (1.0 - 1e-15);
        const double target = 1.0 / psi(lambda);
        ok = ok && sol40.V >= target - 1e-8;
        ok = ok && sol40.V - target <= 5e-3;
        ok = ok && solve_ms < 1000.0;

        // Convergence from above; gaps saturate at machine precision by
        // n = 40, so "shrinking" allows float noise of 1e-12.
        double prev_gap = std::numeric_limits<double>::infinity();
        for (int n : {10, 20, 40}) {
            const double gap = solve_equal_ratio_system(n, lambda, 1e-8).V - target;
            ok = ok && gap <= prev_gap + 1e-12;
            prev_gap = gap;
        }
        if (!ok) pass = false;
        detail += "l=" + fmt(lambda) + ":gap=" + fmt(sol40.V - target) + " ";
    }
    report("4", pass, detail, ms_since(start));
}

// ---------------------------------------------------------------------------
// 5. rho_psi bounds on the golden adversaries
// ---------------------------------------------------------------------------

// Ratio at epsilon, halved, and linearly extrapolated to 0.
double extrapolated_ratio(GoldenKind kind, double lambda, double eps) {
    const auto at = [&](double e) {
        AdversaryFamilyParams fam;
        fam.lambda = lambda;
        fam.epsilon = e;
        const auto s = golden_adversary(kind, fam);
        return competitive_ratio_point(rho_psi(lambda), s,
                                       make_params(lambda, 1.0, horizon_of(s)), 1, 1)
            .ratio;
    };
    return 2.0 * at(eps / 2.0) - at(eps);
}

void criterion_5() {
    const double lambda = 0.5;
    const double p = psi(lambda);

    {
        const auto start = Clock::now();
        const double got = extrapolated_ratio(GoldenKind::A2, lambda, 1e-6);
        const double want = p / (1.0 + lambda * p);
        const bool pass = std::abs(got - want) <= 1e-4;
        report("5 [A2]", pass, "extrapolated=" + fmt(got) + " target=" + fmt(want),
               ms_since(start));
    }
    {
        const auto start = Clock::now();
        const double got = extrapolated_ratio(GoldenKind::A4, lambda, 1e-6);
        const double want = (1.0 + lambda * p) /
                            (1.0 + lambda + lambda * lambda * p + std::pow(lambda, 3));
        const bool pass = std::abs(got - want) <= 1e-4;
        report("5 [A4]", pass, "extrapolated=" + fmt(got) + " target=" + fmt(want),
               ms_since(start));
    }
    {
        // A3 at lambda = 0.9: the policy's revenue against the proof's
        // lowest-fee reference play. The reference's displayed heavy tail is
        // shifted one step so that step n holds a single allocation.
        const auto start = Clock::now();
        const double l = 0.9, eps = 1e-6;
        bool pass = true;
        double worst = 0.0;
        for (int n = 1; n <= 10; ++n) {
            AdversaryFamilyParams fam;
            fam.lambda = l;
            fam.epsilon = eps;
            fam.n = n;
            const auto s = golden_adversary(GoldenKind::A3, fam);
            const MinerParams params = make_params(l, 1.0, horizon_of(s));

            const double rho_rev = simulate(rho_psi(l), s, params, 1).revenue;
            const ChooseFn lowest_fee = [](int, std::span<const Transaction> available) {
                PolicyChoice c;
                for (const Transaction& tx : available) {
                    if (!c.chosen || tx.fee < c.chosen->fee ||
                        (tx.fee == c.chosen->fee && tx.ttl < c.chosen->ttl)) {
                        c.chosen = tx;
                    }
                }
                return c;
            };
            const double ref_rev = simulate_with(lowest_fee, s, params).revenue;

            double rho_closed = std::pow(l, n + 1), ref_closed = 0.0;
            for (int i = 1; i <= n; ++i) {
                rho_closed += std::pow(l, i) * (1.0 + eps);
                ref_closed += std::pow(l, i);
            }
            for (int i = n + 1; i <= 2 * n; ++i) ref_closed += std::pow(l, i) * (1.0 + eps);

            const double diff = std::abs(rho_rev / ref_rev - rho_closed / ref_closed);
            worst = std::max(worst, diff);
            if (diff > 1e-6) pass = false;
        }
        report("5 [A3]", pass, "max quotient deviation=" + fmt(worst), ms_since(start));
    }
    {
        // A1 as stated: measured ratio should approach 1/psi. The faithful
        // mempool dynamics contradict this: the policy's own unchosen
        // (2, psi-eps) re-enters its pool as a (1, psi-eps), so every step
        // after the first pays psi-eps instead of 1 and the ratio settles at
        // [1 + (psi-eps)(S-1)] / [(psi-eps) S] with S the discount mass of
        // the truncated run. Kept as stated; expected to fail.
        const auto start = Clock::now();
        bool pass = true;
        std::string detail;
        for (double l : {0.3, 0.5, 0.6}) {
            AdversaryFamilyParams fam;
            fam.lambda = l;
            fam.epsilon = 1e-6;
            fam.truncation_horizon = a1_truncation_horizon(l);
            const auto s = golden_adversary(GoldenKind::A1, fam);
            const double got = competitive_ratio_point(
                                   rho_psi(l), s, make_params(l, 1.0, horizon_of(s)), 1, 1)
                                   .ratio;
            const double stated = 1.0 / psi(l);
            double S = 0.0;
            for (int i = 0; i <= fam.truncation_horizon + 1; ++i) S += std::pow(l, i);
            const double fee = psi(l) - fam.epsilon;
            const double faithful =
                (1.0 + fee * (S - 1.0)) /
                (fee * S - std::pow(l, fam.truncation_horizon) * (fee - 1.0));
            if (std::abs(got - stated) > 1e-4) pass = false;
            detail += "l=" + fmt(l) + ":measured=" + fmt(got) + "/stated=" + fmt(stated) +
                      "/carryover-model=" + fmt(faithful) + " ";
        }
        report("5 [A1]", pass, detail, ms_since(start));
    }
}

// ---------------------------------------------------------------------------
// 6. Semi-myopic threshold
// ---------------------------------------------------------------------------
void criterion_6() {
    const auto start = Clock::now();
    const double root = semi_myopic_threshold();
    const double p = psi(root);
    const double e1 = (1.0 + root * p) /
                      (1.0 + root + root * root * p + std::pow(root, 3));
    const double e2 = 1.0 / (1.0 + std::pow(root, 3));
    const double e3 = 1.0 / p;
    const bool triple = std::abs(e1 - e2) <= 1e-6 && std::abs(e2 - e3) <= 1e-6 &&
                        std::abs(e1 - e3) <= 1e-6;
    const bool pass = std::abs(root - 0.770018) <= 1e-5 && triple;
    report("6", pass, "root=" + fmt(root) + " triple-equality spread=" +
                          fmt(std::max({std::abs(e1 - e2), std::abs(e2 - e3),
                                        std::abs(e1 - e3)})),
           ms_since(start));
}

// ---------------------------------------------------------------------------
// 7. RMIX guarantee (statistical, oblivious schedules)
// ---------------------------------------------------------------------------
void criterion_7() {
    const auto start = Clock::now();
    const SplitRng rng(777001);
    const int n_schedules = 200;
    const int n_samples = 10000;
    bool pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();

    for (double lambda : {0.25, 0.5, 1.0}) {
        const double bound = bound_value(BoundKind::RmixLower, lambda);
        const PolicyDescriptor rmix{PolicyKind::Rmix, 1.0, lambda, false};
        for (int k = 0; k < n_schedules; ++k) {
            const TransactionSchedule s =
                discsched::testing::fuzz_schedule(rng, static_cast<std::uint64_t>(k));
            const MinerParams params =
                make_params(lambda, 1.0, std::max(1, horizon_of(s)));
            const double opt = opt_matching(s, params).revenue;

            const SplitRng sampler = rng.stream(90000 + k);
            double sum = 0.0, sum_sq = 0.0;
            for (int i = 0; i < n_samples; ++i) {
                const double rev = simulate(rmix, s, params, sampler.stream(i).key()).revenue;
                sum += rev;
                sum_sq += rev * rev;
            }
            const double mean = sum / n_samples;
            const double sd = std::sqrt(
                std::max(0.0, (sum_sq - sum * sum / n_samples) / (n_samples - 1)));
            const double margin = mean - (bound * opt - 4.0 * sd / std::sqrt(n_samples));
            worst_margin = std::min(worst_margin, margin);
            if (margin < 0.0) pass = false;
        }
    }
    const double ms = ms_since(start);
    report("7", pass && ms < 120000.0, "worst margin=" + fmt(worst_margin), ms);
}

// ---------------------------------------------------------------------------
// 8. Randomized upper bound (statistical, adaptive adversary)
// ---------------------------------------------------------------------------
void criterion_8() {
    const auto start = Clock::now();
    const double lambda = 1.0;
    const int n = 30, runs = 100000;
    const PolicyDescriptor rmix{PolicyKind::Rmix, 1.0, lambda, false};
    const MinerParams params = make_params(lambda, 1.0, n + 2);
    const SplitRng rng(88);
    double alg = 0.0, adv = 0.0;
    for (int i = 0; i < runs; ++i) {
        const auto run = run_adaptive(rmix, n, params, rng.stream(i).key());
        alg += run.alg_revenue;
        adv += run.adv_revenue;
    }
    const double ratio = alg / adv;
    const double ms = ms_since(start);
    report("8", ratio <= 0.76 && ms < 120000.0,
           "E[ALG]/E[ADV]=" + fmt(ratio) + " <= 0.76 (1 - lambda/4 = 0.75)", ms);
}

// ---------------------------------------------------------------------------
// 9. Oracle equivalence
// ---------------------------------------------------------------------------
void criterion_9() {
    const auto start = Clock::now();
    const SplitRng rng(990);
    bool pass = true;
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const TransactionSchedule s =
            discsched::testing::fuzz_schedule(rng, static_cast<std::uint64_t>(k));
        const SplitRng g = rng.stream(5000 + k);
        const MinerParams params =
            make_params(g.uniform(0), g.uniform(1), std::max(1, horizon_of(s)));
        const double diff =
            std::abs(opt_matching(s, params).revenue - opt_bruteforce(s, params));
        worst = std::max(worst, diff);
        if (diff > 1e-9) pass = false;
    }
    const double ms = ms_since(start);
    report("9", pass && ms < 30000.0, "max |matching - bruteforce|=" + fmt(worst), ms);
}

// ---------------------------------------------------------------------------
// 10. Figure reproduction
// ---------------------------------------------------------------------------
void criterion_10() {
    const auto start = Clock::now();
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
    const std::string csv = emit_bound_curves(grid);

    // Pull the rmix_lower cell of the lambda = 1 row out of the CSV itself.
    std::istringstream in(csv);
    std::string line, last;
    while (std::getline(in, line)) last = line;
    std::istringstream cells(last);
    std::string cell;
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    bool pass = row.size() == 7 && row[0] == 1.0 &&
                std::abs(row[6] - 0.6321205588285577) <= 1e-9;

    for (double lambda : grid) {
        const double greedy = bound_value(BoundKind::GreedyTight, lambda);
        const double det = bound_value(BoundKind::DetUpper, lambda);
        const double rho_lo = bound_value(BoundKind::RhoLower, lambda);
        const double rho_up = bound_value(BoundKind::RhoUpper, lambda);
        const double rand_up = bound_value(BoundKind::RandUpper, lambda);
        const double rmix = bound_value(BoundKind::RmixLower, lambda);
        pass = pass && greedy <= rho_lo + 1e-12 && rho_lo <= det + 1e-12 &&
               det <= rand_up + 1e-12 && rho_lo <= rho_up + 1e-12 &&
               rho_up <= det + 1e-12 && rmix <= rand_up + 1e-12 && rmix >= det - 1e-12;
    }
    report("10", pass, "rmix_lower(1)=" + fmt(row.empty() ? 0.0 : row[6]) +
                           ", orderings hold on the 101-point grid",
           ms_since(start));
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures > 0) {
        std::printf("%d criterion check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
