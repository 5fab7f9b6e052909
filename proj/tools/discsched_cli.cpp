// Command-line front end: reproducible experiments over the scheduling
// library, emitting CSV/JSON artifacts. Every command takes an explicit seed
// and embeds it in the output.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "discsched/adversaries.hpp"
#include "discsched/bounds.hpp"
#include "discsched/errors.hpp"
#include "discsched/opt_oracle.hpp"
#include "discsched/rng.hpp"
#include "discsched/schedule_io.hpp"
#include "discsched/simulate.hpp"

namespace {

using namespace discsched;

// ---------------------------------------------------------------------------
// Parallel helpers (DISCSCHED_THREADS caps the fan-out)
// ---------------------------------------------------------------------------

int thread_budget() {
    int budget = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("DISCSCHED_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) budget = std::min(budget, cap);
    }
    return budget;
}

// Runs fn(i) for i in [0, n); results must be written to per-index slots.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    const int workers = std::min(thread_budget(), std::max(1, n));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Spec string parsing
// ---------------------------------------------------------------------------

struct AdversarySpec {
    std::string family; // empty when the spec is a schedule file path
    std::string path;
    double epsilon = 1e-6;
    int n = 1;
    int horizon = 0; // 0: derive A1's truncation from the design default
};

AdversarySpec parse_adversary_spec(const std::string& text) {
    static const std::vector<std::string> kFamilies = {
        "greedy_lb", "det_ub_psi", "golden_a1", "golden_a2", "golden_a3", "golden_a4"};
    AdversarySpec spec;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (std::find(kFamilies.begin(), kFamilies.end(), head) == kFamilies.end()) {
        spec.path = text;
        return spec;
    }
    spec.family = head;
    if (colon == std::string::npos) return spec;
    std::string rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string item = rest.substr(0, comma);
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("adversary: expected key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "eps") {
            spec.epsilon = std::stod(value);
        } else if (key == "n") {
            spec.n = std::stoi(value);
        } else if (key == "horizon") {
            spec.horizon = std::stoi(value);
        } else {
            throw std::invalid_argument("adversary: unknown key '" + key + "'");
        }
    }
    return spec;
}

TransactionSchedule build_adversary(const AdversarySpec& spec, double lambda) {
    if (spec.family.empty()) {
        return load_schedule(spec.path);
    }
    AdversaryFamilyParams fam;
    fam.lambda = lambda;
    fam.epsilon = spec.epsilon;
    fam.n = spec.n;
    fam.truncation_horizon =
        spec.horizon > 0 ? spec.horizon : (spec.family == "golden_a1"
                                               ? a1_truncation_horizon(lambda)
                                               : 0);
    if (spec.family == "greedy_lb") return greedy_lb_adversary(lambda, spec.epsilon);
    if (spec.family == "det_ub_psi") return det_ub_psi_adversary(spec.n, lambda);
    if (spec.family == "golden_a1") return golden_adversary(GoldenKind::A1, fam);
    if (spec.family == "golden_a2") return golden_adversary(GoldenKind::A2, fam);
    if (spec.family == "golden_a3") return golden_adversary(GoldenKind::A3, fam);
    if (spec.family == "golden_a4") return golden_adversary(GoldenKind::A4, fam);
    throw std::invalid_argument("unknown adversary family: " + spec.family);
}

std::vector<double> parse_grid(const std::string& text) {
    // "a:b:step" inclusive of both ends (up to rounding).
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw std::invalid_argument("grid: expected a:b:step");
    }
    const double a = std::stod(text.substr(0, c1));
    const double b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(text.substr(c2 + 1));
    if (!(step > 0.0) || b < a) {
        throw std::invalid_argument("grid: need step > 0 and b >= a");
    }
    std::vector<double> grid;
    const int count = static_cast<int>((b - a) / step + 1.5);
    for (int i = 0; i < count; ++i) {
        grid.push_back(std::min(a + i * step, b));
    }
    return grid;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string rest = text;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(std::stod(rest.substr(0, comma)));
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    }
    return out;
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int v = std::stoi(text);
        return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

void deliver(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_file_atomic(out_path, content);
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

// Default horizon: the last emission step plus one slot per transaction. No
// allocation can be pushed later than that, so unbounded TTLs clamp to it
// without losing value.
int default_horizon(const TransactionSchedule& schedule) {
    int last_step = 0;
    for (const auto& [step, txs] : schedule.emissions) {
        if (!txs.empty()) last_step = std::max(last_step, step);
    }
    return std::max(1, last_step + static_cast<int>(schedule.total_transactions()));
}

int cmd_simulate(const std::string& policy_text, const std::string& schedule_path,
                 double lambda, double gamma, int horizon, std::uint64_t seed,
                 const std::string& out_path) {
    TransactionSchedule schedule = load_schedule(schedule_path, -1);
    const int cap = horizon > 0 ? horizon : default_horizon(schedule);
    clamp_ttls(schedule, cap);
    const int T = horizon > 0 ? horizon : std::min(cap, horizon_of(schedule));
    const MinerParams params = make_params(lambda, gamma, std::max(1, T));
    const PolicyDescriptor policy = resolve_policy(parse_policy(policy_text), lambda);
    const SimulationTrace trace = simulate(policy, schedule, params, seed);
    deliver(out_path, trace_to_json(trace, params, seed).dump(2) + "\n");
    std::cerr << "simulate: policy=" << policy_name(policy) << " schedule=" << schedule.label
              << " revenue=" << format_double(trace.revenue) << "\n";
    return 0;
}

int cmd_ratio(const std::string& policy_text, const std::string& adversary_text,
              double lambda, double gamma, int samples, std::uint64_t seed,
              const std::string& out_path) {
    const AdversarySpec spec = parse_adversary_spec(adversary_text);
    const TransactionSchedule schedule = build_adversary(spec, lambda);
    const MinerParams params =
        make_params(lambda, gamma, std::max(1, horizon_of(schedule)));
    const PolicyDescriptor policy = resolve_policy(parse_policy(policy_text), lambda);
    const RatioPoint point =
        competitive_ratio_point(policy, schedule, params, samples, seed);

    std::string csv =
        "policy,adversary,lambda,gamma,samples,seed,policy_revenue,opt_revenue,ratio,ci\n";
    csv += policy_name(policy) + ',' + adversary_text + ',' + format_double(lambda) + ',' +
           format_double(gamma) + ',' + std::to_string(samples) + ',' +
           std::to_string(seed) + ',' + format_double(point.policy_revenue) + ',' +
           format_double(point.opt_revenue) + ',' + format_double(point.ratio) + ',' +
           format_double(point.ci_halfwidth) + '\n';
    deliver(out_path, csv);
    std::cerr << "ratio: " << format_double(point.ratio) << " (ci "
              << format_double(point.ci_halfwidth) << ")\n";
    return 0;
}

int cmd_sweep(const std::string& policy_text, const std::string& family,
              const std::string& n_range_text, const std::string& lambdas_text,
              double gamma, double epsilon, int samples, std::uint64_t seed,
              const std::string& out_path) {
    const auto [n_lo, n_hi] = parse_range(n_range_text);
    std::vector<double> lambdas = parse_list(lambdas_text);
    std::sort(lambdas.begin(), lambdas.end());
    if (n_lo < 1 || n_hi < n_lo) {
        throw std::invalid_argument("sweep: bad n range");
    }

    struct Row {
        double lambda;
        int n;
        double ratio;
        double ci;
    };
    std::vector<Row> rows(lambdas.size() * (n_hi - n_lo + 1));
    const int per_lambda = n_hi - n_lo + 1;
    parallel_for(static_cast<int>(rows.size()), [&](int idx) {
        const double lambda = lambdas[idx / per_lambda];
        const int n = n_lo + idx % per_lambda;
        AdversarySpec spec;
        spec.family = family;
        spec.epsilon = epsilon;
        spec.n = n;
        const TransactionSchedule schedule = build_adversary(spec, lambda);
        const MinerParams params =
            make_params(lambda, gamma, std::max(1, horizon_of(schedule)));
        const PolicyDescriptor policy = resolve_policy(parse_policy(policy_text), lambda);
        const RatioPoint point = competitive_ratio_point(
            policy, schedule, params, samples, SplitRng(seed).stream(idx).key());
        rows[idx] = Row{lambda, n, point.ratio, point.ci_halfwidth};
    });

    std::string csv = "lambda,n,ratio,ci\n";
    for (const Row& row : rows) {
        csv += format_double(row.lambda) + ',' + std::to_string(row.n) + ',' +
               format_double(row.ratio) + ',' + format_double(row.ci) + '\n';
    }
    deliver(out_path, csv);
    std::cerr << "sweep: " << rows.size() << " rows\n";
    return 0;
}

int cmd_bounds(const std::string& grid_text, const std::string& out_path) {
    const std::vector<double> grid = parse_grid(grid_text);
    deliver(out_path, emit_bound_curves(grid));
    std::cerr << "bounds: " << grid.size() << " rows\n";
    return 0;
}

int cmd_solve_ub(double lambda, int n, double tol, const std::string& out_path) {
    const EqualRatioSolution sol = solve_equal_ratio_system(n, lambda, tol);
    const auto ratios = equal_ratio_expressions(sol.x, lambda);
    double max_dev = 0.0;
    for (double r : ratios) max_dev = std::max(max_dev, std::abs(r - sol.V));

    nlohmann::json doc{{"lambda", lambda},
                       {"n", n},
                       {"tol", tol},
                       {"V", sol.V},
                       {"one_over_psi", 1.0 / psi(lambda)},
                       {"residual", sol.residual},
                       {"max_expression_deviation", max_dev},
                       {"x", sol.x},
                       {"r", std::vector<double>(sol.r.begin() + 1, sol.r.end())}};
    deliver(out_path, doc.dump(2) + "\n");
    std::cerr << "solve-ub: V=" << format_double(sol.V)
              << " 1/psi=" << format_double(1.0 / psi(lambda)) << "\n";
    return 0;
}

int cmd_adaptive_ub(const std::string& policy_text, double lambda, double gamma, int n,
                    int samples, std::uint64_t seed, const std::string& out_path) {
    const PolicyDescriptor policy = resolve_policy(parse_policy(policy_text), lambda);
    const MinerParams params = make_params(lambda, gamma, n + 2);
    const int runs = is_randomized(policy) ? samples : 1;
    std::vector<double> alg(runs), adv(runs);
    parallel_for(runs, [&](int i) {
        const auto run =
            run_adaptive(policy, n, params, SplitRng(seed).stream(i).key());
        alg[i] = run.alg_revenue;
        adv[i] = run.adv_revenue;
    });
    double alg_sum = 0.0, adv_sum = 0.0;
    for (int i = 0; i < runs; ++i) {
        alg_sum += alg[i];
        adv_sum += adv[i];
    }
    const double ratio = alg_sum / adv_sum;

    nlohmann::json doc{{"policy", policy_name(policy)},
                       {"lambda", lambda},
                       {"gamma", gamma},
                       {"n", n},
                       {"samples", runs},
                       {"seed", seed},
                       {"mean_alg", alg_sum / runs},
                       {"mean_adv", adv_sum / runs},
                       {"ratio", ratio},
                       {"rand_upper_bound", bound_value(BoundKind::RandUpper, lambda)}};
    deliver(out_path, doc.dump(2) + "\n");
    std::cerr << "adaptive-ub: E[ALG]/E[ADV]=" << format_double(ratio) << "\n";
    return 0;
}

int cmd_oracle(const std::string& schedule_path, double lambda, double gamma,
               const std::string& out_path) {
    TransactionSchedule schedule = load_schedule(schedule_path, -1);
    const int cap = default_horizon(schedule);
    clamp_ttls(schedule, cap);
    const int T = std::max(1, std::min(cap, horizon_of(schedule)));
    const MinerParams params = make_params(lambda, gamma, T);
    const OptResult result = opt_matching(schedule, params);
    deliver(out_path, assignment_csv(result, params));
    std::cerr << "oracle: revenue=" << format_double(result.revenue) << " matched="
              << result.assignment.size() << "/" << result.txs.size() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online allocation of deadline-bearing transactions under discounting"};
    app.require_subcommand(1);

    std::string policy = "greedy", adversary, schedule_path, out_path;
    std::string grid = "0:1:0.01", lambdas = "0.5", n_range = "1..1";
    std::string family = "det_ub_psi";
    double lambda = 1.0, gamma = 1.0, tol = 1e-8, epsilon = 1e-6;
    int horizon = 0, samples = 1, n = 10;
    std::uint64_t seed = 1;

    auto* sim = app.add_subcommand("simulate", "Run one policy over a schedule file");
    sim->add_option("--policy", policy);
    sim->add_option("--schedule", schedule_path)->required();
    sim->add_option("--lambda", lambda);
    sim->add_option("--gamma", gamma);
    sim->add_option("--horizon", horizon);
    sim->add_option("--seed", seed);
    sim->add_option("--out", out_path);

    auto* ratio = app.add_subcommand("ratio", "Policy-vs-optimum ratio on one adversary");
    ratio->add_option("--policy", policy);
    ratio->add_option("--adversary", adversary)->required();
    ratio->add_option("--lambda", lambda);
    ratio->add_option("--gamma", gamma);
    ratio->add_option("--samples", samples);
    ratio->add_option("--seed", seed);
    ratio->add_option("--out", out_path);

    auto* sweep = app.add_subcommand("sweep", "Ratio sweep over a family index and lambdas");
    sweep->add_option("--policy", policy);
    sweep->add_option("--family", family);
    sweep->add_option("--n", n_range);
    sweep->add_option("--lambdas", lambdas);
    sweep->add_option("--gamma", gamma);
    sweep->add_option("--eps", epsilon);
    sweep->add_option("--samples", samples);
    sweep->add_option("--seed", seed);
    sweep->add_option("--out", out_path);

    auto* bounds = app.add_subcommand("bounds", "Emit the bound curves CSV");
    bounds->add_option("--grid", grid);
    bounds->add_option("--out", out_path);

    auto* solve = app.add_subcommand("solve-ub", "Solve the equal-ratio fee system");
    solve->add_option("--lambda", lambda);
    solve->add_option("--n", n);
    solve->add_option("--tol", tol);
    solve->add_option("--out", out_path);

    auto* adaptive = app.add_subcommand("adaptive-ub", "Run the adaptive adversary");
    adaptive->add_option("--policy", policy);
    adaptive->add_option("--lambda", lambda);
    adaptive->add_option("--gamma", gamma);
    adaptive->add_option("--n", n);
    adaptive->add_option("--samples", samples);
    adaptive->add_option("--seed", seed);
    adaptive->add_option("--out", out_path);

    auto* oracle = app.add_subcommand("oracle", "Offline optimum of a schedule file");
    oracle->add_option("--schedule", schedule_path)->required();
    oracle->add_option("--lambda", lambda);
    oracle->add_option("--gamma", gamma);
    oracle->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
        if (sim->parsed()) {
            return cmd_simulate(policy, schedule_path, lambda, gamma, horizon, seed, out_path);
        }
        if (ratio->parsed()) {
            return cmd_ratio(policy, adversary, lambda, gamma, samples, seed, out_path);
        }
        if (sweep->parsed()) {
            return cmd_sweep(policy, family, n_range, lambdas, gamma, epsilon, samples, seed,
                             out_path);
        }
        if (bounds->parsed()) {
            return cmd_bounds(grid, out_path);
        }
        if (solve->parsed()) {
            return cmd_solve_ub(lambda, n, tol, out_path);
        }
        if (adaptive->parsed()) {
            return cmd_adaptive_ub(policy, lambda, gamma, n, samples, seed, out_path);
        }
        if (oracle->parsed()) {
            return cmd_oracle(schedule_path, lambda, gamma, out_path);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const NoSignChange& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const NonMonotoneRatios& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
