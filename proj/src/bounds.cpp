#include "discsched/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "discsched/errors.hpp"

namespace discsched {
namespace {

// min_{n>=1} S_{n+1}/S_{2n} with S_m = sum_{i=0}^m lambda^i. The term is
// eventually increasing in n for lambda < 1; stop after two consecutive
// rises, cap 10^4. At lambda = 1 the term is (n+2)/(2n+1) -> 1/2.
double chain_min_term(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda >= 1.0) return 0.5;
    double best = std::numeric_limits<double>::infinity();
    double prev = best;
    int rises = 0;
    for (int n = 1; n <= 10000; ++n) {
        const double num = 1.0 - std::pow(lambda, n + 2);
        const double den = 1.0 - std::pow(lambda, 2 * n + 1);
        const double term = num / den;
        best = std::min(best, term);
        if (term > prev) {
            if (++rises >= 2) break;
        } else {
            rises = 0;
        }
        prev = term;
    }
    return best;
}

double bisect(double lo, double hi, const auto& f) {
    double flo = f(lo);
    for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double fmid = f(mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

} // namespace

double psi(double lambda) {
    return 0.5 * (lambda + std::sqrt(lambda * lambda + 4.0));
}

PolicyDescriptor resolve_policy(PolicyDescriptor policy, double lambda) {
    if (policy.psi_auto) {
        policy.psi = psi(lambda);
        policy.psi_auto = false;
    }
    if (policy.kind == PolicyKind::Rmix) {
        policy.lambda = lambda;
    }
    return policy;
}

double bound_value(BoundKind kind, double lambda) {
    switch (kind) {
        case BoundKind::GreedyTight:
            return 1.0 / (1.0 + lambda);
        case BoundKind::DetUpper:
            return 1.0 / psi(lambda);
        case BoundKind::RhoLower:
            return std::min(1.0 / psi(lambda), 1.0 / (1.0 + lambda * lambda * lambda));
        case BoundKind::RhoUpper: {
            const double p = psi(lambda);
            const double l2 = lambda * lambda;
            const double quad = (1.0 + lambda * p) / (1.0 + lambda + l2 * p + l2 * lambda);
            return std::min({1.0 / p, quad, chain_min_term(lambda)});
        }
        case BoundKind::RandUpper:
            return 1.0 - lambda / 4.0;
        case BoundKind::RmixLower:
            return lambda == 0.0 ? 1.0 : (1.0 - std::exp(-lambda)) / lambda;
    }
    return 0.0;
}

double semi_myopic_threshold() {
    const auto gap = [](double lambda) {
        return psi(lambda) - (1.0 + lambda * lambda * lambda);
    };
    if (!(gap(0.5) > 0.0 && gap(0.9) < 0.0)) {
        throw std::logic_error("semi_myopic_threshold: no sign change on [0.5, 0.9]");
    }
    const double root = bisect(0.5, 0.9, gap);

    // The displayed triple equality must hold at the root.
    const double p = psi(root);
    const double cubic = 1.0 + root * root * root;
    const double quad =
        (1.0 + root * p) / (1.0 + root + root * root * p + root * root * root);
    const double a = quad, b = 1.0 / cubic, c = 1.0 / p;
    if (std::abs(a - b) > 1e-6 || std::abs(b - c) > 1e-6 || std::abs(a - c) > 1e-6) {
        throw std::logic_error("semi_myopic_threshold: triple equality violated at root");
    }
    return root;
}

EqualRatioSolution solve_equal_ratio_system(int n, double lambda, double tol) {
    if (n < 2) {
        throw std::invalid_argument("solve_equal_ratio_system: n must be >= 2");
    }
    if (!(lambda > 0.0 && lambda <= 0.999)) {
        throw std::invalid_argument("solve_equal_ratio_system: lambda must be in (0, 0.999]");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("solve_equal_ratio_system: tol must be > 0");
    }

    // Backward pass: from the terminal ratio r_n = (1+V)/(1+V-lambda), invert
    // r_{i+1} = K (1 - 1/r_i) down to r_1, with K = (1+V)/(lambda - V lambda^2).
    // Returns r_1; the defect h(x1) = r_1 - x1 is the bisection target.
    const auto backward_r1 = [&](double x1, std::vector<double>* out) {
        const double V = x1 / (1.0 + lambda * x1);
        const double K = (1.0 + V) / (lambda - V * lambda * lambda);
        double r = (1.0 + V) / (1.0 + V - lambda);
        if (out) (*out)[n] = r;
        for (int i = n - 1; i >= 1; --i) {
            r = K / (K - r);
            if (out) (*out)[i] = r;
        }
        return r;
    };
    const auto defect = [&](double x1) { return backward_r1(x1, nullptr) - x1; };

    double lo = psi(lambda);
    double hi = (1.0 / (1.0 - lambda)) * (1.0 + 1.0 / std::sqrt(lambda));
    if ((defect(lo) <= 0.0) == (defect(hi) <= 0.0)) {
        // Scan for a bracket before giving up.
        bool found = false;
        const int kScan = 10000;
        double prev_x = lo, prev_f = defect(lo);
        for (int i = 1; i <= kScan; ++i) {
            const double x = lo + (hi - lo) * i / kScan;
            const double f = defect(x);
            if ((prev_f <= 0.0) != (f <= 0.0)) {
                lo = prev_x;
                hi = x;
                found = true;
                break;
            }
            prev_x = x;
            prev_f = f;
        }
        if (!found) {
            throw NoSignChange("solve_equal_ratio_system: no sign change on the x1 bracket");
        }
    }

    EqualRatioSolution sol;
    double x1 = bisect(lo, hi, defect);
    // Polish to a fixed point of the backward map so that r_1 and x_1 agree
    // to the last bit; the bisection midpoint can sit one ulp off the chain.
    for (int k = 0; k < 4; ++k) {
        const double next = backward_r1(x1, nullptr);
        if (next == x1) break;
        x1 = next;
    }
    sol.V = x1 / (1.0 + lambda * x1);
    sol.r.assign(n + 1, 1.0);
    backward_r1(x1, &sol.r);

    sol.x.assign(n + 1, 1.0);
    for (int i = 1; i <= n; ++i) {
        sol.x[i] = sol.x[i - 1] * sol.r[i];
    }
    sol.residual = sol.x[n] - sol.x[n - 1] * ((1.0 + sol.V) / (1.0 + sol.V - lambda));

    for (int i = 1; i < n; ++i) {
        if (!(sol.r[i + 1] > sol.r[i])) {
            if (sol.r[i] - sol.r[i + 1] > tol) {
                throw NonMonotoneRatios("solve_equal_ratio_system: ratios not increasing");
            }
        }
    }
    if (std::abs(sol.residual) > tol) {
        throw NoSignChange("solve_equal_ratio_system: residual above tolerance");
    }
    if (sol.V < 1.0 / psi(lambda) - tol) {
        throw std::logic_error("solve_equal_ratio_system: V below 1/psi");
    }
    return sol;
}

std::vector<double> equal_ratio_expressions(std::span<const double> x, double lambda) {
    const int n = static_cast<int>(x.size()) - 1;
    std::vector<double> out;
    out.reserve(n + 1);

    // Deviation at step k: greedy-like play up to k-1, then the TTL=2 pick.
    for (int k = 1; k <= n; ++k) {
        double num = 0.0, den = 0.0, pw = 1.0;
        for (int i = 1; i <= k - 1; ++i) {
            pw *= lambda;
            num += pw * x[i - 1];
            den += pw * x[i];
        }
        pw *= lambda; // lambda^k
        num += pw * x[k];
        den += pw * x[k - 1] + pw * lambda * x[k];
        out.push_back(num / den);
    }

    // Never deviating: urgent picks throughout plus the carried tail.
    double num = 0.0, den = 0.0, pw = 1.0;
    for (int i = 1; i <= n; ++i) {
        pw *= lambda;
        num += pw * x[i - 1];
        den += pw * x[i];
    }
    pw *= lambda; // lambda^{n+1}
    num += pw * x[n];
    den += pw * x[n];
    out.push_back(num / den);
    return out;
}

std::string emit_bound_curves(std::span<const double> lambda_grid) {
    std::string csv = "lambda,greedy,det_upper,rho_lower,rho_upper,rand_upper,rmix_lower\n";
    char buf[64];
    const auto append = [&](double v, char sep) {
        std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
        csv += buf;
    };
    for (double lambda : lambda_grid) {
        append(lambda, ',');
        append(bound_value(BoundKind::GreedyTight, lambda), ',');
        append(bound_value(BoundKind::DetUpper, lambda), ',');
        append(bound_value(BoundKind::RhoLower, lambda), ',');
        append(bound_value(BoundKind::RhoUpper, lambda), ',');
        append(bound_value(BoundKind::RandUpper, lambda), ',');
        append(bound_value(BoundKind::RmixLower, lambda), '\n');
    }
    return csv;
}

} // namespace discsched
