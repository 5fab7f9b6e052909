#ifndef DISCSCHED_BOUNDS_HPP
#define DISCSCHED_BOUNDS_HPP

#include <span>
#include <string>
#include <vector>

#include "discsched/policies.hpp"

namespace discsched {

// Generalized golden ratio (lambda + sqrt(lambda^2 + 4)) / 2; satisfies
// psi^2 = 1 + lambda * psi. 1/psi is the deterministic bound.
double psi(double lambda);

// Fills an "auto" threshold with psi(lambda) and stamps RMIX's discount.
PolicyDescriptor resolve_policy(PolicyDescriptor policy, double lambda);

enum class BoundKind { GreedyTight, DetUpper, RhoLower, RhoUpper, RandUpper, RmixLower };

// Closed-form bound curves:
//   GreedyTight  1/(1+lambda)
//   DetUpper     1/psi(lambda)
//   RhoLower     min{ 1/psi, 1/(1+lambda^3) }
//   RhoUpper     min{ 1/psi, (1+lambda*psi)/(1+lambda+lambda^2*psi+lambda^3),
//                     min_{n>=1} sum_{i<=n+1} lambda^i / sum_{i<=2n} lambda^i }
//   RandUpper    1 - lambda/4
//   RmixLower    (1 - e^{-lambda})/lambda, 1 at lambda = 0
double bound_value(BoundKind kind, double lambda);

// Root of psi(lambda) = 1 + lambda^3 in (0,1): the point where the
// immediacy-biased policy stops being optimal (~0.770018). Verifies the
// triple equality of the defining expressions at the root.
double semi_myopic_threshold();

// Solution of the Appendix-style equal-ratio fee system: fees x_0=1, x_1..x_n
// making all n+1 deviation ratios equal to the common value V = x_1/(1 +
// lambda*x_1). r_i = x_i / x_{i-1} must come out strictly increasing.
struct EqualRatioSolution {
    std::vector<double> x; // x[0] = 1, x[1..n]
    double V = 0.0;
    std::vector<double> r; // r[0] unused sentinel 1, r[1..n]
    double residual = 0.0; // x_n - (1+V) x_{n-1} / (1+V-lambda)
};

// Bisection on x_1 over the bracket [psi(lambda), (1/(1-lambda))(1+1/sqrt(lambda))].
// Given a candidate x_1, the ratio recursion is propagated backward from the
// terminal equation r_n = (1+V)/(1+V-lambda); the forward direction amplifies
// roundoff along the dominant characteristic root and is useless past n ~ 20.
// Throws NoSignChange if no bracket is found even by scanning, and
// NonMonotoneRatios if the solved ratios fail monotonicity.
EqualRatioSolution solve_equal_ratio_system(int n, double lambda, double tol = 1e-8);

// The n+1 ratio expressions (deviation at step k = 1..n, then the
// no-deviation run) evaluated on a solution; all must equal V within the
// solver tolerance. Independent certificate of the solver output.
std::vector<double> equal_ratio_expressions(std::span<const double> x, double lambda);

// CSV "lambda,greedy,det_upper,rho_lower,rho_upper,rand_upper,rmix_lower",
// one row per grid value, 17 significant digits.
std::string emit_bound_curves(std::span<const double> lambda_grid);

} // namespace discsched

#endif
