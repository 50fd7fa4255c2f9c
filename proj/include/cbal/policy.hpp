#ifndef CBAL_POLICY_HPP
#define CBAL_POLICY_HPP

#include <Eigen/Core>

#include "cbal/rng.hpp"
#include "cbal/types.hpp"

namespace cbal {

/// Probe design policy parameters. alpha is the designed protection time
/// ratio; horizon is the probing budget N_T.
struct PolicyConfig {
    double alpha = 0.5;
    int horizon = 1;
    double alpha_floor = 0.5;
    double alpha_ceil = 1.0 - 1e-6;
};

void validate_policy_config(const PolicyConfig& cfg);

/// Optimal dual multiplier: 0.5 * ln(alpha / (1 - alpha)). Nonnegative for
/// alpha >= 0.5.
double lambda_star(double alpha);

/// Per-step Lagrangian value C ln C + (1-C) ln(1-C) - lambda (2C - 1).
/// Its minimizer over C in (0,1) is e^{2 lambda} / (1 + e^{2 lambda}).
double stage_lagrangian(double c, double lambda);

/// Horizon-adapted target ratio at step k given the running feedback sum,
/// before clamping: (2 alpha N_T - k - z_sum) / (2 (N_T - k)).
double alpha_adapt_raw(double alpha, int horizon, int k, long z_sum);

/// alpha_adapt_raw clamped to [alpha_floor, alpha_ceil]. Throws
/// HorizonExhaustedError for k >= horizon.
double alpha_adapt(const PolicyConfig& cfg, int k, long z_sum);

/// Uniform direction on the unit hypersphere (normalized Gaussian draws).
Eigen::VectorXd sample_direction(int n, RngStream& rng);

/// Probability that a probe p is harmless under the Gaussian posterior:
/// Phi((1 - mu·p) / sqrt(p' Sigma p)).
double halfspace_cdf(const Eigen::VectorXd& p, const Gaussian& post);

struct ProbeDesign {
    Eigen::VectorXd p;      // beta * theta, componentwise nonnegative
    Eigen::VectorXd theta;  // unit exploration direction
    double beta = 0.0;      // positive scale
    double alpha_k = 0.0;   // target ratio used
    double cdf_check = 0.0; // achieved halfspace cdf
};

struct ProbeOptions {
    int max_retries = 10000;
    double power_cap = 0.0;  // componentwise cap on p; <= 0 disables
};

/// Draws exploration directions until one yields a valid probe: the
/// alpha_k-quantile x of the projected posterior N(theta·mu, theta'Sigma theta)
/// must be positive and p = theta / x nonnegative (and under the cap, when
/// set). Capped or invalid draws are rejected, never truncated. Throws
/// ProbeDesignFailureError when the retry budget runs out.
ProbeDesign design_probe(const Gaussian& post, double alpha_k, RngStream& rng,
                         const ProbeOptions& opts = {});

}  // namespace cbal

#endif
