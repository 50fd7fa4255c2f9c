#include "cbal/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cbal/errors.hpp"
#include "cbal/normal.hpp"

namespace cbal {

void validate_policy_config(const PolicyConfig& cfg) {
    if (!(cfg.alpha >= 0.5 && cfg.alpha < 1.0))
        throw DomainError("policy: alpha must lie in [0.5, 1)");
    if (cfg.horizon < 1) throw DomainError("policy: horizon must be at least 1");
    if (!(cfg.alpha_floor > 0.0 && cfg.alpha_floor <= cfg.alpha &&
          cfg.alpha <= cfg.alpha_ceil && cfg.alpha_ceil < 1.0))
        throw DomainError("policy: need 0 < floor <= alpha <= ceil < 1");
}

double lambda_star(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("lambda_star: alpha outside (0,1)");
    return 0.5 * std::log(alpha / (1.0 - alpha));
}

double stage_lagrangian(double c, double lambda) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("stage_lagrangian: C outside (0,1)");
    return c * std::log(c) + (1.0 - c) * std::log(1.0 - c) - lambda * (2.0 * c - 1.0);
}

double alpha_adapt_raw(double alpha, int horizon, int k, long z_sum) {
    if (k < 0 || k >= horizon)
        throw HorizonExhaustedError("alpha_adapt: step " + std::to_string(k) +
                                    " outside horizon " + std::to_string(horizon));
    if (std::labs(z_sum) > k) throw DomainError("alpha_adapt: |z_sum| cannot exceed k");
    return (2.0 * alpha * horizon - k - static_cast<double>(z_sum)) /
           (2.0 * (horizon - k));
}

double alpha_adapt(const PolicyConfig& cfg, int k, long z_sum) {
    validate_policy_config(cfg);
    const double raw = alpha_adapt_raw(cfg.alpha, cfg.horizon, k, z_sum);
    return std::clamp(raw, cfg.alpha_floor, cfg.alpha_ceil);
}

Eigen::VectorXd sample_direction(int n, RngStream& rng) {
    if (n < 1) throw DomainError("sample_direction: dimension must be positive");
    Eigen::VectorXd theta(n);
    double norm = 0.0;
    do {
        theta = rng.gaussian_vector(n);
        norm = theta.norm();
    } while (norm == 0.0);
    return theta / norm;
}

double halfspace_cdf(const Eigen::VectorXd& p, const Gaussian& post) {
    if (p.size() != post.mu.size()) throw DomainError("halfspace_cdf: dimension mismatch");
    const double var = p.dot(post.sigma * p);
    if (!(var > 0.0))
        throw DegeneratePosteriorError("halfspace_cdf: quadratic form not positive");
    return norm_cdf((1.0 - post.mu.dot(p)) / std::sqrt(var));
}

ProbeDesign design_probe(const Gaussian& post, double alpha_k, RngStream& rng,
                         const ProbeOptions& opts) {
    if (!(alpha_k > 0.0 && alpha_k < 1.0))
        throw DomainError("design_probe: alpha_k outside (0,1)");
    const int n = post.dim();
    const double quantile = norm_quantile(alpha_k);

    for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
        Eigen::VectorXd theta = sample_direction(n, rng);
        const double c1 = theta.dot(post.mu);
        const double c2 = theta.dot(post.sigma * theta);
        if (!(c2 > 0.0))
            throw DegeneratePosteriorError("design_probe: quadratic form not positive");
        const double x = c1 + std::sqrt(c2) * quantile;
        if (!(x > 0.0)) continue;
        const double beta = 1.0 / x;
        Eigen::VectorXd p = beta * theta;
        if (p.minCoeff() < 0.0) continue;
        if (opts.power_cap > 0.0 && p.maxCoeff() > opts.power_cap) continue;
        ProbeDesign d;
        d.p = std::move(p);
        d.theta = std::move(theta);
        d.beta = beta;
        d.alpha_k = alpha_k;
        d.cdf_check = halfspace_cdf(d.p, post);
        return d;
    }
    throw ProbeDesignFailureError("design_probe: retry budget exhausted");
}

}  // namespace cbal
