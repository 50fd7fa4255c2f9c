#ifndef CBAL_EP_HPP
#define CBAL_EP_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cbal/trunc_moments.hpp"
#include "cbal/types.hpp"

namespace cbal {

/// One Gaussian likelihood-term approximation in natural parameters.
/// An individual site's precision contribution may be indefinite; only the
/// total over all sites has to be positive definite.
struct SiteApprox {
    Eigen::MatrixXd prec;   // contribution to the total precision
    Eigen::VectorXd shift;  // contribution to precision * mean
    bool active = false;    // ever refined

    static SiteApprox flat(int n);
};

/// Axis-aligned prior support box; gains live in the positive orthant.
struct PriorBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    int dim() const { return static_cast<int>(lo.size()); }
    Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
    double diagonal() const { return (hi - lo).norm(); }
};

/// Throws DomainError unless 0 <= lo < hi componentwise.
void validate_prior_box(const PriorBox& box);

/// One probing observation and its halfspace in gain space.
struct HalfspaceObs {
    Eigen::VectorXd p;  // probe power vector
    int z = 0;          // +1 ACK, -1 NACK
    Halfspace hs;
};

/// Halfspace equivalent of feedback z for probe p: z=+1 keeps {p·h <= 1},
/// z=-1 keeps the closed complement {-p·h <= -1}.
Halfspace obs_to_halfspace(const Eigen::VectorXd& p, int z);

HalfspaceObs make_observation(const Eigen::VectorXd& p, int z);

/// The 2N face halfspaces of the box: x_i >= lo_i and x_i <= hi_i per axis.
std::vector<Halfspace> prior_box_faces(const PriorBox& box);

/// Moment parameters with the natural form cached alongside.
struct GaussianState {
    Gaussian moments;
    Eigen::MatrixXd prec;   // moments.sigma^{-1}
    Eigen::VectorXd shift;  // prec * moments.mu
};

/// Throws InvalidStateError when prec is not positive definite.
GaussianState state_from_natural(const Eigen::MatrixXd& prec, const Eigen::VectorXd& shift);
GaussianState state_from_moments(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma);

/// Normalized product of the site Gaussians: total precision is the sum of
/// site precisions, total shift the sum of shifts.
GaussianState gaussian_product_params(const std::vector<SiteApprox>& sites);

struct EpConfig {
    int sweeps = 5;          // outer refinement passes
    int damping_retries = 3; // 50/50 blends before giving up on an update
};

/// Posterior approximation over normalized gains: 2N prior-face sites plus one
/// site per observation. Single-writer value; updates return a new state.
struct PosteriorState {
    PriorBox box;
    EpConfig cfg;
    std::vector<Halfspace> liks;  // likelihood halfspace per site
    std::vector<SiteApprox> sites;
    std::vector<HalfspaceObs> history;

    Eigen::MatrixXd prec_sum;
    Eigen::VectorXd shift_sum;
    bool total_valid = false;

    int dim() const { return box.dim(); }
    std::size_t site_count() const { return sites.size(); }

    /// Current total; throws InvalidStateError until the first EP pass has
    /// made the summed precision positive definite.
    const GaussianState& total() const;

private:
    friend PosteriorState run_ep(PosteriorState state, int sweeps);
    friend PosteriorState make_posterior(const PriorBox& box, EpConfig cfg);
    GaussianState total_;
};

PosteriorState make_posterior(const PriorBox& box, EpConfig cfg = {});

/// Gaussian obtained by removing site j from the total.
/// Throws CavityFailureError when the remainder is not positive definite.
GaussianState cavity(const PosteriorState& state, std::size_t j);

struct SiteUpdateResult {
    SiteApprox site;
    TruncatedMoments moments;
};

/// Moment-matched site refinement against a cavity: computes the truncated
/// moments of lik x cavity and returns the site natural parameters
/// prec = Q^{-1} - prec_cav, shift = Q^{-1} q - shift_cav. Returns nullopt
/// when the truncation is degenerate (no usable information) — the caller
/// leaves the site unchanged.
std::optional<SiteUpdateResult> site_update(const GaussianState& cav, const Halfspace& lik);

/// Sequential EP sweeps over every site. sweeps < 0 uses state.cfg.sweeps.
/// Deterministic; returns the refined state. If no site can be updated in a
/// sweep the state is returned as-is (stagnation).
PosteriorState run_ep(PosteriorState state, int sweeps = -1);

/// Appends a flat site for the observation and re-runs EP (warm start).
PosteriorState posterior_update(PosteriorState state, const HalfspaceObs& obs);

}  // namespace cbal

#endif
