#ifndef CBAL_ORACLE_HPP
#define CBAL_ORACLE_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cbal/ep.hpp"
#include "cbal/rng.hpp"
#include "cbal/types.hpp"

namespace cbal {

/// Uniform posterior over a box intersected with observation halfspaces.
struct PolytopePosterior {
    PriorBox box;
    std::vector<Halfspace> halfspaces;
};

/// True when x lies in the box and satisfies every halfspace.
bool polytope_contains(const PolytopePosterior& post, const Eigen::VectorXd& x);

struct SampleOptions {
    double fallback_acceptance = 1e-3;  // below this, switch to hit-and-run
    int pilot_proposals = 4096;         // acceptance-rate estimation budget
    int burn_in = 1000;                 // hit-and-run warmup steps per chain
    int thin = 10;                      // chain steps per kept sample
    bool parallel = true;               // OpenMP over batches
    int feasibility_budget = 200000;    // projection iterations to find a point
    Eigen::VectorXd interior_hint;      // known feasible point, used before projecting
};

/// n independent-by-construction uniform samples from the polytope, one row
/// per sample. Plain rejection from box proposals; when the estimated
/// acceptance rate drops below the fallback threshold, batches run
/// hit-and-run chains instead. Batches use counter-split substreams of rng
/// and are merged by batch index, so serial and parallel execution produce
/// identical output. Throws InfeasibleRegionError when no interior point can
/// be found within budget.
Eigen::MatrixXd rejection_sample(const PolytopePosterior& post, std::size_t n,
                                 const RngStream& rng, const SampleOptions& opts = {});

/// Sample mean and unbiased sample covariance; needs at least 2 rows.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> empirical_moments(const Eigen::MatrixXd& samples);

/// Empirical analogue of the cdf-matched probe: projects the samples on
/// theta, takes the alpha_k order-statistic quantile x, and returns
/// p = theta / x. Returns nullopt (redraw signal) when x <= 0 or p has a
/// negative component.
std::optional<Eigen::VectorXd> quantile_probe(const Eigen::MatrixXd& samples,
                                              const Eigen::VectorXd& theta, double alpha_k);

}  // namespace cbal

#endif
