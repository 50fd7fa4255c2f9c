#include "cbal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cbal/errors.hpp"

namespace cbal {

bool polytope_contains(const PolytopePosterior& post, const Eigen::VectorXd& x) {
    for (int i = 0; i < post.box.dim(); ++i)
        if (x[i] < post.box.lo[i] || x[i] > post.box.hi[i]) return false;
    for (const auto& hs : post.halfspaces)
        if (hs.a.dot(x) > hs.b) return false;
    return true;
}

namespace {

Eigen::VectorXd propose_in_box(const PriorBox& box, RngStream& rng) {
    const int n = box.dim();
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
        x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * rng.uniform();
    return x;
}

// Relaxed alternating projections from the box center onto the violated
// halfspaces, clamped back into the box each round.
Eigen::VectorXd feasible_point(const PolytopePosterior& post, const SampleOptions& opts) {
    if (opts.interior_hint.size() == post.box.dim() &&
        polytope_contains(post, opts.interior_hint))
        return opts.interior_hint;
    const int budget = opts.feasibility_budget;
    Eigen::VectorXd x = post.box.center();
    for (int iter = 0; iter < budget; ++iter) {
        double worst = 0.0;
        const Halfspace* worst_hs = nullptr;
        for (const auto& hs : post.halfspaces) {
            const double v = (hs.a.dot(x) - hs.b) / hs.a.norm();
            if (v > worst) {
                worst = v;
                worst_hs = &hs;
            }
        }
        if (!worst_hs) return x;
        const double step = (worst_hs->a.dot(x) - worst_hs->b) / worst_hs->a.squaredNorm();
        x -= 1.2 * step * worst_hs->a;
        x = x.cwiseMax(post.box.lo).cwiseMin(post.box.hi);
    }
    throw InfeasibleRegionError("sampler: no feasible point within projection budget");
}

// One hit-and-run move: uniform point on the chord through x along a random
// direction.
void hit_and_run_step(const PolytopePosterior& post, Eigen::VectorXd& x, RngStream& rng) {
    const int n = post.box.dim();
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    Eigen::VectorXd d(n);
    double norm = 0.0;
    do {
        for (int i = 0; i < n; ++i) d[i] = rng.gaussian();
        norm = d.norm();
    } while (norm == 0.0);
    d /= norm;

    for (int i = 0; i < n; ++i) {
        if (d[i] > 0.0) {
            tmax = std::min(tmax, (post.box.hi[i] - x[i]) / d[i]);
            tmin = std::max(tmin, (post.box.lo[i] - x[i]) / d[i]);
        } else if (d[i] < 0.0) {
            tmax = std::min(tmax, (post.box.lo[i] - x[i]) / d[i]);
            tmin = std::max(tmin, (post.box.hi[i] - x[i]) / d[i]);
        }
    }
    for (const auto& hs : post.halfspaces) {
        const double ad = hs.a.dot(d);
        const double slack = hs.b - hs.a.dot(x);
        if (ad > 0.0)
            tmax = std::min(tmax, slack / ad);
        else if (ad < 0.0)
            tmin = std::max(tmin, slack / ad);
    }
    if (!(tmax >= tmin)) return;  // numerically empty chord; keep the point
    x += (tmin + (tmax - tmin) * rng.uniform()) * d;
    x = x.cwiseMax(post.box.lo).cwiseMin(post.box.hi);
}

}  // namespace

Eigen::MatrixXd rejection_sample(const PolytopePosterior& post, std::size_t n,
                                 const RngStream& rng, const SampleOptions& opts) {
    validate_prior_box(post.box);
    if (n < 1) throw DomainError("rejection_sample: need at least one sample");
    const int dim = post.box.dim();

    // Deterministic pilot on a dedicated substream decides the sampling mode,
    // independently of batch layout or thread count.
    RngStream pilot = rng.split(~std::uint64_t{0});
    long pilot_hits = 0;
    for (int i = 0; i < opts.pilot_proposals; ++i)
        if (polytope_contains(post, propose_in_box(post.box, pilot))) ++pilot_hits;
    const double acceptance =
        static_cast<double>(pilot_hits) / static_cast<double>(opts.pilot_proposals);
    const bool use_chain = acceptance < opts.fallback_acceptance;

    Eigen::VectorXd start;
    if (use_chain) start = feasible_point(post, opts);

    const std::size_t batches = std::clamp<std::size_t>(n / 1024, 1, 64);
    std::vector<std::size_t> offset(batches + 1, 0);
    for (std::size_t b = 0; b < batches; ++b)
        offset[b + 1] = offset[b] + n / batches + (b < n % batches ? 1 : 0);

    Eigen::MatrixXd out(n, dim);
    bool budget_blown = false;

#pragma omp parallel for schedule(dynamic, 1) if (opts.parallel)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(batches); ++b) {
        RngStream stream = rng.split(static_cast<std::uint64_t>(b));
        const std::size_t quota = offset[b + 1] - offset[b];
        if (use_chain) {
            Eigen::VectorXd x = start;
            for (int i = 0; i < opts.burn_in; ++i) hit_and_run_step(post, x, stream);
            for (std::size_t i = 0; i < quota; ++i) {
                for (int s = 0; s < opts.thin; ++s) hit_and_run_step(post, x, stream);
                out.row(offset[b] + i) = x;
            }
        } else {
            const std::size_t budget =
                quota * static_cast<std::size_t>(200.0 / std::max(acceptance, 1e-4));
            std::size_t got = 0, tried = 0;
            while (got < quota && tried < budget) {
                ++tried;
                Eigen::VectorXd x = propose_in_box(post.box, stream);
                if (polytope_contains(post, x)) out.row(offset[b] + got++) = x;
            }
            if (got < quota) {
#pragma omp atomic write
                budget_blown = true;
            }
        }
    }
    if (budget_blown)
        throw InfeasibleRegionError("sampler: rejection budget exhausted");
    return out;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> empirical_moments(const Eigen::MatrixXd& samples) {
    const auto m = samples.rows();
    if (m < 2) throw DomainError("empirical_moments: need at least 2 samples");
    Eigen::VectorXd mean = samples.colwise().mean();
    Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(m - 1);
    return {std::move(mean), std::move(cov)};
}

std::optional<Eigen::VectorXd> quantile_probe(const Eigen::MatrixXd& samples,
                                              const Eigen::VectorXd& theta, double alpha_k) {
    const auto m = samples.rows();
    if (m < 1) throw DomainError("quantile_probe: no samples");
    if (theta.size() != samples.cols()) throw DomainError("quantile_probe: dimension mismatch");
    if (!(alpha_k > 0.0 && alpha_k < 1.0))
        throw DomainError("quantile_probe: alpha_k outside (0,1)");

    Eigen::VectorXd s = samples * theta;
    std::vector<double> proj(s.data(), s.data() + s.size());
    auto idx = static_cast<std::ptrdiff_t>(
        std::min<double>(std::ceil(alpha_k * static_cast<double>(m)) - 1.0,
                         static_cast<double>(m - 1)));
    idx = std::max<std::ptrdiff_t>(idx, 0);
    std::nth_element(proj.begin(), proj.begin() + idx, proj.end());
    const double x = proj[static_cast<std::size_t>(idx)];
    if (!(x > 0.0)) return std::nullopt;
    Eigen::VectorXd p = theta / x;
    if (p.minCoeff() < 0.0) return std::nullopt;
    return p;
}

}  // namespace cbal
