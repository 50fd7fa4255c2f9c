#include "cbal/simulator.hpp"

#include <cmath>
#include <utility>

#include "cbal/errors.hpp"
#include "cbal/oracle.hpp"
#include "cbal/policy.hpp"

namespace cbal {

std::string method_name(Method m) {
    switch (m) {
        case Method::Ep: return "ep";
        case Method::McmcOracle: return "mcmc-oracle";
    }
    throw DomainError("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "ep") return Method::Ep;
    if (name == "mcmc-oracle") return Method::McmcOracle;
    throw DomainError("unknown method '" + name + "' (expected ep or mcmc-oracle)");
}

void validate_trial_config(const TrialConfig& cfg) {
    if (cfg.n_sus < 1) throw DomainError("trial config: need at least one SU");
    if (!(cfg.range_m > 0.0)) throw DomainError("trial config: range must be positive");
    if (!(cfg.min_distance_m > 0.0 && cfg.min_distance_m <= cfg.range_m))
        throw DomainError("trial config: distance floor must lie in (0, range]");
    if (!(cfg.alpha >= 0.5 && cfg.alpha < 1.0))
        throw DomainError("trial config: alpha must lie in [0.5, 1)");
    if (cfg.n_flops < 1) throw DomainError("trial config: need at least one flop");
    if (cfg.n_samples < 2) throw DomainError("trial config: need at least 2 oracle samples");
}

double dbm_to_mw(double dbm) {
    return std::pow(10.0, dbm / 10.0);
}

PriorBox prior_box_for(const TrialConfig& cfg) {
    const double i_th_mw = dbm_to_mw(cfg.i_th_dbm);
    const double h_max = 1.0 / (std::pow(cfg.min_distance_m, 4) * i_th_mw);
    PriorBox box;
    box.lo = Eigen::VectorXd::Zero(cfg.n_sus);
    box.hi = Eigen::VectorXd::Constant(cfg.n_sus, h_max);
    return box;
}

Topology generate_topology(const TrialConfig& cfg, RngStream& rng) {
    validate_trial_config(cfg);
    Topology topo;
    topo.i_th_mw = dbm_to_mw(cfg.i_th_dbm);
    topo.distances.resize(cfg.n_sus);
    for (int i = 0; i < cfg.n_sus; ++i) {
        const double r = cfg.range_m * std::sqrt(rng.uniform());
        topo.distances[i] = std::max(r, cfg.min_distance_m);
    }
    topo.gains = topo.distances.array().pow(-4.0);
    topo.h_star = topo.gains / topo.i_th_mw;
    return topo;
}

int feedback(const Topology& topo, const Eigen::VectorXd& p) {
    return topo.h_star.dot(p) <= 1.0 ? +1 : -1;
}

double estimation_error(const Eigen::VectorXd& h_hat, const Eigen::VectorXd& h_star) {
    const double denom = h_star.norm();
    if (!(denom > 0.0)) throw DomainError("estimation_error: true vector is zero");
    return (h_hat - h_star).norm() / denom;
}

double protection_ratio(const std::vector<int>& zs) {
    if (zs.empty()) throw DomainError("protection_ratio: empty feedback sequence");
    long acks = 0;
    for (int z : zs)
        if (z > 0) ++acks;
    return static_cast<double>(acks) / static_cast<double>(zs.size());
}

namespace {

void push_row(TrialRecord& rec, int flop, const Eigen::VectorXd& p, int z, double alpha_k,
              Eigen::VectorXd h_hat, double cdf_check, const Topology& topo, long acks) {
    FlopRecord row;
    row.flop = flop;
    row.p = p;
    row.z = z;
    row.alpha_k = alpha_k;
    row.error_raw = estimation_error(h_hat, topo.h_star);
    row.error = estimation_error(h_hat.cwiseMax(0.0), topo.h_star);
    row.h_hat = std::move(h_hat);
    row.cum_ack_ratio = static_cast<double>(acks) / static_cast<double>(flop + 1);
    row.cdf_check = cdf_check;
    rec.rows.push_back(std::move(row));
}

TrialRecord run_trial_ep(const TrialConfig& cfg, const Topology& topo, RngStream& probes) {
    TrialRecord rec;
    rec.topology = topo;
    const PolicyConfig pol{cfg.alpha, cfg.n_flops, cfg.alpha_floor, cfg.alpha_ceil};

    PosteriorState post = make_posterior(prior_box_for(cfg), {cfg.ep_sweeps, 3});
    post = run_ep(std::move(post));  // prior-only pass establishes the total

    long z_sum = 0, acks = 0;
    for (int t = 0; t < cfg.n_flops; ++t) {
        const double alpha_k = alpha_adapt(pol, t, z_sum);
        ProbeDesign design;
        try {
            design = design_probe(post.total().moments, alpha_k, probes);
        } catch (const ProbeDesignFailureError& e) {
            rec.aborted = true;
            rec.abort_reason = e.what();
            break;
        }
        const int z = feedback(topo, design.p);
        post = posterior_update(std::move(post), make_observation(design.p, z));
        z_sum += z;
        if (z > 0) ++acks;
        push_row(rec, t, design.p, z, alpha_k, post.total().moments.mu, design.cdf_check,
                 topo, acks);
    }
    return rec;
}

TrialRecord run_trial_mcmc(const TrialConfig& cfg, const Topology& topo, RngStream& probes,
                           const RngStream& trial_stream) {
    TrialRecord rec;
    rec.topology = topo;
    const PolicyConfig pol{cfg.alpha, cfg.n_flops, cfg.alpha_floor, cfg.alpha_ceil};

    PolytopePosterior poly{prior_box_for(cfg), {}};
    SampleOptions sample_opts;  // interior_hint tracks a feasible point across flops
    long z_sum = 0, acks = 0;
    for (int t = 0; t < cfg.n_flops; ++t) {
        const double alpha_k = alpha_adapt(pol, t, z_sum);
        Eigen::MatrixXd samples;
        Eigen::VectorXd p;
        bool designed = false;
        try {
            samples = rejection_sample(poly, cfg.n_samples,
                                       trial_stream.split(2 + static_cast<std::uint64_t>(t)),
                                       sample_opts);
            for (int attempt = 0; attempt < 10000 && !designed; ++attempt) {
                Eigen::VectorXd theta = sample_direction(cfg.n_sus, probes);
                if (auto probe = quantile_probe(samples, theta, alpha_k)) {
                    p = *std::move(probe);
                    designed = true;
                }
            }
            if (!designed) throw ProbeDesignFailureError("quantile probe: retries exhausted");
        } catch (const Error& e) {
            rec.aborted = true;
            rec.abort_reason = e.what();
            break;
        }
        const int z = feedback(topo, p);
        const Halfspace hs = obs_to_halfspace(p, z);
        poly.halfspaces.push_back(hs);
        z_sum += z;
        if (z > 0) ++acks;

        // Achieved empirical cdf of the designed probe.
        long kept_cdf = 0;
        for (Eigen::Index r = 0; r < samples.rows(); ++r)
            if (samples.row(r).dot(p) <= 1.0) ++kept_cdf;
        const double cdf_check =
            static_cast<double>(kept_cdf) / static_cast<double>(samples.rows());

        // Estimate after feedback: the proposals surviving the new halfspace
        // are exact samples of the updated polytope.
        Eigen::VectorXd h_hat;
        std::vector<Eigen::Index> keep;
        for (Eigen::Index r = 0; r < samples.rows(); ++r)
            if (hs.a.dot(samples.row(r)) <= hs.b) keep.push_back(r);
        if (keep.size() >= 2) {
            Eigen::MatrixXd kept(keep.size(), cfg.n_sus);
            for (std::size_t r = 0; r < keep.size(); ++r) kept.row(r) = samples.row(keep[r]);
            h_hat = kept.colwise().mean();
            // The mean of points in the updated polytope is itself feasible.
            sample_opts.interior_hint = h_hat;
        } else {
            h_hat = samples.colwise().mean();  // degenerate cut; carry the prior estimate
        }
        push_row(rec, t, p, z, alpha_k, std::move(h_hat), cdf_check, topo, acks);
    }
    return rec;
}

}  // namespace

TrialRecord run_trial(const TrialConfig& cfg, RngStream rng) {
    validate_trial_config(cfg);
    RngStream topo_stream = rng.split(0);
    RngStream probe_stream = rng.split(1);
    const Topology topo = generate_topology(cfg, topo_stream);

    TrialRecord rec = cfg.method == Method::Ep
                          ? run_trial_ep(cfg, topo, probe_stream)
                          : run_trial_mcmc(cfg, topo, probe_stream, rng);
    if (!rec.rows.empty()) {
        std::vector<int> zs;
        zs.reserve(rec.rows.size());
        for (const auto& row : rec.rows) zs.push_back(row.z);
        rec.alpha_sim = protection_ratio(zs);
    }
    return rec;
}

}  // namespace cbal
