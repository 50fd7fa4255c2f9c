#include "cbal/ep.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Cholesky>

#include "cbal/errors.hpp"

namespace cbal {

SiteApprox SiteApprox::flat(int n) {
    return {Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), false};
}

void validate_prior_box(const PriorBox& box) {
    const int n = box.dim();
    if (n == 0 || box.hi.size() != n) throw DomainError("prior box: shape mismatch");
    if (!box.lo.allFinite() || !box.hi.allFinite())
        throw DomainError("prior box: non-finite bounds");
    for (int i = 0; i < n; ++i) {
        if (box.lo[i] < 0.0) throw DomainError("prior box: lower bound below zero");
        if (!(box.lo[i] < box.hi[i])) throw DomainError("prior box: lo must be below hi");
    }
}

Halfspace obs_to_halfspace(const Eigen::VectorXd& p, int z) {
    if (p.size() == 0 || !p.allFinite() || p.minCoeff() < 0.0 || p.cwiseAbs().maxCoeff() == 0.0)
        throw InvalidProbeError("observation: probe must be nonzero and nonnegative");
    if (z != 1 && z != -1) throw DomainError("observation: feedback must be +1 or -1");
    if (z == 1) return {p, 1.0};
    return {-p, -1.0};
}

HalfspaceObs make_observation(const Eigen::VectorXd& p, int z) {
    return {p, z, obs_to_halfspace(p, z)};
}

std::vector<Halfspace> prior_box_faces(const PriorBox& box) {
    validate_prior_box(box);
    const int n = box.dim();
    std::vector<Halfspace> faces;
    faces.reserve(2 * n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[i] = -1.0;
        faces.push_back({e, -box.lo[i]});  // x_i >= lo_i
        faces.push_back({-e, box.hi[i]});  // x_i <= hi_i
    }
    return faces;
}

GaussianState state_from_natural(const Eigen::MatrixXd& prec, const Eigen::VectorXd& shift) {
    if (!prec.allFinite() || !shift.allFinite())
        throw InvalidStateError("gaussian state: non-finite natural parameters");
    Eigen::LLT<Eigen::MatrixXd> llt(prec);
    if (llt.info() != Eigen::Success)
        throw InvalidStateError("gaussian state: precision not positive definite");
    const int n = static_cast<int>(shift.size());
    GaussianState st;
    st.prec = 0.5 * (prec + prec.transpose());
    st.shift = shift;
    st.moments.sigma = llt.solve(Eigen::MatrixXd::Identity(n, n));
    st.moments.sigma = 0.5 * (st.moments.sigma + st.moments.sigma.transpose()).eval();
    st.moments.mu = llt.solve(shift);
    return st;
}

GaussianState state_from_moments(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
    Gaussian g{mu, sigma};
    validate_gaussian(g);
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    const int n = static_cast<int>(mu.size());
    GaussianState st;
    st.moments = std::move(g);
    st.prec = llt.solve(Eigen::MatrixXd::Identity(n, n));
    st.prec = 0.5 * (st.prec + st.prec.transpose()).eval();
    st.shift = st.prec * mu;
    return st;
}

GaussianState gaussian_product_params(const std::vector<SiteApprox>& sites) {
    if (sites.empty()) throw InvalidStateError("gaussian product: no sites");
    const int n = static_cast<int>(sites.front().shift.size());
    Eigen::MatrixXd prec = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
    for (const auto& s : sites) {
        prec += s.prec;
        shift += s.shift;
    }
    return state_from_natural(prec, shift);
}

const GaussianState& PosteriorState::total() const {
    if (!total_valid)
        throw InvalidStateError("posterior: total precision not positive definite yet");
    return total_;
}

PosteriorState make_posterior(const PriorBox& box, EpConfig cfg) {
    validate_prior_box(box);
    const int n = box.dim();
    PosteriorState st;
    st.box = box;
    st.cfg = cfg;
    st.liks = prior_box_faces(box);
    st.sites.assign(st.liks.size(), SiteApprox::flat(n));
    st.prec_sum = Eigen::MatrixXd::Zero(n, n);
    st.shift_sum = Eigen::VectorXd::Zero(n);
    st.total_valid = false;
    return st;
}

namespace {

std::optional<GaussianState> try_state_from_natural(const Eigen::MatrixXd& prec,
                                                    const Eigen::VectorXd& shift) {
    if (!prec.allFinite() || !shift.allFinite()) return std::nullopt;
    Eigen::LLT<Eigen::MatrixXd> llt(prec);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const int n = static_cast<int>(shift.size());
    GaussianState st;
    st.prec = 0.5 * (prec + prec.transpose());
    st.shift = shift;
    st.moments.sigma = llt.solve(Eigen::MatrixXd::Identity(n, n));
    st.moments.sigma = 0.5 * (st.moments.sigma + st.moments.sigma.transpose()).eval();
    st.moments.mu = llt.solve(shift);
    return st;
}

// Broad diagonal Gaussian standing in for the cavity until the summed site
// precision becomes positive definite: box center, per-axis sd = box width.
GaussianState bootstrap_reference(const PriorBox& box) {
    const int n = box.dim();
    Eigen::MatrixXd prec = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double w = box.hi[i] - box.lo[i];
        prec(i, i) = 1.0 / (w * w);
    }
    return state_from_natural(prec, prec * box.center());
}

}  // namespace

GaussianState cavity(const PosteriorState& state, std::size_t j) {
    if (j >= state.site_count()) throw DomainError("cavity: site index out of range");
    auto st = try_state_from_natural(state.prec_sum - state.sites[j].prec,
                                     state.shift_sum - state.sites[j].shift);
    if (!st) throw CavityFailureError("cavity: remainder not positive definite");
    return *std::move(st);
}

std::optional<SiteUpdateResult> site_update(const GaussianState& cav, const Halfspace& lik) {
    TruncatedMoments tm;
    try {
        tm = truncated_moments_halfspace(lik, cav.moments);
    } catch (const DegenerateTruncationError&) {
        return std::nullopt;
    }
    if (tm.mass >= 1.0 - kMassFloor) return std::nullopt;  // uninformative likelihood

    Eigen::LLT<Eigen::MatrixXd> llt(tm.cov);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const int n = static_cast<int>(tm.mean.size());
    const Eigen::MatrixXd q_prec = llt.solve(Eigen::MatrixXd::Identity(n, n));

    SiteUpdateResult out;
    out.site.prec = q_prec - cav.prec;
    out.site.prec = 0.5 * (out.site.prec + out.site.prec.transpose()).eval();
    out.site.shift = q_prec * tm.mean - cav.shift;
    out.site.active = true;
    out.moments = std::move(tm);
    return out;
}

PosteriorState run_ep(PosteriorState state, int sweeps) {
    if (state.site_count() < 2 * static_cast<std::size_t>(state.dim()))
        throw InvalidStateError("run_ep: prior-face sites missing");
    if (sweeps < 0) sweeps = state.cfg.sweeps;

    const GaussianState reference = bootstrap_reference(state.box);

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        bool any_accepted = false;
        for (std::size_t j = 0; j < state.site_count(); ++j) {
            // Cavity: remove site j from the running totals. Until the total
            // turns positive definite the broad reference stands in.
            GaussianState cav;
            auto maybe = try_state_from_natural(state.prec_sum - state.sites[j].prec,
                                                state.shift_sum - state.sites[j].shift);
            if (maybe) {
                cav = *std::move(maybe);
            } else if (!state.total_valid) {
                cav = reference;
            } else {
                continue;  // cavity failure: skip this site this sweep
            }

            std::optional<SiteUpdateResult> upd;
            try {
                upd = site_update(cav, state.liks[j]);
            } catch (const InvalidCovarianceError&) {
                continue;  // cavity too ill-conditioned for the moment pipeline
            }
            if (!upd) continue;

            SiteApprox cand = std::move(upd->site);
            const SiteApprox& old = state.sites[j];
            bool accepted = false;
            Eigen::MatrixXd new_prec;
            Eigen::VectorXd new_shift;
            for (int attempt = 0; attempt <= state.cfg.damping_retries; ++attempt) {
                new_prec = state.prec_sum - old.prec + cand.prec;
                new_shift = state.shift_sum - old.shift + cand.shift;
                if (is_positive_definite(new_prec) || !state.total_valid) {
                    accepted = true;
                    break;
                }
                // Damp: blend the candidate halfway back toward the old site.
                cand.prec = 0.5 * (cand.prec + old.prec);
                cand.shift = 0.5 * (cand.shift + old.shift);
            }
            if (!accepted) continue;

            state.sites[j] = std::move(cand);
            state.prec_sum = 0.5 * (new_prec + new_prec.transpose());
            state.shift_sum = std::move(new_shift);
            if (auto total = try_state_from_natural(state.prec_sum, state.shift_sum)) {
                state.total_ = *std::move(total);
                state.total_valid = true;
            }
            any_accepted = true;
        }
        if (!any_accepted) break;  // stagnation: nothing can move
    }
    return state;
}

PosteriorState posterior_update(PosteriorState state, const HalfspaceObs& obs) {
    if (obs.hs.dim() != state.dim()) throw DomainError("posterior_update: dimension mismatch");
    state.liks.push_back(obs.hs);
    state.sites.push_back(SiteApprox::flat(state.dim()));
    state.history.push_back(obs);
    return run_ep(std::move(state));
}

}  // namespace cbal
