#include "cbal/trunc_moments.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cbal/errors.hpp"
#include "cbal/normal.hpp"

namespace cbal {

std::pair<Eigen::VectorXd, Eigen::MatrixXd> conditional_params(int j, double value,
                                                               const Gaussian& g) {
    const int n = g.dim();
    if (j < 0 || j >= n) throw DomainError("conditional_params: index out of range");
    const double sjj = g.sigma(j, j);
    if (!(sjj > 0.0))
        throw InvalidCovarianceError("conditional_params: pivot variance not positive");

    std::vector<int> rest;
    rest.reserve(n - 1);
    for (int i = 0; i < n; ++i)
        if (i != j) rest.push_back(i);

    Eigen::VectorXd mu_rest(n - 1);
    Eigen::VectorXd cross(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        mu_rest[i] = g.mu[rest[i]];
        cross[i] = g.sigma(rest[i], j);
    }
    Eigen::MatrixXd sig_rest(n - 1, n - 1);
    for (int r = 0; r < n - 1; ++r)
        for (int c = 0; c < n - 1; ++c) sig_rest(r, c) = g.sigma(rest[r], rest[c]);

    Eigen::VectorXd mu_cond = mu_rest + cross * ((value - g.mu[j]) / sjj);
    Eigen::MatrixXd sigma_cond = sig_rest - (cross * cross.transpose()) / sjj;
    return {std::move(mu_cond), std::move(sigma_cond)};
}

TruncatedMoments moments_vertical(double b1, const Gaussian& g) {
    validate_gaussian(g);
    if (std::isnan(b1)) throw DomainError("moments_vertical: limit is NaN");
    const int n = g.dim();
    const double s11 = g.sigma(0, 0);
    if (!(s11 > 0.0))
        throw InvalidCovarianceError("moments_vertical: leading variance not positive");

    if (b1 == std::numeric_limits<double>::infinity()) {
        return {1.0, g.mu, g.sigma};
    }

    const double mass = norm_cdf(b1, g.mu[0], s11);
    if (mass < kMassFloor || mass > 1.0 - kMassFloor)
        throw DegenerateTruncationError("moments_vertical: kept mass " + std::to_string(mass));

    const double pdf1 = norm_pdf(b1, g.mu[0], s11);

    // First-moment integrals L_{e_m}: only the truncated coordinate carries a
    // boundary term; all infinite limits contribute zero density.
    Eigen::VectorXd first = mass * g.mu - pdf1 * g.sigma.col(0);
    Eigen::VectorXd mean = first / mass;

    // Mean of the remaining coordinates conditioned on x_0 = b1, needed by the
    // boundary terms of the second-moment recursion.
    Eigen::VectorXd cond_mean;
    if (n > 1) cond_mean = conditional_params(0, b1, g).first;

    Eigen::MatrixXd second(n, n);
    Eigen::VectorXd coeff(n);
    for (int m = 0; m < n; ++m) {
        coeff.setZero();
        coeff[m] += mass;
        coeff[0] -= pdf1 * (m == 0 ? b1 : cond_mean[m - 1]);
        second.col(m) = first[m] * g.mu + g.sigma * coeff;
    }
    second = 0.5 * (second + second.transpose()).eval();

    Eigen::MatrixXd cov = second / mass - mean * mean.transpose();
    cov = 0.5 * (cov + cov.transpose()).eval();
    return {mass, std::move(mean), std::move(cov)};
}

HalfspaceTransform halfspace_transform(const Halfspace& h, const Gaussian& g, int pivot) {
    validate_halfspace(h);
    validate_gaussian(g);
    const int n = g.dim();
    if (h.dim() != n) throw DomainError("halfspace_transform: dimension mismatch");

    if (pivot < 0) {
        h.a.cwiseAbs().maxCoeff(&pivot);
    } else {
        if (pivot >= n) throw DomainError("halfspace_transform: pivot out of range");
        if (h.a[pivot] == 0.0)
            throw InvalidHalfspaceError("halfspace_transform: pivot coefficient is zero");
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    t.col(0) = h.a;
    int col = 1;
    for (int i = 0; i < n; ++i) {
        if (i == pivot) continue;
        t(i, col++) = 1.0;
    }

    Gaussian gy;
    gy.mu = t.transpose() * g.mu;
    gy.sigma = t.transpose() * g.sigma * t;
    gy.sigma = 0.5 * (gy.sigma + gy.sigma.transpose()).eval();
    return {std::move(t), std::move(gy), pivot};
}

TruncatedMoments truncated_moments_halfspace(const Halfspace& h, const Gaussian& g, int pivot) {
    HalfspaceTransform tr = halfspace_transform(h, g, pivot);
    TruncatedMoments my = moments_vertical(h.b, tr.transformed);

    // x = T^{-T} y, so the mean maps through T^{-T} and the covariance through
    // the congruence T^{-T} (.) T^{-1}.
    Eigen::MatrixXd t_inv = Eigen::PartialPivLU<Eigen::MatrixXd>(tr.T).inverse();
    Eigen::VectorXd mean = t_inv.transpose() * my.mean;
    Eigen::MatrixXd cov = t_inv.transpose() * my.cov * t_inv;
    cov = 0.5 * (cov + cov.transpose()).eval();
    return {my.mass, std::move(mean), std::move(cov)};
}

}  // namespace cbal
