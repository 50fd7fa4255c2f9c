#ifndef CBAL_TYPES_HPP
#define CBAL_TYPES_HPP

#include <Eigen/Core>

namespace cbal {

/// Multivariate normal with moment parameters.
struct Gaussian {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;

    int dim() const { return static_cast<int>(mu.size()); }
};

/// Region { x : a·x <= b }. The normal vector must be nonzero.
struct Halfspace {
    Eigen::VectorXd a;
    double b = 0.0;

    int dim() const { return static_cast<int>(a.size()); }
};

/// Mass, mean and central covariance of a one-side truncated Gaussian.
struct TruncatedMoments {
    double mass = 0.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// Throws InvalidCovarianceError unless sigma is square, symmetric and
/// positive definite (Cholesky succeeds), and mu matches its size.
void validate_gaussian(const Gaussian& g);

/// Throws InvalidHalfspaceError if the normal vector is zero or empty.
void validate_halfspace(const Halfspace& h);

/// True when a Cholesky factorization of m succeeds.
bool is_positive_definite(const Eigen::MatrixXd& m);

}  // namespace cbal

#endif
