#include "cbal/types.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "cbal/errors.hpp"

namespace cbal {

bool is_positive_definite(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    if (!m.allFinite()) return false;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    return llt.info() == Eigen::Success;
}

void validate_gaussian(const Gaussian& g) {
    const int n = g.dim();
    if (n == 0) throw InvalidCovarianceError("gaussian: empty mean");
    if (g.sigma.rows() != n || g.sigma.cols() != n)
        throw InvalidCovarianceError("gaussian: covariance shape mismatch");
    if (!g.mu.allFinite() || !g.sigma.allFinite())
        throw InvalidCovarianceError("gaussian: non-finite entries");
    const double scale = g.sigma.cwiseAbs().maxCoeff();
    if ((g.sigma - g.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0))
        throw InvalidCovarianceError("gaussian: covariance not symmetric");
    if (!is_positive_definite(g.sigma))
        throw InvalidCovarianceError("gaussian: covariance not positive definite");
}

void validate_halfspace(const Halfspace& h) {
    if (h.a.size() == 0 || !h.a.allFinite() || h.a.cwiseAbs().maxCoeff() == 0.0)
        throw InvalidHalfspaceError("halfspace: zero normal vector");
    if (std::isnan(h.b)) throw InvalidHalfspaceError("halfspace: offset is NaN");
}

}  // namespace cbal
