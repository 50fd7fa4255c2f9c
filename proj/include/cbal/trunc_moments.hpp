#ifndef CBAL_TRUNC_MOMENTS_HPP
#define CBAL_TRUNC_MOMENTS_HPP

#include <utility>

#include <Eigen/Core>

#include "cbal/types.hpp"

namespace cbal {

/// Truncations keeping less than this mass (or removing less than it) are
/// reported as degenerate: the second-moment recursion has no precision left
/// there and the result carries no usable information.
inline constexpr double kMassFloor = 1e-12;

/// Mean and covariance of the remaining N-1 coordinates of g conditioned on
/// x_j = value. j is 0-based. Throws InvalidCovarianceError when the pivot
/// variance sigma(j,j) is not positive.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> conditional_params(int j, double value,
                                                               const Gaussian& g);

/// Moments of g truncated to { x : x_0 <= b1 }. b1 = +inf returns the
/// untruncated moments exactly; a finite b1 whose kept mass falls outside
/// [kMassFloor, 1-kMassFloor] throws DegenerateTruncationError.
TruncatedMoments moments_vertical(double b1, const Gaussian& g);

/// Change of variables y = x*T mapping { a·x <= b } onto { y_0 <= b }.
struct HalfspaceTransform {
    Eigen::MatrixXd T;     // first column is a; remaining columns unit vectors
    Gaussian transformed;  // law of y
    int pivot = 0;         // coordinate whose coefficient sits in T(pivot, 0)
};

/// Builds the transform. pivot = -1 selects the largest-magnitude coefficient
/// of a; an explicit pivot must index a nonzero coefficient.
HalfspaceTransform halfspace_transform(const Halfspace& h, const Gaussian& g, int pivot = -1);

/// Mass, mean and covariance of g truncated to the halfspace: transform to a
/// vertical cut, run the one-side recursion, map the moment integrals back.
TruncatedMoments truncated_moments_halfspace(const Halfspace& h, const Gaussian& g,
                                             int pivot = -1);

}  // namespace cbal

#endif
