#ifndef CBAL_RNG_HPP
#define CBAL_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace cbal {

/// Deterministic random stream with counter-based splitting. A child stream
/// derived via split(i) depends only on (root seed, i), never on how much the
/// parent has drawn, so stream families are stable when more work is added.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    /// Child stream for the given counter. Does not advance this stream.
    RngStream split(std::uint64_t index) const;

    std::uint64_t next_u64();

    /// Uniform double strictly inside (0,1).
    double uniform();

    /// Standard normal draw via the inverse cdf (portable and replayable).
    double gaussian();

    Eigen::VectorXd gaussian_vector(int n);

    std::uint64_t root() const { return root_; }

private:
    std::uint64_t root_;
    std::mt19937_64 gen_;
};

}  // namespace cbal

#endif
