#include "cbal/rng.hpp"

#include "cbal/normal.hpp"

namespace cbal {

namespace {

// splitmix64 finalizer; mixes (seed, counter) into a child seed.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : root_(seed), gen_(mix64(seed)) {}

RngStream RngStream::split(std::uint64_t index) const {
    return RngStream(mix64(root_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

std::uint64_t RngStream::next_u64() {
    return gen_();
}

double RngStream::uniform() {
    // 53-bit mantissa offset by half an ulp keeps the value strictly in (0,1).
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::gaussian() {
    return norm_quantile(uniform());
}

Eigen::VectorXd RngStream::gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
}

}  // namespace cbal
