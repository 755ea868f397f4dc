#pragma once

#include <cstdint>
#include <random>

namespace crashvol::sim {

/// Seed of the independent stream for `index` under `master_seed`
/// (splitmix64 finalizer over the pair). Stable across runs and platforms.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Standard-normal draws from a 64-bit Mersenne Twister substream.
class NormalStream {
public:
    NormalStream(std::uint64_t master_seed, std::uint64_t index)
        : engine_(substream_seed(master_seed, index)) {}

    double next() { return dist_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace crashvol::sim
