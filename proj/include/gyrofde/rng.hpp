// Seeded Gaussian random streams.
//
// A master seed plus an integer key (flight, axis, process, ...) yields an
// independent stream. The key is mixed with SplitMix64 so that streams for
// neighbouring keys are decorrelated and results do not depend on the order
// in which streams are created.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gyrofde {

/// One SplitMix64 output step applied to `x`.
std::uint64_t splitmix64(std::uint64_t x);

/// Hashes `master` together with every element of `key`.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> key);

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    RandomStream(std::uint64_t master, std::initializer_list<std::uint64_t> key)
        : engine_(derive_seed(master, key)) {}

    /// Standard normal draw.
    double gaussian() { return normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gyrofde
