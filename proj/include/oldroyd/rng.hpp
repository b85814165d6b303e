#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace oldroyd {

/// Stateless counter-based generator: every draw is the SplitMix64 finaliser
/// applied to a hash of (seed, stream, counter), so a value depends only on
/// its key and never on draw order or grid size.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix(mix(mix(seed_) ^ stream_) ^ counter);
    }

    /// Uniform in (0, 1). Uses even raw counters.
    double uniform(std::uint64_t counter) const noexcept { return unit(bits(2 * counter)); }

    /// Standard normal by Box-Muller. Uses odd raw counters, so uniform and
    /// normal draws never share bits.
    double normal(std::uint64_t counter) const noexcept {
        const double u1 = unit(bits(4 * counter + 1));
        const double u2 = unit(bits(4 * counter + 3));
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Key for a wavevector/component triple; k1, k2 are offset so negative
    /// wavenumbers map to distinct counters.
    static std::uint64_t mode_key(int k1, int k2, int component) noexcept {
        const auto a = static_cast<std::uint64_t>(static_cast<std::int64_t>(k1) + (1 << 20));
        const auto b = static_cast<std::uint64_t>(static_cast<std::int64_t>(k2) + (1 << 20));
        return (a << 42) ^ (b << 20) ^ static_cast<std::uint64_t>(component);
    }

private:
    static double unit(std::uint64_t b) noexcept { return (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53; }

    std::uint64_t seed_;
    std::uint64_t stream_;
};

/// Sequential draws from a CounterRng.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}
    double uniform() noexcept { return rng_.uniform(next_++); }
    double normal() noexcept { return rng_.normal(next_++); }

private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

} // namespace oldroyd
