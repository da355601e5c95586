#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace sqz::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer; full 64-bit avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a stream key from a seed and a list of context ids. Streams are
// keyed by physical coordinates (bit patterns) rather than loop indices so
// that a sub-grid run reproduces the corresponding full-grid values exactly.
constexpr std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t k = mix64(seed + kGolden);
    for (std::uint64_t id : ids) {
        k = mix64(k ^ (id + kGolden));
    }
    return k;
}

// Stable 64-bit identity of a coordinate value.
inline std::uint64_t coord_bits(double v) {
    return std::bit_cast<std::uint64_t>(v);
}

// Stream tags keep draws for different purposes decorrelated even when the
// same seed and coordinates are in play.
namespace stream_tag {
inline constexpr std::uint64_t polarimeter = 0x706f6cULL;
inline constexpr std::uint64_t trace_signal = 0x736967ULL;
inline constexpr std::uint64_t trace_sql = 0x73716cULL;
}  // namespace stream_tag

// Counter-mode generator: the k-th output is a pure function of (key, k),
// so any evaluation order and any thread count produce the same stream.
class Stream {
public:
    explicit Stream(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; second value of each pair is cached.
    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace sqz::rng
