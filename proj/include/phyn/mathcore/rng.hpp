#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace phyn {

struct RngSeed {
    std::uint64_t value = 20240607ULL;
};

inline constexpr RngSeed default_seed{};

inline constexpr std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** generator with a self-contained Gaussian sampler, so streams are
/// bit-identical across standard libraries.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(RngSeed seed = default_seed) { reseed(seed.value); }

    /// Independent stream for path `index` of a simulation seeded with `seed`.
    static Rng stream(RngSeed seed, std::uint64_t index) {
        std::uint64_t x = seed.value;
        std::uint64_t a = splitmix64(x);
        std::uint64_t y = index ^ 0xD1B54A32D192ED03ULL;
        std::uint64_t b = splitmix64(y);
        Rng r;
        r.reseed(a ^ (b * 0x9E3779B97F4A7C15ULL) ^ index);
        return r;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on (0, 1), never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw (Box-Muller, second variate cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t v;
        do v = (*this)();
        while (v >= limit);
        return v % n;
    }

private:
    void reseed(std::uint64_t x) {
        for (auto& s : s_) s = splitmix64(x);
        has_spare_ = false;
    }
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace phyn
