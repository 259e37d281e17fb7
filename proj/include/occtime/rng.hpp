#pragma once

#include <cmath>
#include <array>
#include <bit>
#include <cstdint>

namespace occtime {

namespace detail {

struct Ziggurat {
    static constexpr double R = 3.6541528853610088;
    static constexpr double V = 4.92867323399e-3;  // area of each layer
    std::array<double, 257> x;
    std::array<double, 257> f;
    Ziggurat() {
        auto pdf = [](double v) { return std::exp(-0.5 * v * v); };
        x[0] = V / pdf(R);
        x[1] = R;
        for (int i = 2; i < 256; ++i) x[i] = std::sqrt(-2.0 * std::log(V / x[i - 1] + pdf(x[i - 1])));
        x[256] = 0.0;
        for (int i = 0; i < 257; ++i) f[i] = pdf(x[i]);
    }
};

inline const Ziggurat& ziggurat() {
    static const Ziggurat z;
    return z;
}

}  // namespace detail

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** keyed by (root seed, path index). Each path owns an independent
/// stream, so results do not depend on which thread runs which path.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path) {
        std::uint64_t sm = seed;
        const std::uint64_t mixed = splitmix64(sm) ^ path;
        sm = mixed * 0xd1342543de82ef95ULL + 1;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
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

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() { return (static_cast<double>(static_cast<std::int64_t>(next() >> 11)) + 0.5) * 0x1.0p-53; }

    /// Standard normal by the 256-layer ziggurat of Marsaglia and Tsang.
    double normal();

    double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
    [[gnu::noinline]] double normal_tail(int i, double x, std::uint64_t sign);
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

namespace detail {

inline double flip(double v, std::uint64_t sign) {
    return std::bit_cast<double>(std::bit_cast<std::uint64_t>(v) ^ sign);
}

}  // namespace detail

inline double PathRng::normal() {
    const detail::Ziggurat& z = detail::ziggurat();
    const std::uint64_t bits = next();
    const int i = static_cast<int>(bits & 0xff);
    // Sign applied by flipping the sign bit.
    const std::uint64_t sign = (bits & 0x100) << 55;
    const double x = static_cast<double>(static_cast<std::int64_t>(bits >> 11)) * 0x1.0p-53 * z.x[i];
    if (x < z.x[i + 1]) [[likely]]
        return detail::flip(x, sign);
    return normal_tail(i, x, sign);
}

}  // namespace occtime
