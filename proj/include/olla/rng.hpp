#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace olla {

// Seeded random source with fixed per-call engine consumption so that
// parallel streams stay aligned: uniform() and uniform_int() consume one
// engine step, gaussian() exactly two.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // uniform on (0, 1]
    double uniform() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() <= p; }

    // inclusive bounds
    int uniform_int(int lo, int hi) {
        double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;  // [0, 1)
        int span = hi - lo + 1;
        int v = lo + static_cast<int>(u * span);
        return v > hi ? hi : v;
    }

    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::uint64_t value, std::uint64_t h) {
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
    }
    return h;
}

// Deterministic per-stream seed: hash of master seed, a numeric id, and a
// textual tag (e.g. the policy name).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id, std::string_view tag) {
    std::uint64_t h = fnv1a64(master, 1469598103934665603ull);
    h = fnv1a64(id, h);
    h = fnv1a64(tag, h);
    return h;
}

}  // namespace olla
