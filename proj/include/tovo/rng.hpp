#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tovo {

/// Deterministic RNG used everywhere randomness is drawn.
///
/// std::mt19937_64's output sequence is fully specified by the standard, but
/// the std distributions are not; all draws here go through hand-rolled,
/// platform-stable reductions so that a recorded seed replays byte-for-byte
/// on any build.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t bounded(std::uint64_t n) {
        // threshold = 2^64 mod n
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    /// k distinct indices drawn uniformly from [0, n), in draw order.
    std::vector<std::size_t> sample_indices(std::size_t k, std::size_t n) {
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(bounded(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Stable per-item seed derivation: fan-out over samples stays deterministic
/// regardless of scheduling because each item's stream depends only on the
/// base seed and its own key.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view key) {
    return splitmix64(base ^ fnv1a64(key));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view key,
                                 std::uint64_t index) {
    return splitmix64(derive_seed(base, key) ^ splitmix64(index));
}

}  // namespace tovo
