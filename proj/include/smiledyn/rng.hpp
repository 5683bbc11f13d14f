#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace smiledyn {

/// Deterministic 64-bit generator (SplitMix64). Used everywhere randomness is
/// needed so that results are bit-identical across platforms and standard
/// library versions; std::shuffle / std::normal_distribution make no such
/// guarantee and are avoided on purpose.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t r;
        do { r = next_u64(); } while (r >= limit);
        return r % n;
    }

    /// Standard normal via Box-Muller (no cached spare, keeps state minimal).
    double gaussian() {
        double u1;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

    /// Fisher-Yates; deterministic counterpart of std::shuffle.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

/// FNV-1a, used to tag named seed streams.
inline std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Seed derivation scheme: every task seed is derive_seed(master, stream)
/// where `stream` identifies the task (a hashed label, an index, or a mix of
/// both). Same master seed -> same per-task seeds, always.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    Rng g(master ^ (stream * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
    return g.next_u64();
}

}  // namespace smiledyn
