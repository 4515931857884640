#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace linkbench {

/// Deterministic 64-bit generator (splitmix64 core). All bounded draws use
/// rejection sampling, so sequences are identical across platforms and
/// standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    /// Uniform double in [0, 1).
    double real();

    /// True with probability p.
    bool chance(double p) { return real() < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Index drawn proportionally to non-negative weights (sum must be > 0).
    std::size_t weighted(std::span<const double> weights);

private:
    std::uint64_t state_;
};

/// Stable 64-bit FNV-1a hash used for order-independent per-cell seeds.
class SeedHasher {
public:
    SeedHasher& mix(const std::string& s);
    SeedHasher& mix(std::uint64_t x);
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::uint64_t derive_seed(std::uint64_t master, const std::string& network,
                          const std::string& sampler, const std::string& predictor,
                          std::uint64_t repeat, std::uint64_t fold);

}  // namespace linkbench
