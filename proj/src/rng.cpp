#include "linkbench/rng.hpp"

#include <stdexcept>

namespace linkbench {

std::uint64_t Rng::next() {
    // splitmix64 (Steele, Lea, Flood)
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
        std::uint64_t r = next();
        if (r >= threshold) return r % n;
    }
}

double Rng::real() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t Rng::weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) throw std::invalid_argument("Rng::weighted: non-positive total weight");
    double x = real() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        x -= weights[i];
        if (x < 0.0) return i;
    }
    return weights.size() - 1;
}

SeedHasher& SeedHasher::mix(const std::string& s) {
    for (unsigned char c : s) {
        h_ ^= c;
        h_ *= 0x100000001b3ULL;
    }
    h_ ^= 0xff;  // field separator
    h_ *= 0x100000001b3ULL;
    return *this;
}

SeedHasher& SeedHasher::mix(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        h_ ^= (x >> (8 * i)) & 0xff;
        h_ *= 0x100000001b3ULL;
    }
    return *this;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& network,
                          const std::string& sampler, const std::string& predictor,
                          std::uint64_t repeat, std::uint64_t fold) {
    SeedHasher h;
    h.mix(master).mix(network).mix(sampler).mix(predictor).mix(repeat).mix(fold);
    return h.value();
}

}  // namespace linkbench
