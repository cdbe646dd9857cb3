#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "webrank/scalar.hpp"

namespace webrank {

/// Seeded source of rational sample points. Components lie in [lo, hi] with
/// denominators at most max_denominator; identical seeds give identical sequences.
class GenericPointSampler {
public:
    explicit GenericPointSampler(std::uint64_t seed = 0, long lo = -3, long hi = 3, long max_denominator = 64,
                                 int max_retries = 32)
        : seed_(seed), lo_(lo), hi_(hi), max_den_(max_denominator), max_retries_(max_retries), rng_(seed) {}

    std::vector<Rational> next(int dim) {
        std::uniform_int_distribution<long> den_dist(1, max_den_);
        std::vector<Rational> p;
        p.reserve(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            const long den = den_dist(rng_);
            std::uniform_int_distribution<long> num_dist(lo_ * den, hi_ * den);
            Rational q(num_dist(rng_), den);
            q.canonicalize();
            p.push_back(std::move(q));
        }
        return p;
    }

    /// Independent sampler for a sub-job, derived deterministically from this seed.
    GenericPointSampler derive(std::uint64_t salt) const {
        std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                          static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
        std::uint32_t words[2];
        seq.generate(words, words + 2);
        const std::uint64_t s = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
        return GenericPointSampler(s, lo_, hi_, max_den_, max_retries_);
    }

    std::uint64_t seed() const { return seed_; }
    int max_retries() const { return max_retries_; }

private:
    std::uint64_t seed_;
    long lo_, hi_, max_den_;
    int max_retries_;
    std::mt19937_64 rng_;
};

inline std::vector<std::string> point_strings(const std::vector<Rational>& p) {
    std::vector<std::string> out;
    out.reserve(p.size());
    for (const auto& q : p) out.push_back(q.get_str());
    return out;
}

} // namespace webrank
