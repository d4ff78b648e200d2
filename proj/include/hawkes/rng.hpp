#ifndef HAWKES_RNG_HPP
#define HAWKES_RNG_HPP

#include <cstdint>
#include <random>

namespace hawkes {

// Deterministic random stream addressed by (seed, stream id). Two streams
// with the same seed but different ids are statistically independent; the
// same (seed, id) pair always reproduces the same draw sequence. Replicated
// experiments give replicate l the stream (seed, l).
//
// All variate transforms are implemented here (not via std::*_distribution)
// so the number of engine draws per variate is fixed and the output is
// reproducible across standard library versions.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    // Exponential with the given rate. rate may be arbitrarily small but
    // must be positive and finite.
    double exponential(double rate);

    // Standard normal via Box-Muller; generates two values per transform and
    // caches the second.
    double normal();

    // Uniform integer in {0, ..., n-1}, unbiased. n must be >= 1.
    std::uint64_t uniform_below(std::uint64_t n);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t next_u64() { return engine_(); }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace hawkes

#endif
