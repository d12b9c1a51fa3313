#pragma once
// PCG64 (XSL-RR 128/64) with explicit stream selection, plus the few
// distributions the samplers need.  Self-contained so that every sampler
// output is reproducible bit-for-bit from (seed, stream) alone, independent
// of platform library differences.
#include <cstdint>
#include <cmath>

namespace critwin {

class Pcg64 {
public:
    using result_type = std::uint64_t;

    // stream picks one of 2^63 independent sequences; replication indices
    // go here so replications never share a stream.
    explicit Pcg64(std::uint64_t seed = 0xcafef00dd15ea5e5ULL, std::uint64_t stream = 0) {
        inc_ = ((static_cast<__uint128_t>(stream) << 1) | 1u);
        state_ = 0;
        step();
        state_ += (static_cast<__uint128_t>(seed) << 64) | mix(seed);
        step();
    }

    std::uint64_t next() {
        __uint128_t old = state_;
        step();
        std::uint64_t xored = static_cast<std::uint64_t>(old >> 64) ^ static_cast<std::uint64_t>(old);
        unsigned rot = static_cast<unsigned>(old >> 122);
        return (xored >> rot) | (xored << ((-rot) & 63u));
    }
    std::uint64_t operator()() { return next(); }

    // uniform on (0,1), never exactly 0 or 1
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53;
    }

    // standard normal, Box-Muller; portable (no libm distribution objects)
    double normal() {
        if (have_spare_) { have_spare_ = false; return spare_; }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Poisson via Knuth's product method on mean chunks <= 30, exact in law
    // for any mean (splitting a Poisson is again Poisson).
    std::uint64_t poisson(double mean) {
        std::uint64_t total = 0;
        while (mean > 30.0) {
            total += poisson_small(30.0);
            mean -= 30.0;
        }
        return total + poisson_small(mean);
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }

private:
    static constexpr __uint128_t mult_ =
        (static_cast<__uint128_t>(2549297995355413924ULL) << 64) | 4865540595714422341ULL;

    static std::uint64_t mix(std::uint64_t z) { // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    void step() { state_ = state_ * mult_ + inc_; }

    std::uint64_t poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        double limit = std::exp(-mean), prod = uniform();
        std::uint64_t k = 0;
        while (prod > limit) { ++k; prod *= uniform(); }
        return k;
    }

    __uint128_t state_{0}, inc_{1};
    double spare_{0};
    bool have_spare_{false};
};

} // namespace critwin
