#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace msim {

// splitmix64 finalizer; spreads low-entropy seeds over the whole state space
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// deterministic sub-seed: one master seed fans out to independent streams
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    return mix64(mix64(master) ^ mix64(stream + 0x51ed2701ull));
}

// Per-agent random stream.  Every agent (and every auxiliary consumer such as
// the dataset splitter) owns its own engine, so the draw count of one stream
// never shifts another stream's sequence.  The variate transforms are written
// out explicitly instead of using std::normal_distribution and friends, whose
// algorithms differ between standard library implementations.
class RngStream {
public:
    RngStream() : eng_(0) {}
    RngStream(uint64_t master, uint64_t stream) : eng_(derive_seed(master, stream)) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // integer in [0, n)
    uint64_t uniform_index(uint64_t n) {
        // modulo bias is < 2^-40 for the ranges used here (n well below 2^24)
        return eng_() % n;
    }

    // exponential waiting time with the given mean
    double exponential(double mean) {
        return -mean * std::log(1.0 - uniform());
    }

    // Box-Muller without caching: two uniforms per variate, fixed draw count
    double normal(double mean, double std) {
        if (std == 0.0) return mean;
        double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        double u2 = uniform();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
        return mean + std * z;
    }

    bool coin() { return (eng_() & 1ull) != 0; }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace msim
