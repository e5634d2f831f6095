#pragma once

#include <cstdint>

namespace qre {

__extension__ using u128 = unsigned __int128;

// Every OpenMP kernel has a serial twin; both produce bitwise-identical results.
enum class Execution { serial, parallel };

// Counter-based generator: value depends only on (seed, stream, counter), so a
// sample block can be drawn by any thread in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t at(std::uint64_t counter) const { return mix(key_ + counter * 0x9e3779b97f4a7c15ULL); }

    // Uniform in [0, n) by multiply-high.
    std::uint64_t index(std::uint64_t counter, std::uint64_t n) const {
        return static_cast<std::uint64_t>((static_cast<u128>(at(counter)) * n) >> 64);
    }

    // Uniform double in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
};

}  // namespace qre
