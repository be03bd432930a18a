#pragma once

#include <cstdint>
#include <random>

namespace catsim {

// splitmix64; used only to spread seeds across streams.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream_tag, uint64_t id = 0) {
    return mix64(mix64(master ^ mix64(stream_tag)) ^ mix64(id));
}

// Deterministic uniform stream. mt19937_64 output is fully specified by the
// standard; the double conversion avoids std::uniform_real_distribution,
// whose output is implementation-defined.
class RandomStream {
public:
    RandomStream() : engine_(0) {}
    explicit RandomStream(uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1)
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform index in [0, n)
    size_t pick_index(size_t n) {
        return std::min(n - 1, static_cast<size_t>(u01() * static_cast<double>(n)));
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

private:
    std::mt19937_64 engine_;
};

// Stream tags; one sub-stream per purpose so draw order in one subsystem
// cannot perturb another.
enum class StreamTag : uint64_t {
    EquipSelection = 1,
    Placement = 2,
    VehicleRoute = 3,
    VehicleDecision = 4,
};

inline RandomStream make_stream(uint64_t master, StreamTag tag, uint64_t id = 0) {
    return RandomStream(derive_seed(master, static_cast<uint64_t>(tag), id));
}

}  // namespace catsim
