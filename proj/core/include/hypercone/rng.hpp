#pragma once

#include <cstdint>

#include "hypercone/types.hpp"

namespace hypercone {

/// SplitMix64 (Steele, Lea, Flood). Chosen for the instance generator because
/// its output is specified exactly by the algorithm, so instance sets
/// reproduce bit-identically across platforms and languages.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1]: (next() >> 11) is uniform on [0, 2^53) and the +1
    /// keeps log() finite in Box-Muller.
    double next_unit() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the cosine/sine pair is consumed in
    /// order, so streams are reproducible draw by draw.
    double next_normal();

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stream seed for instance `index` under master `seed`: mixes the index with
/// the golden-ratio increment so streams are decorrelated and documented.
inline std::uint64_t instance_stream_seed(std::uint64_t seed, int index) {
    return seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1));
}

Vec standard_normal_vector(SplitMix64& gen, int n);

} // namespace hypercone
