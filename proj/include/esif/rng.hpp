#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "esif/matrix.hpp"

namespace esif {

/// Counter-based deterministic random stream.
///
/// Draw i of stream `seed` is a pure function of (seed, i): the SplitMix64
/// output function applied to seed + (i+1)*golden.  Streams are therefore
/// reproducible across platforms, independent of draw order, and cheap to
/// split (derive a sub-seed per consumer).  This is what makes factorization
/// builds bitwise deterministic for a given seed regardless of traversal
/// order.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Draw i of stream `seed`, uniform on [0, 1) with 53-bit resolution.
inline double uniform_at(std::uint64_t seed, std::uint64_t i) {
    return static_cast<double>(mix64(seed, i) >> 11) * 0x1.0p-53;
}

/// Draw i of stream `seed`, standard normal via Box-Muller.  Consumes two
/// underlying counter values per draw; the log argument is shifted into
/// (0, 1] so the transform never sees zero.
inline double gaussian_at(std::uint64_t seed, std::uint64_t i) {
    const double u1 =
        static_cast<double>((mix64(seed, 2 * i) >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(mix64(seed, 2 * i + 1) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

/// m-by-p matrix of independent standard normals, filled column-major so the
/// entry at (i, j) is draw j*m + i of the stream.
inline Matrix gaussian_matrix(std::uint64_t seed, idx m, idx p) {
    Matrix z(m, p);
    for (idx j = 0; j < p; ++j)
        for (idx i = 0; i < m; ++i)
            z(i, j) = gaussian_at(seed, static_cast<std::uint64_t>(j) * m + i);
    return z;
}

} // namespace esif
