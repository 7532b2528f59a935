// rng.hpp: seed-derived random streams

#pragma once

#include <cstdint>
#include <random>

namespace qrc {

// Independent substreams derived from one experiment seed. The coupling
// matrix and the input sequence draw from different streams so that changing
// a sequence length never perturbs J.
enum class Stream : std::uint32_t {
    Couplings = 1,
    Inputs = 2,
    States = 3,
    Surrogates = 4,
};

inline std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), 0x51a7e5u};
    return std::mt19937_64(seq);
}

}  // namespace qrc
