#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace pwlab {

/**
 * Deterministic random stream.
 *
 * Seeded instances replay bit-exactly on every platform: the engine is the
 * standard-pinned mt19937_64 and all range reductions are done by explicit
 * rejection sampling, never through std::uniform_int_distribution (whose
 * output is implementation-defined). from_entropy() draws the seed from the
 * OS for non-test use.
 */
class DetRng {
public:
    explicit DetRng(uint64_t seed) : seed_(seed), engine_(seed) {}

    static DetRng from_entropy();

    uint64_t seed() const { return seed_; }

    uint64_t next_u64() { return engine_(); }

    void fill(std::span<uint8_t> out);

    /// Derives an independent substream from the original seed and a label.
    /// Forking does not advance this stream.
    DetRng fork(std::string_view label) const;

private:
    uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace pwlab
