// Deterministic seeded randomness with domain-separated substreams.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "bitstring.hpp"

namespace bpkcnm {

// FNV-1a 64-bit, used for substream derivation and lightweight binding hashes.
uint64_t fnv1a64(const void* data, size_t len);
uint64_t fnv1a64(const std::string& s);

// SplitMix64 stream.  Stable across platforms and compilers; every draw is a
// pure function of the seed, so equal configs reproduce equal experiments.
class Rng {
public:
    explicit Rng(uint64_t seed);

    uint64_t next();
    // Uniform in [0, bound) by rejection; bound >= 1.
    uint64_t below(uint64_t bound);
    BitString bits(size_t len);

    // Independent substream; derived from the construction seed, not from the
    // current position, so fork order never depends on consumption order.
    Rng child(const std::string& domain) const;
    Rng child(const std::string& domain, uint64_t index) const;

    uint64_t seed() const { return seed_; }

private:
    uint64_t seed_;
    uint64_t state_;
};

}  // namespace bpkcnm
