#include "rng.hpp"

#include <stdexcept>

namespace bpkcnm {

uint64_t fnv1a64(const void* data, size_t len) {
    const auto* p = static_cast<const uint8_t*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

Rng::Rng(uint64_t seed) : seed_(seed), state_(seed) {}

uint64_t Rng::next() {
    // SplitMix64 (Steele, Lea, Flood 2014).
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t Rng::below(uint64_t bound) {
    if (bound == 0) throw std::domain_error("rng: below(0)");
    if (bound == 1) return 0;
    // Rejection sampling over the largest multiple of bound that fits.
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    for (;;) {
        uint64_t v = next();
        if (v < limit) return v % bound;
    }
}

BitString Rng::bits(size_t len) {
    BitString out = BitString::zeros(len);
    uint64_t word = 0;
    size_t avail = 0;
    for (size_t i = 0; i < len; ++i) {
        if (avail == 0) {
            word = next();
            avail = 64;
        }
        out.set_bit(i, static_cast<uint8_t>((word >> 63) & 1));
        word <<= 1;
        --avail;
    }
    return out;
}

Rng Rng::child(const std::string& domain) const {
    return Rng(seed_ ^ (fnv1a64(domain) | 1ULL));
}

Rng Rng::child(const std::string& domain, uint64_t index) const {
    uint64_t h = fnv1a64(domain);
    // Mix the index through one extra FNV round so ("rep",1) and ("rep",2)
    // land in unrelated streams.
    uint8_t idx_bytes[8];
    for (int i = 0; i < 8; ++i) idx_bytes[i] = static_cast<uint8_t>(index >> (8 * i));
    uint64_t h2 = fnv1a64(idx_bytes, 8) ^ (h * 0x9e3779b97f4a7c15ULL);
    return Rng(seed_ ^ (h2 | 1ULL));
}

}  // namespace bpkcnm
