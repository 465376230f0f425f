#include "prg.hpp"

#include <stdexcept>

#include "rng.hpp"

namespace bpkcnm {

std::string prg_backend_name(PrgBackendKind kind) {
    switch (kind) {
        case PrgBackendKind::BlumMicali: return "blum-micali";
        case PrgBackendKind::FastInsecure: return "fast-insecure";
    }
    throw std::logic_error("unreachable");
}

PrgBackendKind prg_backend_by_name(const std::string& name) {
    if (name == "blum-micali") return PrgBackendKind::BlumMicali;
    if (name == "fast-insecure") return PrgBackendKind::FastInsecure;
    throw std::domain_error("unknown prg backend: " + name);
}

namespace {

// Blum-Micali: iterate x -> f(x) = g^x and emit the least significant bit of
// the current exponent as the hard-core predicate.  f maps exponents to group
// elements, so each step must carry the element back into [0, q).  For
// enumerable subgroups we use the element's rank in the sorted subgroup —
// a bijection, so distinct states never merge (mod-q reduction does merge
// trajectories and breaks the distinctness property; see
// tests/oracles/prg_ggm_naor.py).  Non-enumerable groups fall back to mod-q.
BitString expand_blum_micali(const GroupParams& group, const BitString& seed, size_t out_len) {
    bigint state = bits_to_bigint(seed) % group.q;
    BitString out = BitString::zeros(out_len);
    for (size_t i = 0; i < out_len; ++i) {
        out.set_bit(i, static_cast<uint8_t>(static_cast<unsigned>(state & 1)));
        bigint next = group.pow_g(state);
        state = group.enumerable() ? bigint(group.rank(next)) : next % group.q;
    }
    return out;
}

// Keyed SplitMix64 stream; fast, deterministic, openly insecure.
BitString expand_fast(const BitString& seed, size_t out_len) {
    Rng stream(fnv1a64("prg:" + seed.to_hex()));
    return stream.bits(out_len);
}

}  // namespace

BitString prg_expand(const GroupParams& group, PrgBackendKind kind, const BitString& seed,
                     size_t out_len) {
    if (seed.size() == 0) throw std::domain_error("prg_expand: empty seed");
    if (out_len == 0) throw std::domain_error("prg_expand: out_len must be >= 1");
    switch (kind) {
        case PrgBackendKind::BlumMicali: return expand_blum_micali(group, seed, out_len);
        case PrgBackendKind::FastInsecure: return expand_fast(seed, out_len);
    }
    throw std::logic_error("unreachable");
}

}  // namespace bpkcnm
