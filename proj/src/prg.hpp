// Pseudorandom generator backends: principled Blum-Micali iteration over the
// group one-way function, plus a fast non-cryptographic expander for tests
// that do not measure binding.
#pragma once

#include <cstddef>
#include <string>

#include "bitstring.hpp"
#include "group.hpp"

namespace bpkcnm {

enum class PrgBackendKind { BlumMicali, FastInsecure };

std::string prg_backend_name(PrgBackendKind kind);
PrgBackendKind prg_backend_by_name(const std::string& name);

// Deterministic expansion of `seed` to `out_len` bits.  Same seed and length
// always reproduce the same output; longer outputs extend shorter ones.
BitString prg_expand(const GroupParams& group, PrgBackendKind kind, const BitString& seed,
                     size_t out_len);

}  // namespace bpkcnm
