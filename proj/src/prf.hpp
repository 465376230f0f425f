// GGM pseudorandom function: a binary tree of PRG expansions keyed by an
// n-bit seed, evaluated by walking the input bits.
#pragma once

#include <cstddef>

#include "bitstring.hpp"
#include "group.hpp"
#include "prg.hpp"

namespace bpkcnm {

// Walk d = |x| levels: expand the current n-bit value to 2n bits and keep the
// half selected by the input bit (0 = first half).  Output is n bits.
BitString prf_eval(const GroupParams& group, PrgBackendKind kind, const BitString& sigma,
                   const BitString& x, size_t expected_input_len);

}  // namespace bpkcnm
