// Pedersen commitment g^m * h^r: the Sigma-friendly commitment used by the
// proof-of-opening relations (the coin-toss protocol itself stays on Naor).
#pragma once

#include "group.hpp"
#include "rng.hpp"

namespace bpkcnm {

// Second generator h = g^t with t sampled and discarded.
bigint pedersen_gen_h(const GroupParams& group, Rng& rng);

bigint pedersen_commit(const GroupParams& group, const bigint& h, const bigint& m,
                       const bigint& r);
bool pedersen_verify(const GroupParams& group, const bigint& h, const bigint& com,
                     const bigint& m, const bigint& r);

}  // namespace bpkcnm
