// Naor's statistically-binding bit commitment: the receiver supplies a 3n-bit
// string R, a bit 0 commits as PRG(s) and a bit 1 as PRG(s) xor R.
#pragma once

#include <cstddef>
#include <vector>

#include "bitstring.hpp"
#include "config.hpp"

namespace bpkcnm {

struct NaorCommitment {
    BitString receiver_string;  // R, 3n bits
    BitString value;            // 3n bits
};

struct NaorOpening {
    uint8_t committed_bit = 0;
    BitString seed;  // n bits
};

NaorCommitment naor_commit(const Env& env, uint8_t bit, const BitString& seed, const BitString& R);
bool naor_verify(const Env& env, const NaorCommitment& com, const NaorOpening& opening);

// Bitwise extension: position i commits msg bit i with its own seed, all
// positions under one receiver string.
std::vector<NaorCommitment> naor_commit_string(const Env& env, const BitString& msg,
                                               const std::vector<BitString>& seeds,
                                               const BitString& R);
bool naor_verify_string(const Env& env, const std::vector<NaorCommitment>& coms,
                        const BitString& msg, const std::vector<BitString>& seeds);

// Canonical wire form of a string commitment: the concatenated values (R
// travels separately with the public key that owns it).
BitString naor_string_value(const std::vector<NaorCommitment>& coms);

}  // namespace bpkcnm
