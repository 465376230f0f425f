#include "naor.hpp"

#include <stdexcept>

namespace bpkcnm {

NaorCommitment naor_commit(const Env& env, uint8_t bit, const BitString& seed, const BitString& R) {
    if (bit > 1) throw std::domain_error("naor_commit: bit must be 0 or 1");
    if (seed.size() != env.n) throw std::domain_error("naor_commit: seed must have n bits");
    if (R.size() != 3 * env.n) throw std::domain_error("naor_commit: R must have 3n bits");
    BitString value = env.prg_expand(seed, 3 * env.n);
    if (bit == 1) value = value.xored(R);
    return NaorCommitment{R, value};
}

bool naor_verify(const Env& env, const NaorCommitment& com, const NaorOpening& opening) {
    if (opening.committed_bit > 1 || opening.seed.size() != env.n) return false;
    if (com.receiver_string.size() != 3 * env.n || com.value.size() != 3 * env.n) return false;
    NaorCommitment expect =
        naor_commit(env, opening.committed_bit, opening.seed, com.receiver_string);
    return expect.value == com.value;
}

std::vector<NaorCommitment> naor_commit_string(const Env& env, const BitString& msg,
                                               const std::vector<BitString>& seeds,
                                               const BitString& R) {
    if (seeds.size() != msg.size())
        throw std::domain_error("naor_commit_string: one seed per message bit required");
    std::vector<NaorCommitment> coms;
    coms.reserve(msg.size());
    for (size_t i = 0; i < msg.size(); ++i)
        coms.push_back(naor_commit(env, msg.bit(i), seeds[i], R));
    return coms;
}

bool naor_verify_string(const Env& env, const std::vector<NaorCommitment>& coms,
                        const BitString& msg, const std::vector<BitString>& seeds) {
    if (coms.size() != msg.size() || seeds.size() != msg.size()) return false;
    for (size_t i = 0; i < msg.size(); ++i)
        if (!naor_verify(env, coms[i], NaorOpening{msg.bit(i), seeds[i]})) return false;
    return true;
}

BitString naor_string_value(const std::vector<NaorCommitment>& coms) {
    BitString out;
    for (const auto& c : coms) out = out.concat(c.value);
    return out;
}

}  // namespace bpkcnm
