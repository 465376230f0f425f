// A deliberately malleable three-phase proof protocol and the two-session
// interleaving that breaks it.  Phase 1: the verifier proves knowledge of
// one of its two registered key exponents (an OR of discrete logs).  Phase
// 2: the prover sends a Pedersen commitment and a fresh one-time key.
// Phase 3: the prover gives a three-arm OR proof -- the target element has
// a discrete log, or the prover knows a verifier key exponent, or the
// prover can open the commitment -- with the transcript bound to the
// one-time key by a hash tag.  The flaw is structural: the phase-1
// statement reappears verbatim as the middle arm of phase 3, so a
// man-in-the-middle running two sessions under the same verifier key can
// finish phase 3 of one session by splicing in the verifier's own phase-1
// transcript from the other, steering that arm's challenge to the XOR of
// the outer challenge with the two arms it simulated.  The patched variant
// swaps phase 3 for a session-tag-bound ledger proof, against which the
// same schedule fails.
#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "config.hpp"
#include "group.hpp"
#include "rng.hpp"
#include "serialize.hpp"
#include "sigma.hpp"
#include "zkaok.hpp"

namespace bpkcnm {

// Verifier key: two group elements whose exponents were drawn together, with
// one exponent discarded immediately.  `sk` opens verk0 when side == 0,
// verk1 when side == 1.
struct StrawmanKey {
    bigint verk0 = 0;
    bigint verk1 = 0;
    bigint sk = 0;
    int side = 0;
};

StrawmanKey gen_strawman_key(const GroupParams& group, Rng& rng);

// Statement the verifier proves in phase 1 and the prover reuses as the
// middle arm in phase 3: Or(dlog(verk0), dlog(verk1)).
SigmaStatement strawman_key_stmt(const GroupParams& group, const StrawmanKey& key);

// Fixed second Pedersen generator shared by every session (g^3; nothing in
// the protocol relies on its exponent being unknown, and no code here uses
// it).
bigint strawman_h(const GroupParams& group);

// Smallest integer >= 2 outside the order-q subgroup.  A phase-3 statement
// claiming a discrete log for it is unconditionally false, which is what
// makes an accepting proof over it witness-free by construction.
bigint nonmember_target(const GroupParams& group);

// Framed secret record for leak scans over attack artifacts: the verifier's
// key exponent in context.
std::string secret_record_strawman(const StrawmanKey& key);

// Hash binding a phase-3 transcript to the session's one-time key.  Stands
// in for a signature under vk; forging it for fresh (a, e, z) under the same
// vk is exactly what the interleaving does NOT need to do, which is the
// point the binding check demonstrates.
uint64_t binding_tag(const bigint& vk, const SigmaCommitMsg& a, const BitString& e,
                     const SigmaResponse& z);

// Middle-arm challenge forced by the splice: with the outer challenge fixed
// by the verifier and the two simulated arms' challenges chosen in advance,
// the OR split leaves exactly outer ^ sim0 ^ sim2 for the spliced arm.
BitString spliced_challenge(const BitString& outer, const BitString& sim0,
                            const BitString& sim2);

// One verifier session.  Methods follow the wire order; out-of-order calls
// throw std::logic_error.  The patched construction routes phase 3 through
// a tag-checked proof ledger instead of a transcript + binding pair.
class StrawmanVerifier {
public:
    StrawmanVerifier(const GroupParams& group, const StrawmanKey& key, const bigint& target,
                     uint64_t session_id, Rng rng);
    StrawmanVerifier(const GroupParams& group, const StrawmanKey& key, const bigint& target,
                     uint64_t session_id, Rng rng, const Env& env, IdealLedger* ledger);
    ~StrawmanVerifier();

    uint64_t session_id() const;
    bool patched() const;
    const SigmaStatement& key_stmt() const;
    // Per-session proof tag used by the patched variant; defined in both
    // variants once phase 2 fixed the one-time key.
    Tag session_tag() const;
    // Full phase-3 statement; defined once phase 2 fixed C and vk.
    const SigmaStatement& phase3_stmt() const;

    // Phase 1 (verifier proves its key): commitment out, challenge in,
    // response out.
    SigmaCommitMsg phase1_commit();
    SigmaResponse phase1_respond(const BitString& e_v);

    // Phase 2: prover's commitment and one-time key.
    void phase2(const bigint& com, const bigint& vk);

    // Phase 3: the challenge is issued only once the prover's commit message
    // is on the wire.  Unpatched sessions finish with a response + binding
    // tag; patched sessions finish with a ledger entry id.  Both finishers
    // return the acceptance verdict, also available via accepted().
    BitString phase3_challenge(const SigmaCommitMsg& a_p);
    bool phase3_finish(const SigmaResponse& z_p, uint64_t delta);
    bool phase3_finish(uint64_t entry_id);

    bool accepted() const;
    const std::string& reject_reason() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Honest completeness check: a prover holding a discrete-log witness for an
// in-subgroup target runs one full session.  Returns the verifier's verdict.
bool run_strawman_honest(const GroupParams& group, uint64_t seed, bool patched);

// The two-session interleaving, run deterministically from cfg.seed, then
// replayed against patched verifiers.
struct AttackResult {
    bool success = false;          // second session accepted phase 3
    bool patched_success = false;  // same schedule against the patched variant
    std::string patched_reason;    // verifier's stated reason for rejecting it
    json trace;                    // annotated schedule, one entry per step
    json witness_absence;          // evidence no witness backed the proof
    json artifact() const;
};

AttackResult run_interleaving_attack(const Config& cfg);

}  // namespace bpkcnm
