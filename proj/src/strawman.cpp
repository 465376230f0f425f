#include "strawman.hpp"

#include <stdexcept>
#include <utility>

#include "pedersen.hpp"

namespace bpkcnm {

namespace {

// Generous fixed width for the per-session proof tags: a short label, a
// decimal session id, and a decimal group element fit with room to spare
// even for the large group.
constexpr size_t kSessionTagPad = 160;

}  // namespace

StrawmanKey gen_strawman_key(const GroupParams& group, Rng& rng) {
    bigint x0 = group.random_exponent(rng);
    bigint x1 = group.random_exponent(rng);
    int side = rng.bits(1).bit(0) ? 1 : 0;
    StrawmanKey key;
    key.verk0 = group.pow_g(x0);
    key.verk1 = group.pow_g(x1);
    key.sk = side == 1 ? x1 : x0;
    key.side = side;
    // The other exponent dies with this scope; the key never carries it.
    return key;
}

SigmaStatement strawman_key_stmt(const GroupParams& group, const StrawmanKey& key) {
    return stmt_or(stmt_dlog(group, key.verk0), stmt_dlog(group, key.verk1));
}

bigint strawman_h(const GroupParams& group) {
    return group.pow_g(3);
}

bigint nonmember_target(const GroupParams& group) {
    for (bigint x = 2;; ++x) {
        if (x >= group.p) throw std::logic_error("no non-member below the modulus");
        if (powm(x, group.q, group.p) != 1) return x;
    }
}

std::string secret_record_strawman(const StrawmanKey& key) {
    return "vsk:" + key.sk.str() + ":" + key.verk0.str() + ":" + key.verk1.str();
}

uint64_t binding_tag(const bigint& vk, const SigmaCommitMsg& a, const BitString& e,
                     const SigmaResponse& z) {
    return fnv1a64("bind|" + vk.str() + "|" + sigma_commit_canon(a) + "|" + e.to_hex() + "|" +
                   sigma_response_canon(z));
}

BitString spliced_challenge(const BitString& outer, const BitString& sim0,
                            const BitString& sim2) {
    return outer.xored(sim0).xored(sim2);
}

// ------------------------------------------------------------- verifier ----

struct StrawmanVerifier::Impl {
    GroupParams group;
    StrawmanKey key;
    bigint target = 0;
    uint64_t session_id = 0;
    Rng rng;
    bool patched = false;
    Env env;
    IdealLedger* ledger = nullptr;

    SigmaStatement key_stmt;
    // Wire cursor: 0 phase1_commit, 1 phase1_respond, 2 phase2,
    // 3 phase3_challenge, 4 phase3_finish, 5 done.
    int cursor = 0;
    std::unique_ptr<SigmaProver> key_prover;
    bigint com = 0;
    bigint vk = 0;
    SigmaStatement p3_stmt;
    SigmaCommitMsg a_p;
    BitString e_p;
    bool accepted = false;
    std::string reject_reason;

    Impl(const GroupParams& g, const StrawmanKey& k, const bigint& t, uint64_t id, Rng r)
        : group(g), key(k), target(t), session_id(id), rng(std::move(r)),
          key_stmt(strawman_key_stmt(g, k)) {}

    void expect(int stage, const char* what) {
        if (cursor != stage)
            throw std::logic_error(std::string("phase call out of order: ") + what);
    }

    bool reject(std::string why) {
        accepted = false;
        reject_reason = std::move(why);
        cursor = 5;
        return false;
    }
};

StrawmanVerifier::StrawmanVerifier(const GroupParams& group, const StrawmanKey& key,
                                   const bigint& target, uint64_t session_id, Rng rng)
    : impl_(std::make_unique<Impl>(group, key, target, session_id, std::move(rng))) {}

StrawmanVerifier::StrawmanVerifier(const GroupParams& group, const StrawmanKey& key,
                                   const bigint& target, uint64_t session_id, Rng rng,
                                   const Env& env, IdealLedger* ledger)
    : impl_(std::make_unique<Impl>(group, key, target, session_id, std::move(rng))) {
    impl_->patched = true;
    impl_->env = env;
    impl_->ledger = ledger;
}

StrawmanVerifier::~StrawmanVerifier() = default;

uint64_t StrawmanVerifier::session_id() const { return impl_->session_id; }
bool StrawmanVerifier::patched() const { return impl_->patched; }
const SigmaStatement& StrawmanVerifier::key_stmt() const { return impl_->key_stmt; }
bool StrawmanVerifier::accepted() const { return impl_->accepted; }
const std::string& StrawmanVerifier::reject_reason() const { return impl_->reject_reason; }

Tag StrawmanVerifier::session_tag() const {
    if (impl_->cursor < 3) throw std::logic_error("session tag undefined before phase 2");
    return make_tag({"toss-session", std::to_string(impl_->session_id), impl_->vk.str()},
                    kSessionTagPad);
}

const SigmaStatement& StrawmanVerifier::phase3_stmt() const {
    if (impl_->cursor < 3) throw std::logic_error("phase-3 statement undefined before phase 2");
    return impl_->p3_stmt;
}

SigmaCommitMsg StrawmanVerifier::phase1_commit() {
    impl_->expect(0, "phase1_commit");
    SigmaWitness w = impl_->key.side == 1 ? wit_or_right(wit_dlog(impl_->key.sk))
                                          : wit_or_left(wit_dlog(impl_->key.sk));
    impl_->key_prover = std::make_unique<SigmaProver>(impl_->key_stmt, w, impl_->rng);
    impl_->cursor = 1;
    return impl_->key_prover->commit();
}

SigmaResponse StrawmanVerifier::phase1_respond(const BitString& e_v) {
    impl_->expect(1, "phase1_respond");
    impl_->cursor = 2;
    return impl_->key_prover->respond(e_v);
}

void StrawmanVerifier::phase2(const bigint& com, const bigint& vk) {
    impl_->expect(2, "phase2");
    if (com <= 0 || com >= impl_->group.p || vk <= 0 || vk >= impl_->group.p)
        throw std::domain_error("phase-2 values out of range");
    impl_->com = com;
    impl_->vk = vk;
    // The prover must answer for one of: the public target's discrete log,
    // a verifier key exponent, or an opening of its own commitment.  The
    // middle arm is the phase-1 statement, verbatim -- the malleability
    // seam the interleaving drives through.
    impl_->p3_stmt =
        stmt_or3(stmt_dlog(impl_->group, impl_->target), impl_->key_stmt,
                 stmt_opening(impl_->group, strawman_h(impl_->group), com, "vk=" + vk.str()));
    impl_->cursor = 3;
}

BitString StrawmanVerifier::phase3_challenge(const SigmaCommitMsg& a_p) {
    impl_->expect(3, "phase3_challenge");
    impl_->a_p = a_p;
    impl_->e_p = sample_challenge(impl_->group, impl_->rng);
    impl_->cursor = 4;
    return impl_->e_p;
}

bool StrawmanVerifier::phase3_finish(const SigmaResponse& z_p, uint64_t delta) {
    impl_->expect(4, "phase3_finish");
    if (impl_->patched)
        return impl_->reject("this deployment accepts only ledger proofs in phase 3");
    SigmaTranscript tr{impl_->a_p, impl_->e_p, z_p};
    SigmaVerdict v = sigma_verify(impl_->p3_stmt, tr);
    if (!v.ok) return impl_->reject("phase-3 transcript rejected: " + v.reason);
    if (delta != binding_tag(impl_->vk, impl_->a_p, impl_->e_p, z_p))
        return impl_->reject("phase-3 binding tag mismatch");
    impl_->accepted = true;
    impl_->cursor = 5;
    return true;
}

bool StrawmanVerifier::phase3_finish(uint64_t entry_id) {
    impl_->expect(4, "phase3_finish");
    if (!impl_->patched)
        return impl_->reject("this deployment expects a transcript in phase 3");
    std::string why;
    bool ok = impl_->ledger->check_proof(entry_id, session_tag(),
                                         aok_stmt_canon(aok_stmt_sigma(impl_->p3_stmt)), &why);
    if (!ok) return impl_->reject("phase-3 ledger proof rejected: " + why);
    impl_->accepted = true;
    impl_->cursor = 5;
    return true;
}

// ------------------------------------------------------- honest prover ----

bool run_strawman_honest(const GroupParams& group, uint64_t seed, bool patched) {
    Rng master(seed);
    Rng verifier_rng = master.child("toss/verifier");
    Rng prover_rng = master.child("toss/prover");
    Rng key_rng = master.child("toss/key");

    StrawmanKey key = gen_strawman_key(group, key_rng);
    bigint w = group.random_exponent(prover_rng);
    bigint target = group.pow_g(w);

    Config env_cfg;
    env_cfg.group_name = group.name;
    Env env = Env::from(env_cfg);
    IdealLedger ledger;

    auto verifier = patched ? StrawmanVerifier(group, key, target, 0, std::move(verifier_rng),
                                               env, &ledger)
                            : StrawmanVerifier(group, key, target, 0, std::move(verifier_rng));

    // Phase 1: the verifier's key proof must convince the prover first.
    SigmaCommitMsg a_v = verifier.phase1_commit();
    BitString e_v = sample_challenge(group, prover_rng);
    SigmaResponse z_v = verifier.phase1_respond(e_v);
    if (!sigma_verify(verifier.key_stmt(), {a_v, e_v, z_v}).ok) return false;

    // Phase 2: commitment to zero plus a fresh one-time key.
    bigint rho = group.random_exponent(prover_rng);
    bigint com = pedersen_commit(group, strawman_h(group), 0, rho);
    bigint kappa = group.random_exponent(prover_rng);
    bigint vk = group.pow_g(kappa);
    verifier.phase2(com, vk);

    // Phase 3 with the real target witness.
    SigmaStatement stmt = verifier.phase3_stmt();
    SigmaWitness wit = wit_or3(0, wit_dlog(w));
    if (patched) {
        verifier.phase3_challenge(SigmaCommitMsg{});
        uint64_t id = ledger.submit(env, verifier.session_tag(), aok_stmt_sigma(stmt),
                                    aok_wit_sigma(wit), /*honest_origin=*/true);
        return verifier.phase3_finish(id);
    }
    SigmaProver prover(stmt, wit, prover_rng);
    SigmaCommitMsg a_p = prover.commit();
    BitString e_p = verifier.phase3_challenge(a_p);
    SigmaResponse z_p = prover.respond(e_p);
    return verifier.phase3_finish(z_p, binding_tag(vk, a_p, e_p, z_p));
}

// --------------------------------------------------------------- attack ----

namespace {

json commit_json(const SigmaCommitMsg& a) { return sigma_commit_canon(a); }
json response_json(const SigmaResponse& z) { return sigma_response_canon(z); }

// One full pass of the two-session schedule.  The same adversary moves run
// against both variants; only the phase-3 finish differs, because the
// patched verifier has nothing else to offer the adversary.
struct ScheduleResult {
    bool accepted = false;
    std::string reject_reason;
    json steps = json::array();
    json adversary_state;
    std::string middle_arm_challenge_hex;
    std::string harvested_commit_canon;
    std::string wire_middle_commit_canon;  // middle child of the a_p actually sent
    json middle_arm_provenance;
};

ScheduleResult run_schedule(const GroupParams& group, const StrawmanKey& key,
                            const bigint& target, Rng session1_rng, Rng session2_rng,
                            Rng adv_rng, bool patched, const Env& env, IdealLedger* ledger) {
    ScheduleResult out;
    StrawmanVerifier v1 = patched
        ? StrawmanVerifier(group, key, target, 1, std::move(session1_rng), env, ledger)
        : StrawmanVerifier(group, key, target, 1, std::move(session1_rng));
    StrawmanVerifier v2 = patched
        ? StrawmanVerifier(group, key, target, 2, std::move(session2_rng), env, ledger)
        : StrawmanVerifier(group, key, target, 2, std::move(session2_rng));

    size_t t = group.challenge_bits();

    // Step 1: open session 1 and harvest the verifier's key-proof commitment.
    // The challenge is withheld; this session now hangs mid-phase-1.
    SigmaCommitMsg a_v1 = v1.phase1_commit();
    out.steps.push_back({{"step", 1},
                         {"session", 1},
                         {"move", "harvest key-proof commitment, withhold challenge"},
                         {"a_v", commit_json(a_v1)}});

    // Step 2: run session 2's phase 1 to completion; the adversary plays an
    // ordinary phase-1 verifier there.
    SigmaCommitMsg a_v2 = v2.phase1_commit();
    BitString e_v2 = sample_challenge(group, adv_rng);
    SigmaResponse z_v2 = v2.phase1_respond(e_v2);
    bool key_proof_ok = sigma_verify(v2.key_stmt(), {a_v2, e_v2, z_v2}).ok;
    out.steps.push_back({{"step", 2},
                         {"session", 2},
                         {"move", "complete phase 1 honestly"},
                         {"key_proof_ok", key_proof_ok}});

    // Step 3: phase 2 toward session 2 with a commitment to zero and a
    // fresh one-time key.  Both are ordinary, honestly formed values.
    bigint rho = group.random_exponent(adv_rng);
    bigint com = pedersen_commit(group, strawman_h(group), 0, rho);
    bigint kappa = group.random_exponent(adv_rng);
    bigint vk = group.pow_g(kappa);
    v2.phase2(com, vk);
    out.steps.push_back({{"step", 3},
                         {"session", 2},
                         {"move", "send commitment and one-time key"},
                         {"com", com.str()},
                         {"vk", vk.str()}});

    // Step 4: assemble the phase-3 commit message.  Arms 0 and 2 are
    // simulated against pre-chosen challenges; arm 1 is session 1's
    // harvested commitment, spliced in unchanged.
    SigmaStatement p3 = v2.phase3_stmt();
    BitString e_xhat = adv_rng.bits(t);
    SigmaTranscript sim_target = sigma_simulate(p3.children[0], e_xhat, adv_rng);
    BitString e_c = adv_rng.bits(t);
    SigmaTranscript sim_open = sigma_simulate(p3.children[1].children[1], e_c, adv_rng);
    SigmaCommitMsg a_p = or3_commit(sim_target.a, a_v1, sim_open.a);
    out.harvested_commit_canon = sigma_commit_canon(a_v1);
    out.wire_middle_commit_canon = sigma_commit_canon(a_p.children[1].children[0]);
    BitString e_p = v2.phase3_challenge(a_p);
    out.steps.push_back({{"step", 4},
                         {"session", 2},
                         {"move", "send spliced commit message, receive challenge"},
                         {"e_target", e_xhat.to_hex()},
                         {"e_opening", e_c.to_hex()},
                         {"e_outer", e_p.to_hex()}});

    // Step 5: only now answer session 1.  The OR split fixes the middle
    // arm's challenge, so the withheld phase-1 challenge is chosen as
    // outer ^ target-arm ^ opening-arm, and the verifier itself completes
    // the transcript the adversary needs.
    BitString e_v1 = spliced_challenge(e_p, e_xhat, e_c);
    SigmaResponse z_v1 = v1.phase1_respond(e_v1);
    out.steps.push_back({{"step", 5},
                         {"session", 1},
                         {"move", "release spliced challenge, collect response"},
                         {"e_v", e_v1.to_hex()}});

    // Step 6: finish session 2.
    if (!patched) {
        SigmaResponse z_p = or3_response(e_xhat, sim_target.z, e_v1, z_v1, e_c, sim_open.z);
        uint64_t delta = binding_tag(vk, a_p, e_p, z_p);
        bool ok = v2.phase3_finish(z_p, delta);
        out.steps.push_back({{"step", 6},
                             {"session", 2},
                             {"move", "assemble response and binding tag"},
                             {"delta", delta},
                             {"accepted", ok}});
    } else {
        // No transcript path exists.  The ledger holds nothing to point at
        // (no honest prover ran), and a forged submission fails its
        // relation check, so the adversary's best final move dies on the
        // verifier's tag-and-verdict check.
        size_t prior_entries = ledger->size();
        uint64_t forged = ledger->submit(env, v2.session_tag(), aok_stmt_sigma(p3),
                                         aok_wit_sigma(wit_or3(0, wit_dlog(0))),
                                         /*honest_origin=*/false);
        bool ok = v2.phase3_finish(forged);
        out.steps.push_back({{"step", 6},
                             {"session", 2},
                             {"move", "attempt ledger proof without a witness"},
                             {"replayable_entries", prior_entries},
                             {"accepted", ok}});
    }
    out.accepted = v2.accepted();
    out.reject_reason = v2.reject_reason();

    out.adversary_state = {{"e_target", e_xhat.to_hex()},
                           {"e_opening", e_c.to_hex()},
                           {"sim_target", sigma_transcript_canon(sim_target)},
                           {"sim_opening", sigma_transcript_canon(sim_open)},
                           {"rho", rho.str()},
                           {"kappa", kappa.str()},
                           {"com", com.str()},
                           {"vk", vk.str()},
                           {"harvested_a", commit_json(a_v1)},
                           {"harvested_z", response_json(z_v1)}};
    out.middle_arm_challenge_hex = e_v1.to_hex();
    out.middle_arm_provenance = json::array(
        {{{"arm", "target-dlog"}, {"provenance", "simulated"}, {"challenge", e_xhat.to_hex()}},
         {{"arm", "verifier-key"},
          {"provenance", "harvested-remote"},
          {"challenge", e_v1.to_hex()}},
         {{"arm", "commitment-opening"},
          {"provenance", "simulated"},
          {"challenge", e_c.to_hex()}},
         {{"piece", "binding-tag"}, {"provenance", "computed-public"}}});
    return out;
}

}  // namespace

json AttackResult::artifact() const {
    return {{"success", success},
            {"patched_success", patched_success},
            {"patched_reason", patched_reason},
            {"trace", trace},
            {"witness_absence", witness_absence}};
}

AttackResult run_interleaving_attack(const Config& cfg) {
    const GroupParams group = GroupParams::by_name(cfg.group_name);
    Rng master(cfg.seed);
    Rng key_rng = master.child("toss/key");
    StrawmanKey key = gen_strawman_key(group, key_rng);
    bigint target = nonmember_target(group);
    if (powm(target, group.q, group.p) == 1)
        throw std::logic_error("attack target unexpectedly lies in the subgroup");

    Env env = Env::from(cfg);
    IdealLedger ledger;
    ScheduleResult plain = run_schedule(group, key, target, master.child("toss/session", 1),
                                        master.child("toss/session", 2), master.child("toss/adv"),
                                        /*patched=*/false, env, &ledger);
    ScheduleResult patched = run_schedule(
        group, key, target, master.child("toss/patched-session", 1),
        master.child("toss/patched-session", 2), master.child("toss/patched-adv"),
        /*patched=*/true, env, &ledger);

    AttackResult out;
    out.success = plain.accepted;
    out.patched_success = patched.accepted;
    out.patched_reason = patched.reject_reason;
    out.trace = {{"target", target.str()},
                 {"steps", plain.steps},
                 {"patched_steps", patched.steps}};

    // Witness absence, checked three ways: the target arm's statement is
    // false outright; the middle arm is byte-identical to the harvested
    // phase-1 commitment; and the adversary's complete working state never
    // contains the verifier's key exponent record.
    std::string secret = secret_record_strawman(key);
    std::string state_dump = plain.adversary_state.dump() + plain.steps.dump();
    bool middle_is_harvest =
        plain.wire_middle_commit_canon == plain.harvested_commit_canon;
    out.witness_absence = {
        {"target_outside_subgroup", powm(target, group.q, group.p) != 1},
        {"target_power_q", powm(target, group.q, group.p).str()},
        {"middle_arm_is_harvested_transcript", middle_is_harvest},
        {"middle_arm_challenge", plain.middle_arm_challenge_hex},
        {"verifier_secret_absent", state_dump.find(secret) == std::string::npos},
        {"provenance", plain.middle_arm_provenance},
        {"adversary_state", plain.adversary_state}};
    return out;
}

}  // namespace bpkcnm
