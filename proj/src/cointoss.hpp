// Five-stage coin-tossing sessions as explicit state machines.  The base
// classes own the wire discipline (stage order, strict verification gates,
// abort-with-survivor-output totality); honest players and the simulator
// plug in behavior through a handful of virtual hooks.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bpk.hpp"
#include "config.hpp"
#include "zkaok.hpp"

namespace bpkcnm {

struct StageMsg {
    std::string stage;  // "s1".."s5"
    json payload;

    json to_json() const { return json{{"stage", stage}, {"payload", payload}}; }
};

// Shared per-session record: cursor, full message log, final output.
struct SessionCore {
    size_t index = 0;
    size_t peer_key_id = 0;
    std::string cursor;  // stage the machine is waiting at, or Done/Aborted
    std::vector<json> log;
    std::string abort_reason;
    BitString output;
    bool has_output = false;
    bool survivor_output = false;
    std::optional<Tag> tag;  // session tag of the Stage-5 (left) / Stage-1 (right) proof

    json to_json() const;
};

// Payload builders shared by honest players and adversaries that choose to
// play a role by the book with their own keys.  The submit function decides
// where the proof entry lands (honest players write honest-origin ledger
// entries; adversaries go through their proof oracle).
using SubmitFn = std::function<uint64_t(Tag, AokStatement, AokWitness)>;

json build_stage1_payload(const Env& env, const SubmitFn& submit, const ParsedLeftPk& left_pk,
                          const std::string& left_pk_canon, const RightKeyPair& kp, Rng& rng);
json build_stage5_payload_seed_branch(const Env& env, const SubmitFn& submit,
                                      const LeftKeyPair& keys, const std::string& left_pk_canon,
                                      const ParsedRightPk& peer, const BitString& r_prime_l,
                                      const BitString& r_r, const BitString& r, Rng& rng);

json build_stage1_payload(const Env& env, IdealLedger& ledger, const ParsedLeftPk& left_pk,
                          const std::string& left_pk_canon, const RightKeyPair& kp, Rng& rng,
                          bool honest_origin);
json build_stage5_payload_seed_branch(const Env& env, IdealLedger& ledger,
                                      const LeftKeyPair& keys, const std::string& left_pk_canon,
                                      const ParsedRightPk& peer, const BitString& r_prime_l,
                                      const BitString& r_r, const BitString& r, Rng& rng,
                                      bool honest_origin);

// ------------------------------------------------------------ left side ----

class LeftSessionBase {
public:
    LeftSessionBase(const Env& env, IdealLedger* ledger, ParsedLeftPk own_pk,
                    std::string own_pk_canon, json peer_key, size_t index, size_t peer_key_id,
                    Rng rng);
    virtual ~LeftSessionBase() = default;

    // Deliver one message; responses (possibly several stages) come back.
    std::vector<StageMsg> on_message(const StageMsg& msg);
    // Forced close at experiment end: unfinished sessions abort and the
    // survivor picks the output.
    void close(const std::string& reason);
    bool open() const { return core_.cursor != "Done" && core_.cursor != "Aborted"; }
    const SessionCore& core() const { return core_; }

protected:
    virtual BitString stage4_value(const BitString& r_prime_l, const BitString& r_r) = 0;
    // Returns the full Stage-5 payload (commitments plus proof reference).
    virtual json stage5_payload(const BitString& r_prime_l, const BitString& r_r,
                                const BitString& r) = 0;
    virtual BitString survivor_value() = 0;
    virtual void on_stage1_accepted() {}

    void abort_session(const std::string& reason);

    Env env_;
    IdealLedger* ledger_;
    ParsedLeftPk own_pk_;
    std::string own_pk_canon_;
    json peer_key_;
    std::optional<ParsedRightPk> peer_;
    SessionCore core_;
    Rng rng_;
    BitString r_prime_l_;
    uint64_t stage1_entry_ = 0;  // accepted Stage-1 proof entry, set before the hook runs
};

class HonestLeftSession : public LeftSessionBase {
public:
    HonestLeftSession(const Env& env, IdealLedger* ledger, const LeftKeyPair& keys,
                      json peer_key, size_t index, size_t peer_key_id, Rng rng);

protected:
    BitString stage4_value(const BitString& r_prime_l, const BitString& r_r) override;
    json stage5_payload(const BitString& r_prime_l, const BitString& r_r,
                        const BitString& r) override;
    BitString survivor_value() override;

private:
    LeftKeyPair keys_;
};

// ----------------------------------------------------------- right side ----

class RightSessionBase {
public:
    RightSessionBase(const Env& env, IdealLedger* ledger, const RightKeyPair& keys,
                     json claimed_left_key, size_t index, size_t peer_key_id, Rng rng);
    virtual ~RightSessionBase() = default;

    // The right player opens the session; returns the Stage-1 message (or
    // nothing if the claimed peer key is unusable and the session aborts).
    std::vector<StageMsg> start();
    std::vector<StageMsg> on_message(const StageMsg& msg);
    void close(const std::string& reason);
    bool open() const { return core_.cursor != "Done" && core_.cursor != "Aborted"; }
    const SessionCore& core() const { return core_; }
    const BitString& r_r_sent() const { return r_r_; }

protected:
    virtual BitString stage3_value(const BitString& r_prime_l) = 0;
    virtual BitString survivor_value() = 0;
    virtual void on_accept() {}
    // Stage-1 proof origin flag: honest players and the simulator both mark
    // their entries as honestly produced.
    virtual bool honest_origin() const { return true; }

    void abort_session(const std::string& reason);

    Env env_;
    IdealLedger* ledger_;
    RightKeyPair keys_;
    json claimed_left_key_;
    std::optional<ParsedLeftPk> peer_;
    std::string peer_canon_;
    SessionCore core_;
    Rng rng_;
    BitString r_prime_l_;
    BitString r_r_;
    BitString r_tilde_;
    uint64_t stage5_entry_ = 0;  // accepted Stage-5 proof entry, set before the hook runs
};

class HonestRightSession : public RightSessionBase {
public:
    using RightSessionBase::RightSessionBase;

protected:
    BitString stage3_value(const BitString& r_prime_l) override;
    BitString survivor_value() override;
};

// ------------------------------------------------------------ honest run ----

// Two honest players wired directly together (no adversary in the middle);
// the completeness baseline.
struct HonestRunResult {
    bool left_done = false;
    bool right_done = false;
    BitString left_output;
    BitString right_output;
    size_t ledger_entries = 0;
};

HonestRunResult run_honest_session(const Env& env, uint64_t seed);

}  // namespace bpkcnm
