// Concurrent man-in-the-middle event loop: the adversary schedules up to s
// sessions on each side against the honest players, one action at a time,
// and everything it sees or does lands in a replayable trace.
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bpk.hpp"
#include "cointoss.hpp"
#include "config.hpp"
#include "zkaok.hpp"

namespace bpkcnm {

struct AdversaryAction {
    enum class Kind { StartLeft, StartRight, DeliverLeft, DeliverRight, EndAttack };
    Kind kind = Kind::EndAttack;
    size_t peer_key_id = 0;  // Start*
    size_t session = 0;      // Deliver*
    StageMsg msg;            // Deliver*

    json to_json() const;
    static AdversaryAction start_left(size_t peer_key_id);
    static AdversaryAction start_right(size_t peer_key_id);
    static AdversaryAction deliver_left(size_t session, StageMsg msg);
    static AdversaryAction deliver_right(size_t session, StageMsg msg);
    static AdversaryAction end_attack();
};

// Services the adversary may use: its registered view, its own coins, and
// the proof oracle (entries it submits are never marked honest).
class AdvCtx {
public:
    AdvCtx(const Env& env, const PublicFile* file, IdealLedger* ledger, Rng* rng,
           std::vector<json>* view)
        : env_(env), file_(file), ledger_(ledger), rng_(rng), view_(view) {}

    const Env& env() const { return env_; }
    const PublicFile& file() const { return *file_; }
    Rng& rng() { return *rng_; }
    const std::vector<json>& view() const { return *view_; }

    uint64_t prove(Tag tag, AokStatement stmt, AokWitness wit);
    bool check(uint64_t entry, const Tag& tag, const std::string& stmt_canon) const;

private:
    const Env& env_;
    const PublicFile* file_;
    IdealLedger* ledger_;
    Rng* rng_;
    std::vector<json>* view_;
};

class Adversary {
public:
    virtual ~Adversary() = default;
    // Key-registration phase: returns the keys to place in the public file.
    virtual std::vector<json> register_keys(AdvCtx& ctx) {
        (void)ctx;
        return {};
    }
    // Session phase: called repeatedly; inspect ctx.view() and pick the next
    // move.  EndAttack finishes the experiment.
    virtual AdversaryAction next_action(AdvCtx& ctx) = 0;
};

struct ExperimentTrace {
    json public_file;
    std::vector<json> left_sessions;
    std::vector<json> right_sessions;
    std::vector<json> view;
    std::vector<json> actions;
    std::vector<json> illegal;
    bool budget_exhausted = false;
    bool attack_ended = false;
    json ledger_public;

    struct Out {
        size_t index = 0;
        size_t peer_key_id = 0;
        bool done = false;
        bool survivor = false;
        BitString output;
        std::optional<Tag> tag;
    };
    std::vector<Out> left_out;
    std::vector<Out> right_out;

    json to_json() const;
    bool clean() const { return !budget_exhausted && illegal.empty(); }
};

// Session construction is pluggable so the simulator can run the very same
// loop with its own session behaviors.
struct LoopParams {
    const Env* env = nullptr;
    const Config* cfg = nullptr;
    PublicFile* file = nullptr;  // frozen, adversary keys included
    IdealLedger* ledger = nullptr;
    Adversary* adversary = nullptr;
    Rng* adv_rng = nullptr;
    std::function<std::unique_ptr<LeftSessionBase>(size_t index, size_t peer_key_id,
                                                   const json& peer_key, Rng rng)>
        make_left;
    std::function<std::unique_ptr<RightSessionBase>(size_t index, size_t peer_key_id,
                                                    const json& claimed_key, Rng rng)>
        make_right;
    Rng session_rng_root{0};  // per-session coins derive from this by (side, index)
    // Checked after every applied action; lets a caller cut the run short
    // (the simulator ends a repetition this way).
    std::function<bool()> stop_requested;
    json init_extra = json::object();
};

ExperimentTrace run_loop(LoopParams& p);

// The real experiment: honest players on both sides, adversary in the
// middle, keys generated fresh from the config seed.
struct ExperimentResult {
    ExperimentTrace trace;
    LeftKeyPair left_keys;    // kept for analysis/tests; never serialized
    RightKeyPair right_keys;  // likewise
};

ExperimentResult run_experiment(const Config& cfg, Adversary* adversary_override = nullptr);

}  // namespace bpkcnm
