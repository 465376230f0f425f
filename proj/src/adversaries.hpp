// Built-in adversary strategies for the man-in-the-middle experiment.
#pragma once

#include <deque>
#include <memory>

#include "harness.hpp"

namespace bpkcnm {

// Ends the attack immediately: no sessions, empty lists.
class NullAdversary : public Adversary {
public:
    AdversaryAction next_action(AdvCtx& ctx) override;
};

// Pairs left and right sessions against the honest keys and copies every
// message across unchanged.  The canonical copying strategy.
class RelayAdversary : public Adversary {
public:
    AdversaryAction next_action(AdvCtx& ctx) override;

private:
    size_t started_left_ = 0;
    size_t started_right_ = 0;
    size_t scanned_ = 0;  // view events already turned into forwards
};

// Registers one key of each role and runs every session itself, by the
// book, with its own keys: left and right sessions never interact.
class IndependentAdversary : public Adversary {
public:
    std::vector<json> register_keys(AdvCtx& ctx) override;
    AdversaryAction next_action(AdvCtx& ctx) override;

private:
    void scan(AdvCtx& ctx);

    RightKeyPair right_key_;
    LeftKeyPair left_key_;
    size_t right_key_id_ = 0;
    size_t left_key_id_ = 0;
    size_t started_left_ = 0;
    size_t started_right_ = 0;
    size_t scanned_ = 0;
    std::deque<AdversaryAction> pending_;
    std::vector<BitString> r_prime_sent_;  // per right session
};

// Registers one fresh right key, runs Stage-1 of a single left session with
// it, and stops.  Minimal strategy that makes the simulator extract a key.
class Stage1ProberAdversary : public Adversary {
public:
    std::vector<json> register_keys(AdvCtx& ctx) override;
    AdversaryAction next_action(AdvCtx& ctx) override;

private:
    RightKeyPair key_;
    size_t key_id_ = 0;
    int step_ = 0;
};

// Adversary id dispatch; "scripted:<file>" reads {"base": <id>} from the
// file and builds that strategy.
std::unique_ptr<Adversary> make_adversary(const Config& cfg);

}  // namespace bpkcnm
