// Five-stage coin-tossing sessions: completeness, abort totality, wire
// discipline, and deterministic replay of the session state machines.
#include <doctest.h>

#include <memory>
#include <string>
#include <vector>

#include "bpk.hpp"
#include "cointoss.hpp"
#include "config.hpp"
#include "rng.hpp"
#include "zkaok.hpp"

using namespace bpkcnm;

namespace {

Env small_env() {
    Config cfg;
    cfg.n = 8;
    cfg.prf_input_len = 8;
    return Env::from(cfg);
}

struct WiredPair {
    LeftKeyPair left_keys;
    RightKeyPair right_keys;
    IdealLedger ledger;
    std::unique_ptr<HonestLeftSession> left;
    std::unique_ptr<HonestRightSession> right;
};

// Same key and session rng derivations as the honest baseline runner, but
// with the two machines exposed so tests can drive the wire by hand.
WiredPair wire_pair(const Env& env, uint64_t seed) {
    WiredPair p;
    Rng master(seed);
    Rng left_key_rng = master.child("keygen/left");
    Rng right_key_rng = master.child("keygen/right");
    p.left_keys = gen_left_key(env, left_key_rng);
    p.right_keys = gen_right_key(env.group, right_key_rng);
    p.left = std::make_unique<HonestLeftSession>(env, &p.ledger, p.left_keys,
                                                 right_pk_json(p.right_keys), 0, 1,
                                                 master.child("left", 0));
    p.right = std::make_unique<HonestRightSession>(env, &p.ledger, p.right_keys,
                                                   left_pk_json(p.left_keys), 0, 0,
                                                   master.child("right", 0));
    return p;
}

}  // namespace

TEST_CASE("honest players complete all five stages and agree") {
    Env env = small_env();
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        HonestRunResult h = run_honest_session(env, seed);
        CHECK(h.left_done);
        CHECK(h.right_done);
        CHECK(h.left_output == h.right_output);
        CHECK(h.left_output.size() == env.n);
        CHECK(h.ledger_entries == 2);  // one Stage-1 proof, one Stage-5 proof
    }
}

TEST_CASE("honest runs are seed-deterministic") {
    Env env = small_env();
    HonestRunResult a = run_honest_session(env, 7);
    HonestRunResult b = run_honest_session(env, 7);
    CHECK(a.left_output == b.left_output);
    CHECK(a.right_output == b.right_output);
    CHECK_FALSE(run_honest_session(env, 8).left_output == a.left_output);
}

TEST_CASE("session logs record direction, stage, and payload for every move") {
    Env env = small_env();
    WiredPair p = wire_pair(env, 3);
    std::vector<StageMsg> to_left = p.right->start();
    while (!to_left.empty()) {
        std::vector<StageMsg> to_right;
        for (const StageMsg& m : to_left)
            for (const StageMsg& r : p.left->on_message(m)) to_right.push_back(r);
        to_left.clear();
        for (const StageMsg& m : to_right)
            for (const StageMsg& r : p.right->on_message(m)) to_left.push_back(r);
    }
    CHECK(p.left->core().cursor == "Done");
    CHECK(p.right->core().cursor == "Done");

    // Left sees s1 in, s2 out, s3 in, s4 out, s5 out; right mirrors it.
    const std::vector<json>& log = p.left->core().log;
    REQUIRE(log.size() == 5);
    CHECK(log[0].at("dir") == "in");
    CHECK(log[0].at("stage") == "s1");
    CHECK(log[1].at("dir") == "out");
    CHECK(log[1].at("stage") == "s2");
    CHECK(log[2].at("stage") == "s3");
    CHECK(log[3].at("stage") == "s4");
    CHECK(log[4].at("stage") == "s5");
    CHECK(p.right->core().log.size() == 5);
    CHECK(p.right->core().log[0].at("dir") == "out");

    // Stage payload shapes on the wire.
    const json& s1 = log[0].at("payload");
    CHECK(s1.at("c_sk").size() == env.t());
    CHECK(s1.at("proof").contains("entry"));
    CHECK(BitString::parse_hex(log[1].at("payload").at("r_prime_l").get<std::string>()).size() ==
          env.d);
    CHECK(BitString::parse_hex(log[2].at("payload").at("r_r").get<std::string>()).size() == env.n);
    CHECK(BitString::parse_hex(log[3].at("payload").at("r").get<std::string>()).size() == env.n);
    const json& s5 = log[4].at("payload");
    CHECK(s5.at("c_crs").size() == env.n + env.n * env.n);
    CHECK(s5.at("proof").contains("entry"));

    // Both tags recorded: the right session's Stage-1 proof tag and the left
    // session's Stage-5 proof tag.
    CHECK(p.left->core().tag.has_value());
    CHECK(p.right->core().tag.has_value());
    CHECK(p.left->core().to_json().at("output").is_string());
}

TEST_CASE("garbage stage-1 aborts the left session with a survivor output") {
    Env env = small_env();
    WiredPair p = wire_pair(env, 4);
    std::vector<StageMsg> resp = p.left->on_message({"s1", json{{"junk", true}}});
    CHECK(resp.empty());
    CHECK(p.left->core().cursor == "Aborted");
    CHECK_FALSE(p.left->open());
    CHECK_FALSE(p.left->core().abort_reason.empty());
    // Abort is total: the survivor still outputs a value of the right shape.
    CHECK(p.left->core().has_output);
    CHECK(p.left->core().survivor_output);
    CHECK(p.left->core().output.size() == env.n);

    // Further messages to a dead session do nothing, and are not logged.
    CHECK(p.left->on_message({"s3", json::object()}).empty());
    CHECK(p.left->core().log.size() == 1);  // just the bad s1
}

TEST_CASE("stage-order violations abort instead of being reordered") {
    Env env = small_env();
    WiredPair p = wire_pair(env, 5);
    // The left machine waits at s1; an s3 is a protocol violation.
    std::vector<StageMsg> resp = p.left->on_message({"s3", json{{"r_r", "8:00"}}});
    CHECK(resp.empty());
    CHECK(p.left->core().cursor == "Aborted");
    CHECK(p.left->core().has_output);

    WiredPair q = wire_pair(env, 6);
    std::vector<StageMsg> s1 = q.right->start();
    REQUIRE(s1.size() == 1);
    // The right machine just sent s1 and waits at s2; feeding its own s1
    // back is a violation too.
    CHECK(q.right->on_message(s1[0]).empty());
    CHECK(q.right->core().cursor == "Aborted");
    CHECK(q.right->core().has_output);
    CHECK(q.right->core().survivor_output);
}

TEST_CASE("forced close aborts open sessions with the survivor value") {
    Env env = small_env();
    WiredPair p = wire_pair(env, 7);
    std::vector<StageMsg> s1 = p.right->start();
    REQUIRE(s1.size() == 1);
    (void)p.left->on_message(s1[0]);  // left is now mid-protocol

    p.left->close("experiment over");
    p.right->close("experiment over");
    CHECK(p.left->core().cursor == "Aborted");
    CHECK(p.right->core().cursor == "Aborted");
    CHECK(p.left->core().abort_reason == "experiment over");
    CHECK(p.left->core().has_output);
    CHECK(p.right->core().has_output);

    // Closing a finished session changes nothing.
    WiredPair done = wire_pair(env, 8);
    std::vector<StageMsg> to_left = done.right->start();
    while (!to_left.empty()) {
        std::vector<StageMsg> to_right;
        for (const StageMsg& m : to_left)
            for (const StageMsg& r : done.left->on_message(m)) to_right.push_back(r);
        to_left.clear();
        for (const StageMsg& m : to_right)
            for (const StageMsg& r : done.right->on_message(m)) to_left.push_back(r);
    }
    BitString out = done.left->core().output;
    done.left->close("late");
    CHECK(done.left->core().cursor == "Done");
    CHECK(done.left->core().output == out);
}

TEST_CASE("session machines replay identically from equal seeds") {
    Env env = small_env();
    WiredPair a = wire_pair(env, 9);

    // First pass: record every message crossing the wire.
    std::vector<StageMsg> inbound_left, inbound_right;
    std::vector<StageMsg> to_left = a.right->start();
    for (const StageMsg& m : to_left) inbound_left.push_back(m);
    while (!to_left.empty()) {
        std::vector<StageMsg> to_right;
        for (const StageMsg& m : to_left)
            for (const StageMsg& r : a.left->on_message(m)) {
                to_right.push_back(r);
                inbound_right.push_back(r);
            }
        to_left.clear();
        for (const StageMsg& m : to_right)
            for (const StageMsg& r : a.right->on_message(m)) {
                to_left.push_back(r);
                inbound_left.push_back(r);
            }
    }
    REQUIRE(a.left->core().cursor == "Done");

    // Second pass: fresh machines from the same seeds, fed the recorded
    // inbound traffic, produce byte-identical logs and outputs.
    WiredPair b = wire_pair(env, 9);
    std::vector<StageMsg> again = b.right->start();
    REQUIRE(again.size() == 1);
    CHECK(again[0].to_json() == inbound_left[0].to_json());
    for (const StageMsg& m : inbound_left)
        for (const StageMsg& r : b.left->on_message(m)) (void)r;
    for (const StageMsg& m : inbound_right)
        for (const StageMsg& r : b.right->on_message(m)) (void)r;

    CHECK(b.left->core().cursor == "Done");
    CHECK(b.right->core().cursor == "Done");
    CHECK(b.left->core().to_json() == a.left->core().to_json());
    CHECK(b.right->core().to_json() == a.right->core().to_json());
    CHECK(b.left->core().output == a.left->core().output);
}
