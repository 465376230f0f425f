#include "cointoss.hpp"

#include <stdexcept>

namespace bpkcnm {

json SessionCore::to_json() const {
    json out{{"index", index},
             {"peer_key_id", peer_key_id},
             {"cursor", cursor},
             {"log", log},
             {"abort_reason", abort_reason},
             {"survivor_output", survivor_output}};
    out["output"] = has_output ? json(output.to_hex()) : json(nullptr);
    out["tag"] = tag ? json(tag->hex()) : json(nullptr);
    return out;
}

namespace {

BitString parse_bits(const json& payload, const char* key, size_t expected_len) {
    BitString v = BitString::parse_hex(payload.at(key).get<std::string>());
    if (v.size() != expected_len) throw std::runtime_error(std::string(key) + " has wrong length");
    return v;
}

std::vector<BitString> parse_values(const Env& env, const json& payload, const char* key,
                                    size_t count) {
    std::vector<BitString> out;
    for (const auto& v : payload.at(key)) {
        BitString b = BitString::parse_hex(v.get<std::string>());
        if (b.size() != 3 * env.n) throw std::runtime_error("malformed commitment value");
        out.push_back(b);
    }
    if (out.size() != count) throw std::runtime_error(std::string(key) + " has wrong count");
    return out;
}

uint64_t parse_entry(const json& payload) {
    return payload.at("proof").at("entry").get<uint64_t>();
}

json log_rec(const char* dir, const StageMsg& msg) {
    return json{{"dir", dir}, {"stage", msg.stage}, {"payload", msg.payload}};
}

}  // namespace

json build_stage1_payload(const Env& env, const SubmitFn& submit, const ParsedLeftPk& left_pk,
                          const std::string& left_pk_canon, const RightKeyPair& kp, Rng& rng) {
    size_t t = env.t();
    BitString sk_bits = bigint_to_bits(kp.sk, t);
    SkStatement stmt;
    stmt.y0 = kp.y0;
    stmt.y1 = kp.y1;
    stmt.receiver = left_pk.receiver;
    SkWitness wit;
    wit.sk = kp.sk;
    for (size_t i = 0; i < t; ++i) {
        BitString seed = rng.bits(env.n);
        wit.seeds.push_back(seed);
        stmt.c_sk.push_back(naor_commit(env, sk_bits.bit(i), seed, left_pk.receiver).value);
    }
    Tag tag = right_session_tag(env, left_pk_canon, key_canon(right_pk_json(kp)));
    uint64_t id = submit(tag, aok_stmt_sk(stmt), aok_wit_sk(wit));
    json values = json::array();
    for (const BitString& v : stmt.c_sk) values.push_back(v.to_hex());
    return json{{"c_sk", values}, {"proof", {{"entry", id}}}};
}

json build_stage1_payload(const Env& env, IdealLedger& ledger, const ParsedLeftPk& left_pk,
                          const std::string& left_pk_canon, const RightKeyPair& kp, Rng& rng,
                          bool honest_origin) {
    SubmitFn submit = [&](Tag tag, AokStatement stmt, AokWitness wit) {
        return ledger.submit(env, std::move(tag), std::move(stmt), std::move(wit), honest_origin);
    };
    return build_stage1_payload(env, submit, left_pk, left_pk_canon, kp, rng);
}

json build_stage5_payload_seed_branch(const Env& env, const SubmitFn& submit,
                                      const LeftKeyPair& keys, const std::string& left_pk_canon,
                                      const ParsedRightPk& peer, const BitString& r_prime_l,
                                      const BitString& r_r, const BitString& r, Rng& rng) {
    BitString payload = keys.sigma;
    for (const BitString& s : keys.seeds) payload = payload.concat(s);

    CrsStatement stmt;
    stmt.receiver = keys.receiver;
    stmt.pk_l_values = keys.pk_values;
    stmt.r_prime_l = r_prime_l;
    stmt.r_r = r_r;
    stmt.r = r;
    stmt.y0 = peer.y0;
    stmt.y1 = peer.y1;

    CrsWitness wit;
    wit.key_branch = false;
    wit.sigma = keys.sigma;
    wit.pk_seeds = keys.seeds;
    wit.payload = payload;
    for (size_t i = 0; i < payload.size(); ++i) {
        BitString seed = rng.bits(env.n);
        wit.crs_seeds.push_back(seed);
        stmt.c_crs.push_back(naor_commit(env, payload.bit(i), seed, keys.receiver).value);
    }

    Tag tag = left_session_tag(env, left_pk_canon, r_r, r);
    uint64_t id = submit(tag, aok_stmt_crs(stmt), aok_wit_crs(wit));
    json values = json::array();
    for (const BitString& v : stmt.c_crs) values.push_back(v.to_hex());
    return json{{"c_crs", values}, {"proof", {{"entry", id}}}};
}

json build_stage5_payload_seed_branch(const Env& env, IdealLedger& ledger,
                                      const LeftKeyPair& keys, const std::string& left_pk_canon,
                                      const ParsedRightPk& peer, const BitString& r_prime_l,
                                      const BitString& r_r, const BitString& r, Rng& rng,
                                      bool honest_origin) {
    SubmitFn submit = [&](Tag tag, AokStatement stmt, AokWitness wit) {
        return ledger.submit(env, std::move(tag), std::move(stmt), std::move(wit), honest_origin);
    };
    return build_stage5_payload_seed_branch(env, submit, keys, left_pk_canon, peer, r_prime_l,
                                            r_r, r, rng);
}

// ------------------------------------------------------------ left side ----

LeftSessionBase::LeftSessionBase(const Env& env, IdealLedger* ledger, ParsedLeftPk own_pk,
                                 std::string own_pk_canon, json peer_key, size_t index,
                                 size_t peer_key_id, Rng rng)
    : env_(env),
      ledger_(ledger),
      own_pk_(std::move(own_pk)),
      own_pk_canon_(std::move(own_pk_canon)),
      peer_key_(std::move(peer_key)),
      peer_(parse_right_pk(env.group, peer_key_)),
      rng_(rng) {
    core_.index = index;
    core_.peer_key_id = peer_key_id;
    core_.cursor = "S1";
}

void LeftSessionBase::abort_session(const std::string& reason) {
    core_.cursor = "Aborted";
    core_.abort_reason = reason;
    core_.output = survivor_value();
    core_.has_output = true;
    core_.survivor_output = true;
}

void LeftSessionBase::close(const std::string& reason) {
    if (open()) abort_session(reason);
}

std::vector<StageMsg> LeftSessionBase::on_message(const StageMsg& msg) {
    if (!open()) return {};
    core_.log.push_back(log_rec("in", msg));
    std::vector<StageMsg> out;
    try {
        if (core_.cursor == "S1" && msg.stage == "s1") {
            if (!peer_) throw std::runtime_error("peer key is not a usable right key");
            std::vector<BitString> values = parse_values(env_, msg.payload, "c_sk", env_.t());
            SkStatement stmt;
            stmt.y0 = peer_->y0;
            stmt.y1 = peer_->y1;
            stmt.receiver = own_pk_.receiver;
            stmt.c_sk = values;
            Tag expect = right_session_tag(env_, own_pk_canon_, key_canon(peer_key_));
            std::string why;
            uint64_t entry = parse_entry(msg.payload);
            if (!ledger_->check_proof(entry, expect, aok_stmt_canon(aok_stmt_sk(stmt)), &why)) {
                throw std::runtime_error("committed-key proof rejected: " + why);
            }
            stage1_entry_ = entry;
            on_stage1_accepted();
            r_prime_l_ = rng_.bits(env_.d);
            core_.cursor = "S3";
            out.push_back(StageMsg{"s2", json{{"r_prime_l", r_prime_l_.to_hex()}}});
        } else if (core_.cursor == "S3" && msg.stage == "s3") {
            BitString r_r = parse_bits(msg.payload, "r_r", env_.n);
            BitString r = stage4_value(r_prime_l_, r_r);
            json s5 = stage5_payload(r_prime_l_, r_r, r);
            core_.tag = left_session_tag(env_, own_pk_canon_, r_r, r);
            core_.cursor = "Done";
            core_.output = r;
            core_.has_output = true;
            out.push_back(StageMsg{"s4", json{{"r", r.to_hex()}}});
            out.push_back(StageMsg{"s5", s5});
        } else {
            throw std::runtime_error("unexpected stage " + msg.stage + " at " + core_.cursor);
        }
    } catch (const std::exception& ex) {
        abort_session(ex.what());
        return {};
    }
    for (const StageMsg& m : out) core_.log.push_back(log_rec("out", m));
    return out;
}

HonestLeftSession::HonestLeftSession(const Env& env, IdealLedger* ledger, const LeftKeyPair& keys,
                                     json peer_key, size_t index, size_t peer_key_id, Rng rng)
    : LeftSessionBase(env, ledger, ParsedLeftPk{keys.pk_values, keys.receiver},
                      key_canon(left_pk_json(keys)), std::move(peer_key), index, peer_key_id, rng),
      keys_(keys) {}

BitString HonestLeftSession::stage4_value(const BitString& r_prime_l, const BitString& r_r) {
    return env_.prf_eval(keys_.sigma, r_prime_l).xored(r_r);
}

json HonestLeftSession::stage5_payload(const BitString& r_prime_l, const BitString& r_r,
                                       const BitString& r) {
    return build_stage5_payload_seed_branch(env_, *ledger_, keys_, own_pk_canon_, *peer_,
                                            r_prime_l, r_r, r, rng_, true);
}

BitString HonestLeftSession::survivor_value() { return rng_.bits(env_.n); }

// ----------------------------------------------------------- right side ----

RightSessionBase::RightSessionBase(const Env& env, IdealLedger* ledger, const RightKeyPair& keys,
                                   json claimed_left_key, size_t index, size_t peer_key_id,
                                   Rng rng)
    : env_(env),
      ledger_(ledger),
      keys_(keys),
      claimed_left_key_(std::move(claimed_left_key)),
      peer_(parse_left_pk(env, claimed_left_key_)),
      peer_canon_(key_canon(claimed_left_key_)),
      rng_(rng) {
    core_.index = index;
    core_.peer_key_id = peer_key_id;
    core_.cursor = "S1";
}

void RightSessionBase::abort_session(const std::string& reason) {
    core_.cursor = "Aborted";
    core_.abort_reason = reason;
    core_.output = survivor_value();
    core_.has_output = true;
    core_.survivor_output = true;
}

void RightSessionBase::close(const std::string& reason) {
    if (open()) abort_session(reason);
}

std::vector<StageMsg> RightSessionBase::start() {
    std::vector<StageMsg> out;
    try {
        if (!peer_) throw std::runtime_error("peer key is not a usable left key");
        json payload =
            build_stage1_payload(env_, *ledger_, *peer_, peer_canon_, keys_, rng_, honest_origin());
        core_.tag = right_session_tag(env_, peer_canon_, key_canon(right_pk_json(keys_)));
        core_.cursor = "S2";
        out.push_back(StageMsg{"s1", payload});
    } catch (const std::exception& ex) {
        abort_session(ex.what());
        return {};
    }
    for (const StageMsg& m : out) core_.log.push_back(log_rec("out", m));
    return out;
}

std::vector<StageMsg> RightSessionBase::on_message(const StageMsg& msg) {
    if (!open()) return {};
    core_.log.push_back(log_rec("in", msg));
    std::vector<StageMsg> out;
    try {
        if (core_.cursor == "S2" && msg.stage == "s2") {
            r_prime_l_ = parse_bits(msg.payload, "r_prime_l", env_.d);
            r_r_ = stage3_value(r_prime_l_);
            core_.cursor = "S4";
            out.push_back(StageMsg{"s3", json{{"r_r", r_r_.to_hex()}}});
        } else if (core_.cursor == "S4" && msg.stage == "s4") {
            r_tilde_ = parse_bits(msg.payload, "r", env_.n);
            core_.cursor = "S5";
        } else if (core_.cursor == "S5" && msg.stage == "s5") {
            size_t count = env_.n + env_.n * env_.n;
            std::vector<BitString> values = parse_values(env_, msg.payload, "c_crs", count);
            CrsStatement stmt;
            stmt.receiver = peer_->receiver;
            stmt.pk_l_values = peer_->values;
            stmt.r_prime_l = r_prime_l_;
            stmt.r_r = r_r_;
            stmt.r = r_tilde_;
            stmt.y0 = keys_.y0;
            stmt.y1 = keys_.y1;
            stmt.c_crs = values;
            Tag expect = left_session_tag(env_, peer_canon_, r_r_, r_tilde_);
            std::string why;
            uint64_t entry = parse_entry(msg.payload);
            if (!ledger_->check_proof(entry, expect, aok_stmt_canon(aok_stmt_crs(stmt)), &why)) {
                throw std::runtime_error("outcome proof rejected: " + why);
            }
            stage5_entry_ = entry;
            core_.cursor = "Done";
            core_.output = r_tilde_;
            core_.has_output = true;
            on_accept();
        } else {
            throw std::runtime_error("unexpected stage " + msg.stage + " at " + core_.cursor);
        }
    } catch (const std::exception& ex) {
        abort_session(ex.what());
        return {};
    }
    for (const StageMsg& m : out) core_.log.push_back(log_rec("out", m));
    return out;
}

BitString HonestRightSession::stage3_value(const BitString&) { return rng_.bits(env_.n); }

BitString HonestRightSession::survivor_value() { return rng_.bits(env_.n); }

// ------------------------------------------------------------ honest run ----

HonestRunResult run_honest_session(const Env& env, uint64_t seed) {
    Rng master(seed);
    Rng left_key_rng = master.child("keygen/left");
    Rng right_key_rng = master.child("keygen/right");
    LeftKeyPair left_keys = gen_left_key(env, left_key_rng);
    RightKeyPair right_keys = gen_right_key(env.group, right_key_rng);

    IdealLedger ledger;
    HonestLeftSession left(env, &ledger, left_keys, right_pk_json(right_keys), 0, 1,
                           master.child("left", 0));
    HonestRightSession right(env, &ledger, right_keys, left_pk_json(left_keys), 0, 0,
                             master.child("right", 0));

    std::vector<StageMsg> to_left = right.start();
    while (!to_left.empty()) {
        std::vector<StageMsg> to_right;
        for (const StageMsg& m : to_left) {
            std::vector<StageMsg> resp = left.on_message(m);
            to_right.insert(to_right.end(), resp.begin(), resp.end());
        }
        to_left.clear();
        for (const StageMsg& m : to_right) {
            std::vector<StageMsg> resp = right.on_message(m);
            to_left.insert(to_left.end(), resp.begin(), resp.end());
        }
    }

    HonestRunResult out;
    out.left_done = left.core().cursor == "Done";
    out.right_done = right.core().cursor == "Done";
    if (left.core().has_output) out.left_output = left.core().output;
    if (right.core().has_output) out.right_output = right.core().output;
    out.ledger_entries = ledger.size();
    return out;
}

}  // namespace bpkcnm
