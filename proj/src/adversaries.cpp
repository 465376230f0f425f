#include "adversaries.hpp"

#include <stdexcept>

#include "serialize.hpp"

namespace bpkcnm {

namespace {

size_t session_bound(const AdvCtx& ctx) {
    return ctx.view().at(0).at("s").get<size_t>();
}

StageMsg msg_of(const json& ev) {
    return StageMsg{ev.at("msg").at("stage").get<std::string>(), ev.at("msg").at("payload")};
}

SubmitFn oracle_submit(AdvCtx& ctx) {
    return [&ctx](Tag tag, AokStatement stmt, AokWitness wit) {
        return ctx.prove(std::move(tag), std::move(stmt), std::move(wit));
    };
}

}  // namespace

AdversaryAction NullAdversary::next_action(AdvCtx&) { return AdversaryAction::end_attack(); }

AdversaryAction RelayAdversary::next_action(AdvCtx& ctx) {
    size_t s = session_bound(ctx);
    if (started_left_ < s) {
        ++started_left_;
        return AdversaryAction::start_left(1);
    }
    if (started_right_ < s) {
        ++started_right_;
        return AdversaryAction::start_right(0);
    }
    const std::vector<json>& view = ctx.view();
    while (scanned_ < view.size()) {
        const json& ev = view[scanned_++];
        if (ev.at("type") != "msg") continue;
        size_t session = ev.at("session").get<size_t>();
        // Right-session traffic goes to the left session with the same
        // index and vice versa.
        if (ev.at("side") == "right") return AdversaryAction::deliver_left(session, msg_of(ev));
        return AdversaryAction::deliver_right(session, msg_of(ev));
    }
    return AdversaryAction::end_attack();
}

std::vector<json> IndependentAdversary::register_keys(AdvCtx& ctx) {
    right_key_ = gen_right_key(ctx.env().group, ctx.rng());
    left_key_ = gen_left_key(ctx.env(), ctx.rng());
    return {right_pk_json(right_key_), left_pk_json(left_key_)};
}

void IndependentAdversary::scan(AdvCtx& ctx) {
    const Env& env = ctx.env();
    const std::vector<json>& view = ctx.view();
    while (scanned_ < view.size()) {
        const json& ev = view[scanned_++];
        const std::string type = ev.at("type").get<std::string>();
        if (type == "session-started" && ev.at("side") == "left") {
            // Play the right role against the honest left player.
            size_t i = ev.at("session").get<size_t>();
            auto own_left_view = parse_left_pk(env, ctx.file().at(0).key);
            json payload = build_stage1_payload(env, oracle_submit(ctx), *own_left_view,
                                                key_canon(ctx.file().at(0).key), right_key_,
                                                ctx.rng());
            pending_.push_back(AdversaryAction::deliver_left(i, StageMsg{"s1", payload}));
        } else if (type == "msg" && ev.at("side") == "left") {
            size_t i = ev.at("session").get<size_t>();
            StageMsg m = msg_of(ev);
            if (m.stage == "s2") {
                BitString r_r = ctx.rng().bits(env.n);
                pending_.push_back(AdversaryAction::deliver_left(
                    i, StageMsg{"s3", json{{"r_r", r_r.to_hex()}}}));
            }
            // s4/s5 from the honest left player end that session; nothing to do.
        } else if (type == "msg" && ev.at("side") == "right") {
            size_t i = ev.at("session").get<size_t>();
            StageMsg m = msg_of(ev);
            if (m.stage == "s1") {
                // Play the left role with the registered left key.
                if (r_prime_sent_.size() <= i) r_prime_sent_.resize(i + 1);
                r_prime_sent_[i] = ctx.rng().bits(env.d);
                pending_.push_back(AdversaryAction::deliver_right(
                    i, StageMsg{"s2", json{{"r_prime_l", r_prime_sent_[i].to_hex()}}}));
            } else if (m.stage == "s3") {
                BitString r_r = BitString::parse_hex(m.payload.at("r_r").get<std::string>());
                BitString r = env.prf_eval(left_key_.sigma, r_prime_sent_.at(i)).xored(r_r);
                auto honest_right = parse_right_pk(env.group, ctx.file().at(1).key);
                json s5 = build_stage5_payload_seed_branch(
                    env, oracle_submit(ctx), left_key_, key_canon(ctx.file().at(left_key_id_).key),
                    *honest_right, r_prime_sent_.at(i), r_r, r, ctx.rng());
                pending_.push_back(AdversaryAction::deliver_right(
                    i, StageMsg{"s4", json{{"r", r.to_hex()}}}));
                pending_.push_back(AdversaryAction::deliver_right(i, StageMsg{"s5", s5}));
            }
        }
    }
}

AdversaryAction IndependentAdversary::next_action(AdvCtx& ctx) {
    if (right_key_id_ == 0) {
        // Registered keys follow the two honest entries, in registration order.
        right_key_id_ = 2;
        left_key_id_ = 3;
    }
    size_t s = session_bound(ctx);
    if (started_left_ < s) {
        ++started_left_;
        return AdversaryAction::start_left(right_key_id_);
    }
    if (started_right_ < s) {
        ++started_right_;
        return AdversaryAction::start_right(left_key_id_);
    }
    scan(ctx);
    if (!pending_.empty()) {
        AdversaryAction a = pending_.front();
        pending_.pop_front();
        return a;
    }
    return AdversaryAction::end_attack();
}

std::vector<json> Stage1ProberAdversary::register_keys(AdvCtx& ctx) {
    key_ = gen_right_key(ctx.env().group, ctx.rng());
    return {right_pk_json(key_)};
}

AdversaryAction Stage1ProberAdversary::next_action(AdvCtx& ctx) {
    if (key_id_ == 0) key_id_ = 2;
    if (step_ == 0) {
        ++step_;
        return AdversaryAction::start_left(key_id_);
    }
    if (step_ == 1) {
        ++step_;
        auto own_left_view = parse_left_pk(ctx.env(), ctx.file().at(0).key);
        json payload = build_stage1_payload(ctx.env(), oracle_submit(ctx), *own_left_view,
                                            key_canon(ctx.file().at(0).key), key_, ctx.rng());
        return AdversaryAction::deliver_left(0, StageMsg{"s1", payload});
    }
    return AdversaryAction::end_attack();
}

std::unique_ptr<Adversary> make_adversary(const Config& cfg) {
    std::string id = cfg.adversary;
    if (id.rfind("scripted:", 0) == 0) {
        std::string path = cfg.adversary_script.empty() ? id.substr(9) : cfg.adversary_script;
        json j;
        try {
            j = json::parse(read_text_file(path));
        } catch (const std::exception& ex) {
            throw ConfigError(std::string("cannot load adversary script: ") + ex.what());
        }
        id = j.value("base", "");
    }
    if (id == "null") return std::make_unique<NullAdversary>();
    if (id == "relay") return std::make_unique<RelayAdversary>();
    if (id == "independent") return std::make_unique<IndependentAdversary>();
    if (id == "stage1-prober") return std::make_unique<Stage1ProberAdversary>();
    if (id == "interleaver") {
        throw ConfigError("the interleaver runs only under the attack command");
    }
    throw ConfigError("unknown adversary: " + id);
}

}  // namespace bpkcnm
