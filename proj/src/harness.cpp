#include "harness.hpp"

#include <stdexcept>

#include "adversaries.hpp"

namespace bpkcnm {

namespace {

const char* kind_name(AdversaryAction::Kind k) {
    switch (k) {
        case AdversaryAction::Kind::StartLeft: return "start-left";
        case AdversaryAction::Kind::StartRight: return "start-right";
        case AdversaryAction::Kind::DeliverLeft: return "deliver-left";
        case AdversaryAction::Kind::DeliverRight: return "deliver-right";
        case AdversaryAction::Kind::EndAttack: return "end-attack";
    }
    return "?";
}

}  // namespace

json AdversaryAction::to_json() const {
    json out{{"kind", kind_name(kind)}};
    if (kind == Kind::StartLeft || kind == Kind::StartRight) out["peer_key_id"] = peer_key_id;
    if (kind == Kind::DeliverLeft || kind == Kind::DeliverRight) {
        out["session"] = session;
        out["msg"] = msg.to_json();
    }
    return out;
}

AdversaryAction AdversaryAction::start_left(size_t peer_key_id) {
    AdversaryAction a;
    a.kind = Kind::StartLeft;
    a.peer_key_id = peer_key_id;
    return a;
}

AdversaryAction AdversaryAction::start_right(size_t peer_key_id) {
    AdversaryAction a;
    a.kind = Kind::StartRight;
    a.peer_key_id = peer_key_id;
    return a;
}

AdversaryAction AdversaryAction::deliver_left(size_t session, StageMsg msg) {
    AdversaryAction a;
    a.kind = Kind::DeliverLeft;
    a.session = session;
    a.msg = std::move(msg);
    return a;
}

AdversaryAction AdversaryAction::deliver_right(size_t session, StageMsg msg) {
    AdversaryAction a;
    a.kind = Kind::DeliverRight;
    a.session = session;
    a.msg = std::move(msg);
    return a;
}

AdversaryAction AdversaryAction::end_attack() { return AdversaryAction{}; }

uint64_t AdvCtx::prove(Tag tag, AokStatement stmt, AokWitness wit) {
    uint64_t id = ledger_->submit(env_, std::move(tag), std::move(stmt), std::move(wit), false);
    view_->push_back(json{{"type", "proof-entry"}, {"id", id}});
    return id;
}

bool AdvCtx::check(uint64_t entry, const Tag& tag, const std::string& stmt_canon) const {
    return ledger_->check_proof(entry, tag, stmt_canon);
}

json ExperimentTrace::to_json() const {
    return json{{"public_file", public_file},
                {"left_sessions", left_sessions},
                {"right_sessions", right_sessions},
                {"view", view},
                {"actions", actions},
                {"illegal", illegal},
                {"budget_exhausted", budget_exhausted},
                {"attack_ended", attack_ended},
                {"ledger", ledger_public}};
}

ExperimentTrace run_loop(LoopParams& p) {
    const Env& env = *p.env;
    const Config& cfg = *p.cfg;
    ExperimentTrace trace;
    trace.public_file = p.file->to_json();

    std::vector<std::unique_ptr<LeftSessionBase>> lefts;
    std::vector<std::unique_ptr<RightSessionBase>> rights;
    std::vector<json> view;

    json init{{"type", "init"},
              {"n", env.n},
              {"s", cfg.s},
              {"left_pk", p.file->at(0).key},
              {"right_pk", p.file->at(1).key},
              {"file", trace.public_file}};
    for (auto& [k, v] : p.init_extra.items()) init[k] = v;
    view.push_back(init);

    AdvCtx ctx(env, p.file, p.ledger, p.adv_rng, &view);

    auto push_msgs = [&](const char* side, size_t index, const std::vector<StageMsg>& msgs,
                         bool was_open, const RightSessionBase* r, const LeftSessionBase* l) {
        for (const StageMsg& m : msgs) {
            view.push_back(json{{"type", "msg"}, {"side", side}, {"session", index},
                                {"msg", m.to_json()}});
        }
        bool now_open = r ? r->open() : l->open();
        if (was_open && !now_open) {
            view.push_back(json{{"type", "closed"}, {"side", side}, {"session", index}});
        }
    };

    auto illegal = [&](const AdversaryAction& a, const std::string& why) {
        json rec{{"action", a.to_json()}, {"why", why}};
        trace.illegal.push_back(rec);
        view.push_back(json{{"type", "illegal"}, {"why", why}});
    };

    size_t steps = 0;
    while (true) {
        if (steps++ >= cfg.action_budget) {
            trace.budget_exhausted = true;
            break;
        }
        AdversaryAction a = p.adversary->next_action(ctx);
        trace.actions.push_back(a.to_json());

        if (a.kind == AdversaryAction::Kind::EndAttack) {
            trace.attack_ended = true;
            break;
        }
        switch (a.kind) {
            case AdversaryAction::Kind::StartLeft: {
                if (lefts.size() >= cfg.s) {
                    illegal(a, "left session bound reached");
                    break;
                }
                if (a.peer_key_id >= p.file->size()) {
                    illegal(a, "no such public file entry");
                    break;
                }
                size_t index = lefts.size();
                lefts.push_back(p.make_left(index, a.peer_key_id, p.file->at(a.peer_key_id).key,
                                            p.session_rng_root.child("left", index)));
                view.push_back(json{{"type", "session-started"}, {"side", "left"},
                                    {"session", index}, {"peer_key_id", a.peer_key_id}});
                // A session whose peer key is unusable dies on first contact,
                // not here: starting it is always legal.
                break;
            }
            case AdversaryAction::Kind::StartRight: {
                if (rights.size() >= cfg.s) {
                    illegal(a, "right session bound reached");
                    break;
                }
                if (a.peer_key_id >= p.file->size()) {
                    illegal(a, "no such public file entry");
                    break;
                }
                size_t index = rights.size();
                rights.push_back(p.make_right(index, a.peer_key_id, p.file->at(a.peer_key_id).key,
                                              p.session_rng_root.child("right", index)));
                view.push_back(json{{"type", "session-started"}, {"side", "right"},
                                    {"session", index}, {"peer_key_id", a.peer_key_id}});
                std::vector<StageMsg> msgs = rights[index]->start();
                push_msgs("right", index, msgs, true, rights[index].get(), nullptr);
                break;
            }
            case AdversaryAction::Kind::DeliverLeft: {
                if (a.session >= lefts.size()) {
                    illegal(a, "no such left session");
                    break;
                }
                if (!lefts[a.session]->open()) {
                    illegal(a, "left session already closed");
                    break;
                }
                std::vector<StageMsg> msgs = lefts[a.session]->on_message(a.msg);
                push_msgs("left", a.session, msgs, true, nullptr, lefts[a.session].get());
                break;
            }
            case AdversaryAction::Kind::DeliverRight: {
                if (a.session >= rights.size()) {
                    illegal(a, "no such right session");
                    break;
                }
                if (!rights[a.session]->open()) {
                    illegal(a, "right session already closed");
                    break;
                }
                std::vector<StageMsg> msgs = rights[a.session]->on_message(a.msg);
                push_msgs("right", a.session, msgs, true, rights[a.session].get(), nullptr);
                break;
            }
            case AdversaryAction::Kind::EndAttack:
                break;
        }
        if (p.stop_requested && p.stop_requested()) break;
    }

    for (auto& l : lefts) l->close("experiment ended");
    for (auto& r : rights) r->close("experiment ended");

    for (auto& l : lefts) {
        trace.left_sessions.push_back(l->core().to_json());
        ExperimentTrace::Out o;
        o.index = l->core().index;
        o.peer_key_id = l->core().peer_key_id;
        o.done = l->core().cursor == "Done";
        o.survivor = l->core().survivor_output;
        o.output = l->core().output;
        o.tag = l->core().tag;
        trace.left_out.push_back(std::move(o));
    }
    for (auto& r : rights) {
        trace.right_sessions.push_back(r->core().to_json());
        ExperimentTrace::Out o;
        o.index = r->core().index;
        o.peer_key_id = r->core().peer_key_id;
        o.done = r->core().cursor == "Done";
        o.survivor = r->core().survivor_output;
        o.output = r->core().output;
        o.tag = r->core().tag;
        trace.right_out.push_back(std::move(o));
    }
    trace.view = std::move(view);
    trace.ledger_public = p.ledger->dump();
    return trace;
}

ExperimentResult run_experiment(const Config& cfg, Adversary* adversary_override) {
    Env env = Env::from(cfg);
    Rng master(cfg.seed);

    Rng left_key_rng = master.child("keygen/left");
    Rng right_key_rng = master.child("keygen/right");
    LeftKeyPair left_keys = gen_left_key(env, left_key_rng);
    RightKeyPair right_keys = gen_right_key(env.group, right_key_rng);
    json left_pk = left_pk_json(left_keys);
    json right_pk = right_pk_json(right_keys);

    std::unique_ptr<Adversary> owned;
    Adversary* adv = adversary_override;
    if (!adv) {
        owned = make_adversary(cfg);
        adv = owned.get();
    }

    IdealLedger ledger;
    std::vector<json> reg_view;
    reg_view.push_back(json{{"type", "register"}, {"n", env.n}, {"s", cfg.s},
                            {"left_pk", left_pk}, {"right_pk", right_pk}});
    Rng reg_rng = master.child("adv/register");
    AdvCtx reg_ctx(env, nullptr, &ledger, &reg_rng, &reg_view);
    std::vector<json> adv_keys = adv->register_keys(reg_ctx);
    PublicFile file = PublicFile::build(left_pk, right_pk, adv_keys, cfg.s);

    Rng adv_rng = master.child("adv/session");
    LoopParams p;
    p.env = &env;
    p.cfg = &cfg;
    p.file = &file;
    p.ledger = &ledger;
    p.adversary = adv;
    p.adv_rng = &adv_rng;
    p.session_rng_root = master;
    if (!cfg.aux.empty()) p.init_extra["aux"] = cfg.aux;
    p.make_left = [&](size_t index, size_t peer_key_id, const json& peer_key, Rng rng) {
        return std::make_unique<HonestLeftSession>(env, &ledger, left_keys, peer_key, index,
                                                   peer_key_id, rng);
    };
    p.make_right = [&](size_t index, size_t peer_key_id, const json& claimed_key, Rng rng) {
        (void)peer_key_id;
        auto s = std::make_unique<HonestRightSession>(env, &ledger, right_keys, claimed_key,
                                                      index, peer_key_id, rng);
        return s;
    };

    ExperimentResult out{run_loop(p), left_keys, right_keys};
    return out;
}

}  // namespace bpkcnm
