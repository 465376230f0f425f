#include "simulator.hpp"

#include <stdexcept>

#include "prg.hpp"
#include "serialize.hpp"

namespace bpkcnm {

CrsDraw m_crs_sample(const Env& env, CrsVariant variant, Rng& rng) {
    CrsDraw d;
    switch (variant) {
        case CrsVariant::Identity:
            d.value = rng.bits(env.n);
            d.trapdoor = d.value;
            break;
        case CrsVariant::PrgSeed:
            d.trapdoor = rng.bits(env.n);
            d.value = env.prg_expand(d.trapdoor, env.n);
            break;
    }
    return d;
}

bool r_crs_holds(const Env& env, CrsVariant variant, const CrsDraw& d) {
    try {
        switch (variant) {
            case CrsVariant::Identity:
                return d.value.size() == env.n && d.trapdoor == d.value;
            case CrsVariant::PrgSeed:
                return d.value.size() == env.n && env.prg_expand(d.trapdoor, env.n) == d.value;
        }
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

SimKeyTriple sim_gen_right_triple(const GroupParams& group, Rng& master) {
    // Mirror honest right-key generation draw for draw so (pk, sk) has the
    // exact real-experiment distribution, then pick an independent side for
    // the spare secret key from a separate substream.
    Rng key_rng = master.child("keygen/right");
    bigint s0 = group.random_exponent(key_rng);
    bigint s1 = group.random_exponent(key_rng);
    int side = static_cast<int>(key_rng.below(2));

    Rng spare_rng = master.child("keygen/spare-side");
    int side_prime = static_cast<int>(spare_rng.below(2));

    SimKeyTriple out;
    out.kp.y0 = group.owf_eval(s0);
    out.kp.y1 = group.owf_eval(s1);
    out.kp.sk = side == 0 ? s0 : s1;
    out.kp.side = side;
    out.sk_prime = side_prime == 0 ? s0 : s1;
    out.side_prime = side_prime;
    return out;
}

namespace {

// What the simulator has learned about a registered key.
struct CoveredKey {
    bool left_kind = false;
    BitString sigma;  // left kind: the PRF seed
    bigint sk = 0;    // right kind: the exponent
};

using CoveredMap = std::map<std::string, CoveredKey>;

// Per-repetition state shared by all simulated sessions.
struct SimShared {
    const Env* env = nullptr;
    CrsVariant variant = CrsVariant::Identity;
    const CoveredMap* covered = nullptr;
    std::string honest_left_canon;
    Rng draw_rng{0};
    std::vector<std::optional<CrsDraw>> left_draws;
    std::vector<std::optional<CrsDraw>> right_draws;

    struct Trigger {
        bool extracts_left_key = false;  // finished right session vs left-session Stage-1
        std::string canon;
        uint64_t entry = 0;
        size_t session = 0;
        std::string side;
    };
    std::optional<Trigger> trigger;

    const CoveredKey* lookup(const std::string& canon) const {
        auto it = covered->find(canon);
        return it == covered->end() ? nullptr : &it->second;
    }
    CrsDraw& left_draw(size_t i) {
        if (left_draws.size() <= i) left_draws.resize(i + 1);
        if (!left_draws[i]) left_draws[i] = m_crs_sample(*env, variant, draw_rng);
        return *left_draws[i];
    }
    CrsDraw& right_draw(size_t i) {
        if (right_draws.size() <= i) right_draws.resize(i + 1);
        if (!right_draws[i]) right_draws[i] = m_crs_sample(*env, variant, draw_rng);
        return *right_draws[i];
    }
};

class SimLeftSession : public LeftSessionBase {
public:
    SimLeftSession(const Env& env, IdealLedger* ledger, ParsedLeftPk own_pk,
                   std::string own_pk_canon, json peer_key, size_t index, size_t peer_key_id,
                   Rng rng, SimShared* shared)
        : LeftSessionBase(env, ledger, std::move(own_pk), std::move(own_pk_canon),
                          std::move(peer_key), index, peer_key_id, rng),
          shared_(shared) {}

protected:
    void on_stage1_accepted() override {
        std::string canon = key_canon(peer_key_);
        if (!shared_->lookup(canon)) {
            // Uncovered right-type key: stop this repetition and extract it.
            shared_->trigger = SimShared::Trigger{false, canon, stage1_entry_, core_.index,
                                                 "left"};
        }
    }

    BitString stage4_value(const BitString&, const BitString&) override {
        return shared_->left_draw(core_.index).value;
    }

    json stage5_payload(const BitString& r_prime_l, const BitString& r_r,
                        const BitString& r) override {
        const CoveredKey* ck = shared_->lookup(key_canon(peer_key_));
        if (!ck || ck->left_kind) {
            throw std::logic_error("stage 5 reached with an uncovered peer key");
        }
        size_t t = env_.t();
        size_t payload_len = env_.n + env_.n * env_.n;
        BitString payload = bigint_to_bits(ck->sk, t).concat(BitString::zeros(payload_len - t));

        CrsStatement stmt;
        stmt.receiver = own_pk_.receiver;
        stmt.pk_l_values = own_pk_.values;
        stmt.r_prime_l = r_prime_l;
        stmt.r_r = r_r;
        stmt.r = r;
        stmt.y0 = peer_->y0;
        stmt.y1 = peer_->y1;

        CrsWitness wit;
        wit.key_branch = true;
        wit.payload = payload;
        for (size_t i = 0; i < payload.size(); ++i) {
            BitString seed = rng_.bits(env_.n);
            wit.crs_seeds.push_back(seed);
            stmt.c_crs.push_back(naor_commit(env_, payload.bit(i), seed, own_pk_.receiver).value);
        }
        Tag tag = left_session_tag(env_, own_pk_canon_, r_r, r);
        uint64_t id =
            ledger_->submit(env_, tag, aok_stmt_crs(stmt), aok_wit_crs(wit), true);
        json values = json::array();
        for (const BitString& v : stmt.c_crs) values.push_back(v.to_hex());
        return json{{"c_crs", values}, {"proof", {{"entry", id}}}};
    }

    BitString survivor_value() override { return shared_->left_draw(core_.index).value; }

private:
    SimShared* shared_;
};

class SimRightSession : public RightSessionBase {
public:
    SimRightSession(const Env& env, IdealLedger* ledger, const RightKeyPair& keys,
                    json claimed_left_key, size_t index, size_t peer_key_id, Rng rng,
                    SimShared* shared)
        : RightSessionBase(env, ledger, keys, std::move(claimed_left_key), index, peer_key_id,
                           rng),
          shared_(shared) {}

protected:
    BitString stage3_value(const BitString& r_prime_l) override {
        const CoveredKey* ck = shared_->lookup(peer_canon_);
        if (ck && ck->left_kind) {
            // Covered peer: steer Stage-3 so that a by-the-book counterpart
            // lands exactly on the predefined draw.
            const CrsDraw& d = shared_->right_draw(core_.index);
            return env_.prf_eval(ck->sigma, r_prime_l).xored(d.value);
        }
        return rng_.bits(env_.n);
    }

    void on_accept() override {
        if (peer_canon_ == shared_->honest_left_canon) return;  // copying, by design
        if (shared_->lookup(peer_canon_)) return;
        // Finished right session under an uncovered left-type key: stop and
        // extract that key from the accepted Stage-5 proof.
        shared_->trigger =
            SimShared::Trigger{true, peer_canon_, stage5_entry_, core_.index, "right"};
    }

    BitString survivor_value() override { return shared_->right_draw(core_.index).value; }

private:
    SimShared* shared_;
};

json covered_kinds_json(const CoveredMap& covered) {
    json out = json::array();
    for (const auto& [canon, key] : covered) {
        char buf[20];
        snprintf(buf, sizeof buf, "%016llx",
                 static_cast<unsigned long long>(fnv1a64(canon)));
        out.push_back(json{{"key", buf}, {"kind", key.left_kind ? "left" : "right"}});
    }
    return out;
}

}  // namespace

json SimOutput::to_json() const {
    auto draws_json = [](const std::vector<std::optional<CrsDraw>>& ds) {
        json out = json::array();
        for (const auto& d : ds) {
            if (d) {
                out.push_back(json{{"value", d->value.to_hex()}, {"trapdoor", d->trapdoor.to_hex()}});
            } else {
                out.push_back(nullptr);
            }
        }
        return out;
    };
    return json{{"repetitions", repetitions},
                {"completed", completed},
                {"extraction_failed", extraction_failed},
                {"crs", crs_variant_name(variant)},
                {"repetition_log", repetition_log},
                {"covered", covered_kinds},
                {"left_draws", draws_json(left_draws)},
                {"right_draws", draws_json(right_draws)},
                {"r_l", r_l},
                {"sta_l", sta_l},
                {"r_r", r_r},
                {"sta_r", sta_r},
                {"classification", classification},
                {"trace", trace.to_json()}};
}

SimOutput simulate(const Config& cfg, const AdversaryFactory& factory_in) {
    Env env = Env::from(cfg);
    size_t payload_len = env.n + env.n * env.n;
    if (payload_len < env.t()) {
        throw ConfigError("n too small: a key exponent does not fit the committed payload");
    }
    AdversaryFactory factory = factory_in;
    if (!factory) factory = [&cfg]() { return make_adversary(cfg); };

    Rng master(cfg.seed);

    // Left key material: generated honestly, but only the public part stays
    // in reach; the secret seed and openings leave scope right here.
    ParsedLeftPk left_view;
    json left_pk;
    {
        Rng lk = master.child("keygen/left");
        LeftKeyPair left_keys = gen_left_key(env, lk);
        left_view = ParsedLeftPk{left_keys.pk_values, left_keys.receiver};
        left_pk = left_pk_json(left_keys);
    }
    std::string left_canon = key_canon(left_pk);

    SimKeyTriple triple = sim_gen_right_triple(env.group, master);
    json right_pk = right_pk_json(triple.kp);

    // Key-registration phase: run once to fix the public file.
    std::vector<json> adv_keys;
    {
        IdealLedger reg_ledger;
        std::vector<json> reg_view;
        reg_view.push_back(json{{"type", "register"}, {"n", env.n}, {"s", cfg.s},
                                {"left_pk", left_pk}, {"right_pk", right_pk}});
        Rng reg_rng = master.child("adv/register");
        AdvCtx reg_ctx(env, nullptr, &reg_ledger, &reg_rng, &reg_view);
        auto adv0 = factory();
        adv_keys = adv0->register_keys(reg_ctx);
    }
    PublicFile file = PublicFile::build(left_pk, right_pk, adv_keys, cfg.s);

    CoveredMap covered;
    covered[key_canon(right_pk)] = CoveredKey{false, BitString(), triple.kp.sk};

    SimOutput out;
    out.variant = cfg.crs;
    out.right_triple = triple;

    size_t max_reps = cfg.s + 1;
    for (size_t rep = 0; rep < max_reps; ++rep) {
        out.repetitions = rep + 1;
        Rng base = rep == 0 ? master : master.child("rep", rep);
        IdealLedger ledger;

        // Fresh adversary instance on the same tape: re-run registration to
        // rebuild its internal key state, then replay the session phase.
        auto adv = factory();
        {
            IdealLedger reg_ledger;
            std::vector<json> reg_view;
            reg_view.push_back(json{{"type", "register"}, {"n", env.n}, {"s", cfg.s},
                                    {"left_pk", left_pk}, {"right_pk", right_pk}});
            Rng reg_rng = master.child("adv/register");
            AdvCtx reg_ctx(env, nullptr, &reg_ledger, &reg_rng, &reg_view);
            std::vector<json> again = adv->register_keys(reg_ctx);
            if (again != adv_keys) {
                throw std::logic_error("adversary registration is not replayable");
            }
        }

        SimShared shared;
        shared.env = &env;
        shared.variant = cfg.crs;
        shared.covered = &covered;
        shared.honest_left_canon = left_canon;
        shared.draw_rng = base.child("m_crs");

        Rng adv_rng = master.child("adv/session");
        LoopParams p;
        p.env = &env;
        p.cfg = &cfg;
        p.file = &file;
        p.ledger = &ledger;
        p.adversary = adv.get();
        p.adv_rng = &adv_rng;
        p.session_rng_root = base;
        if (!cfg.aux.empty()) p.init_extra["aux"] = cfg.aux;
        p.make_left = [&](size_t index, size_t peer_key_id, const json& peer_key, Rng rng) {
            return std::make_unique<SimLeftSession>(env, &ledger, left_view, left_canon,
                                                    peer_key, index, peer_key_id, rng, &shared)
                ;
        };
        p.make_right = [&](size_t index, size_t peer_key_id, const json& claimed_key, Rng rng) {
            return std::make_unique<SimRightSession>(env, &ledger, triple.kp, claimed_key, index,
                                                     peer_key_id, rng, &shared);
        };
        p.stop_requested = [&shared]() { return shared.trigger.has_value(); };

        ExperimentTrace trace = run_loop(p);

        if (shared.trigger) {
            const SimShared::Trigger& trig = *shared.trigger;
            IdealLedger::Extraction ext = ledger.extract(trig.entry);
            if (!ext.ok) {
                // The verifier's tag check rules this out: an accepted proof
                // under a non-honest key cannot carry an honest tag.
                throw std::logic_error("extraction failed on an accepted adversary proof: " +
                                       ext.note);
            }
            json log{{"repetition", rep}, {"side", trig.side}, {"session", trig.session}};
            if (trig.extracts_left_key) {
                if (ext.witness.crs.key_branch) {
                    // Valid proof, but its witness is a right-key preimage,
                    // not a left key: nothing to cover, the simulation fails.
                    log["result"] = "no-left-key-witness";
                    out.repetition_log.push_back(log);
                    out.extraction_failed = true;
                    out.trace = std::move(trace);
                    return out;
                }
                covered[trig.canon] = CoveredKey{true, ext.witness.crs.sigma, 0};
                log["result"] = "covered-left-key";
            } else {
                covered[trig.canon] = CoveredKey{false, BitString(), ext.witness.sk.sk};
                log["result"] = "covered-right-key";
            }
            out.repetition_log.push_back(log);
            continue;
        }

        // No extraction event: this repetition is the simulation's output.
        out.repetition_log.push_back(json{{"repetition", rep}, {"result", "output"}});
        out.completed = true;
        out.left_draws = shared.left_draws;
        out.right_draws = shared.right_draws;
        for (size_t i = 0; i < trace.left_out.size(); ++i) {
            const auto& o = trace.left_out[i];
            out.r_l.push_back(o.output.to_hex());
            if (i >= out.left_draws.size() || !out.left_draws[i]) {
                throw std::logic_error("left session finished without a distribution draw");
            }
            out.sta_l.push_back(out.left_draws[i]->trapdoor.to_hex());
        }
        for (size_t i = 0; i < trace.right_out.size(); ++i) {
            const auto& o = trace.right_out[i];
            out.r_r.push_back(o.output.to_hex());
            if (i < out.right_draws.size() && out.right_draws[i] &&
                o.output == out.right_draws[i]->value) {
                out.sta_r.push_back(out.right_draws[i]->trapdoor.to_hex());
                continue;
            }
            json tau = nullptr;
            for (size_t k = 0; k < out.left_draws.size(); ++k) {
                if (out.left_draws[k] && o.output == out.left_draws[k]->value) {
                    tau = out.left_draws[k]->trapdoor.to_hex();
                    break;
                }
            }
            out.sta_r.push_back(tau);
        }
        out.trace = std::move(trace);
        break;
    }

    if (!out.completed && !out.extraction_failed) {
        throw std::logic_error("simulation exceeded its repetition budget");
    }
    out.covered_kinds = covered_kinds_json(covered);
    if (out.completed) out.classification = classify_outputs(out);
    return out;
}

json classify_outputs(const SimOutput& sim) {
    json per_right = json::array();
    bool valid = true;
    std::vector<bool> used(sim.left_draws.size(), false);
    size_t copied = 0;
    size_t fresh = 0;
    size_t aborted = 0;
    bool relay_pattern = true;

    for (size_t i = 0; i < sim.trace.right_out.size(); ++i) {
        const auto& o = sim.trace.right_out[i];
        if (!o.done) {
            ++aborted;
            relay_pattern = false;
            per_right.push_back(json{{"session", i}, {"class", "aborted"}});
            continue;
        }
        if (i < sim.right_draws.size() && sim.right_draws[i] &&
            o.output == sim.right_draws[i]->value) {
            ++fresh;
            relay_pattern = false;
            per_right.push_back(json{{"session", i}, {"class", "fresh"}});
            continue;
        }
        bool matched = false;
        for (size_t k = 0; k < sim.left_draws.size(); ++k) {
            if (sim.left_draws[k] && o.output == sim.left_draws[k]->value) {
                per_right.push_back(json{{"session", i}, {"class", "copied"}, {"from", k}});
                if (used[k]) valid = false;  // a left draw may be copied once
                used[k] = true;
                if (k != i) relay_pattern = false;
                ++copied;
                matched = true;
                break;
            }
        }
        if (!matched) {
            valid = false;
            relay_pattern = false;
            per_right.push_back(json{{"session", i}, {"class", "unmatched"}});
        }
    }
    std::string pattern = "mixed";
    if (per_right.empty()) {
        pattern = "empty";
    } else if (copied == per_right.size() && relay_pattern) {
        pattern = "copying";
    } else if (fresh == per_right.size()) {
        pattern = "fresh";
    } else if (aborted == per_right.size()) {
        pattern = "aborted";
    }
    return json{{"per_right", per_right}, {"valid", valid},      {"pattern", pattern},
                {"copied", copied},       {"fresh", fresh},      {"aborted", aborted}};
}

json classify_trace(const ExperimentTrace& trace) {
    json per_right = json::array();
    bool valid = true;
    std::vector<bool> used(trace.left_out.size(), false);
    for (size_t i = 0; i < trace.right_out.size(); ++i) {
        const auto& o = trace.right_out[i];
        if (!o.done) {
            per_right.push_back(json{{"session", i}, {"class", "aborted"}});
            continue;
        }
        bool matched = false;
        for (size_t k = 0; k < trace.left_out.size(); ++k) {
            if (o.output == trace.left_out[k].output) {
                per_right.push_back(json{{"session", i}, {"class", "copied"}, {"from", k}});
                if (used[k]) valid = false;
                used[k] = true;
                matched = true;
                break;
            }
        }
        if (!matched) {
            // Without distribution draws an unrelated value counts as fresh.
            per_right.push_back(json{{"session", i}, {"class", "fresh"}});
        }
    }
    return json{{"per_right", per_right}, {"valid", valid}};
}

json classify_artifact_json(const json& artifact) {
    // Locate the payload: run artifacts nest the trace under "trace",
    // simulation artifacts nest theirs under "simulation"; bare objects of
    // either shape are accepted too.
    const json* sim = nullptr;
    const json* trace = nullptr;
    if (artifact.contains("simulation")) {
        sim = &artifact.at("simulation");
    } else if (artifact.contains("r_l") && artifact.contains("left_draws")) {
        sim = &artifact;
    } else if (artifact.contains("trace")) {
        trace = &artifact.at("trace");
    } else if (artifact.contains("left_sessions")) {
        trace = &artifact;
    } else {
        throw ConfigError("artifact carries neither a trace nor a simulation");
    }

    auto done = [](const json& session) {
        return session.at("cursor").get<std::string>() == "Done";
    };
    auto draw_value = [](const json& draws, size_t i) -> std::string {
        if (i >= draws.size() || draws[i].is_null()) return {};
        return draws[i].at("value").get<std::string>();
    };

    if (sim) {
        const json& rights = sim->at("trace").at("right_sessions");
        const json& left_draws = sim->at("left_draws");
        const json& right_draws = sim->at("right_draws");
        json per_right = json::array();
        bool valid = true;
        std::vector<bool> used(left_draws.size(), false);
        size_t copied = 0, fresh = 0, aborted = 0;
        bool relay_pattern = true;
        for (size_t i = 0; i < rights.size(); ++i) {
            if (!done(rights[i])) {
                ++aborted;
                relay_pattern = false;
                per_right.push_back(json{{"session", i}, {"class", "aborted"}});
                continue;
            }
            std::string out_hex = rights[i].at("output").get<std::string>();
            if (!draw_value(right_draws, i).empty() && draw_value(right_draws, i) == out_hex) {
                ++fresh;
                relay_pattern = false;
                per_right.push_back(json{{"session", i}, {"class", "fresh"}});
                continue;
            }
            bool matched = false;
            for (size_t k = 0; k < left_draws.size(); ++k) {
                if (!draw_value(left_draws, k).empty() && draw_value(left_draws, k) == out_hex) {
                    per_right.push_back(json{{"session", i}, {"class", "copied"}, {"from", k}});
                    if (used[k]) valid = false;
                    used[k] = true;
                    if (k != i) relay_pattern = false;
                    ++copied;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                valid = false;
                relay_pattern = false;
                per_right.push_back(json{{"session", i}, {"class", "unmatched"}});
            }
        }
        std::string pattern = "mixed";
        if (per_right.empty()) {
            pattern = "empty";
        } else if (copied == per_right.size() && relay_pattern) {
            pattern = "copying";
        } else if (fresh == per_right.size()) {
            pattern = "fresh";
        } else if (aborted == per_right.size()) {
            pattern = "aborted";
        }
        return json{{"per_right", per_right}, {"valid", valid},      {"pattern", pattern},
                    {"copied", copied},       {"fresh", fresh},      {"aborted", aborted}};
    }

    const json& lefts = trace->at("left_sessions");
    const json& rights = trace->at("right_sessions");
    json per_right = json::array();
    bool valid = true;
    std::vector<bool> used(lefts.size(), false);
    for (size_t i = 0; i < rights.size(); ++i) {
        if (!done(rights[i])) {
            per_right.push_back(json{{"session", i}, {"class", "aborted"}});
            continue;
        }
        const json& output = rights[i].at("output");
        bool matched = false;
        for (size_t k = 0; k < lefts.size(); ++k) {
            if (lefts[k].at("output") == output) {
                per_right.push_back(json{{"session", i}, {"class", "copied"}, {"from", k}});
                if (used[k]) valid = false;
                used[k] = true;
                matched = true;
                break;
            }
        }
        if (!matched) {
            per_right.push_back(json{{"session", i}, {"class", "fresh"}});
        }
    }
    return json{{"per_right", per_right}, {"valid", valid}};
}

json ProbeResult::to_json() const {
    return json{{"relation", relation},
                {"trials", trials},
                {"freq_sk", freq_sk},
                {"freq_sk_prime", freq_sk_prime},
                {"abs_diff", freq_sk > freq_sk_prime ? freq_sk - freq_sk_prime
                                                     : freq_sk_prime - freq_sk}};
}

namespace {

bool eval_probe_relation(const GroupParams& group, const std::string& relation, const bigint& sk,
                         const SimKeyTriple& triple, const SimOutput& sim) {
    if (relation == "const-true") return true;
    if (relation == "sk-in-sta") {
        // Does the framed record of this secret key appear anywhere in the
        // published randomness state?  It never should.
        std::string record = "rsk:" + bigint_to_dec(sk) + ":" + bigint_to_dec(triple.kp.y0) +
                             ":" + bigint_to_dec(triple.kp.y1);
        std::string haystack = sim.sta_l.dump() + sim.sta_r.dump();
        return haystack.find(record) != std::string::npos;
    }
    if (relation == "side-detector") {
        // Does this secret key open the first image?  Holds with probability
        // one half, independently for the used key and the spare.
        return group.owf_eval(sk) == triple.kp.y0;
    }
    throw ConfigError("unknown probe relation: " + relation);
}

}  // namespace

ProbeResult sk_independence_probe(const Config& cfg, const std::string& relation, size_t trials,
                                  const AdversaryFactory& factory) {
    if (trials == 0) throw ConfigError("probe needs at least one trial");
    ProbeResult out;
    out.relation = relation;
    out.trials = trials;
    const GroupParams group = GroupParams::by_name(cfg.group_name);
    Rng seeder = Rng(cfg.seed).child("probe");
    size_t hit_sk = 0;
    size_t hit_spare = 0;
    for (size_t i = 0; i < trials; ++i) {
        Config trial_cfg = cfg;
        trial_cfg.seed = seeder.next();
        SimOutput sim = simulate(trial_cfg, factory);
        const SimKeyTriple& triple = sim.right_triple;
        if (eval_probe_relation(group, relation, triple.kp.sk, triple, sim)) ++hit_sk;
        if (eval_probe_relation(group, relation, triple.sk_prime, triple, sim)) ++hit_spare;
    }
    out.freq_sk = static_cast<double>(hit_sk) / static_cast<double>(trials);
    out.freq_sk_prime = static_cast<double>(hit_spare) / static_cast<double>(trials);
    return out;
}

}  // namespace bpkcnm
