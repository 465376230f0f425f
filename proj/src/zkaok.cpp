#include "zkaok.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "group.hpp"
#include "prf.hpp"
#include "rng.hpp"

namespace bpkcnm {

// ---------------------------------------------------------------- tags ----

std::string Tag::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(raw.size() * 2);
    for (uint8_t b : raw) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Tag make_tag(const std::vector<std::string>& fields, size_t pad_to) {
    Tag tag;
    for (const std::string& f : fields) {
        uint32_t len = static_cast<uint32_t>(f.size());
        tag.raw.push_back(static_cast<uint8_t>(len >> 24));
        tag.raw.push_back(static_cast<uint8_t>(len >> 16));
        tag.raw.push_back(static_cast<uint8_t>(len >> 8));
        tag.raw.push_back(static_cast<uint8_t>(len));
        tag.raw.insert(tag.raw.end(), f.begin(), f.end());
    }
    if (tag.raw.size() > pad_to) {
        throw std::length_error("tag fields exceed the session tag budget");
    }
    tag.raw.resize(pad_to, 0x00);
    return tag;
}

size_t tag_pad_len(const Env& env, const std::string& pk_l_canon) {
    // Worst case over the two session shapes.  Left tags carry two n-bit
    // strings in "len:hex" form; right tags carry a peer key serialization,
    // bounded here by the honest right-key width plus slack for adversary
    // keys of comparable size.  Oversized registered keys make the tag (and
    // hence the session statement) unbuildable, which aborts the session.
    size_t hex_field = 2 + 20 + 1 + (env.n + 3) / 4;  // "<dec len>:<hex>", generous
    size_t left_worst = (4 + pk_l_canon.size()) + 2 * (4 + hex_field);
    size_t dec_width = bigint_to_dec(env.group.p).size();
    size_t right_key_worst = 32 + 2 * dec_width + 96;
    size_t right_worst = (4 + pk_l_canon.size()) + (4 + right_key_worst);
    return std::max(left_worst, right_worst);
}

Tag left_session_tag(const Env& env, const std::string& pk_l_canon, const BitString& r_r,
                     const BitString& r) {
    return make_tag({pk_l_canon, r_r.to_hex(), r.to_hex()}, tag_pad_len(env, pk_l_canon));
}

Tag right_session_tag(const Env& env, const std::string& pk_l_canon,
                      const std::string& peer_right_pk_canon) {
    return make_tag({pk_l_canon, peer_right_pk_canon}, tag_pad_len(env, pk_l_canon));
}

// ---------------------------------------------------- statements/witness ----

AokStatement aok_stmt_sk(SkStatement s) {
    AokStatement out;
    out.kind = AokStatement::Kind::Sk;
    out.sk = std::move(s);
    return out;
}

AokStatement aok_stmt_crs(CrsStatement s) {
    AokStatement out;
    out.kind = AokStatement::Kind::Crs;
    out.crs = std::move(s);
    return out;
}

AokStatement aok_stmt_sigma(SigmaStatement s) {
    AokStatement out;
    out.kind = AokStatement::Kind::Sigma;
    out.sigma = std::move(s);
    return out;
}

namespace {

void append_values(std::ostringstream& os, const std::vector<BitString>& vs) {
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i) os << ',';
        os << vs[i].to_hex();
    }
}

}  // namespace

std::string aok_stmt_canon(const AokStatement& stmt) {
    std::ostringstream os;
    switch (stmt.kind) {
        case AokStatement::Kind::Sk:
            os << "sk|y0=" << bigint_to_dec(stmt.sk.y0) << "|y1=" << bigint_to_dec(stmt.sk.y1)
               << "|R=" << stmt.sk.receiver.to_hex() << "|c=";
            append_values(os, stmt.sk.c_sk);
            break;
        case AokStatement::Kind::Crs:
            os << "crs|R=" << stmt.crs.receiver.to_hex() << "|pk=";
            append_values(os, stmt.crs.pk_l_values);
            os << "|rpl=" << stmt.crs.r_prime_l.to_hex() << "|rr=" << stmt.crs.r_r.to_hex()
               << "|r=" << stmt.crs.r.to_hex() << "|y0=" << bigint_to_dec(stmt.crs.y0)
               << "|y1=" << bigint_to_dec(stmt.crs.y1) << "|c=";
            append_values(os, stmt.crs.c_crs);
            break;
        case AokStatement::Kind::Sigma:
            os << "sig|" << sigma_stmt_canon(stmt.sigma);
            break;
    }
    return os.str();
}

AokWitness aok_wit_sk(SkWitness w) {
    AokWitness out;
    out.kind = AokStatement::Kind::Sk;
    out.sk = std::move(w);
    return out;
}

AokWitness aok_wit_crs(CrsWitness w) {
    AokWitness out;
    out.kind = AokStatement::Kind::Crs;
    out.crs = std::move(w);
    return out;
}

AokWitness aok_wit_sigma(SigmaWitness w) {
    AokWitness out;
    out.kind = AokStatement::Kind::Sigma;
    out.sigma = std::move(w);
    return out;
}

namespace {

bool image_matches(const GroupParams& g, const bigint& x, const bigint& y0, const bigint& y1) {
    if (x < 0 || x >= g.q) return false;
    bigint y = g.owf_eval(x);
    return y == y0 || y == y1;
}

bool opens_to(const Env& env, const std::vector<BitString>& values, const BitString& receiver,
              const BitString& payload, const std::vector<BitString>& seeds) {
    if (values.size() != payload.size() || seeds.size() != payload.size()) return false;
    for (size_t i = 0; i < payload.size(); ++i) {
        NaorCommitment com{receiver, values[i]};
        NaorOpening open{payload.bit(i), seeds[i]};
        if (!naor_verify(env, com, open)) return false;
    }
    return true;
}

bool eval_sk(const Env& env, const SkStatement& s, const SkWitness& w) {
    size_t t = env.t();
    if (s.c_sk.size() != t || w.seeds.size() != t) return false;
    if (s.receiver.size() != 3 * env.n) return false;
    if (w.sk < 0 || w.sk >= env.group.q) return false;
    BitString sk_bits = bigint_to_bits(w.sk, t);
    if (!opens_to(env, s.c_sk, s.receiver, sk_bits, w.seeds)) return false;
    return image_matches(env.group, w.sk, s.y0, s.y1);
}

bool eval_crs(const Env& env, const CrsStatement& s, const CrsWitness& w) {
    size_t n = env.n;
    size_t payload_len = n + n * n;
    if (s.receiver.size() != 3 * n) return false;
    if (s.c_crs.size() != payload_len) return false;
    if (s.r_r.size() != n || s.r.size() != n) return false;
    if (s.r_prime_l.size() != env.d) return false;
    if (w.payload.size() != payload_len || w.crs_seeds.size() != payload_len) return false;
    if (!opens_to(env, s.c_crs, s.receiver, w.payload, w.crs_seeds)) return false;

    if (w.key_branch) {
        // Only the payload prefix is constrained: its t-bit value must be a
        // preimage of one of the peer's images.  The suffix is free.
        size_t t = env.t();
        if (payload_len < t) return false;
        bigint x = bits_to_bigint(w.payload.slice(0, t));
        return image_matches(env.group, x, s.y0, s.y1);
    }

    // Seed branch: the payload is exactly (seed || pk commitment seeds), the
    // left public key re-commits from those seeds, and the Stage-4 value
    // satisfies the PRF equation.
    if (w.sigma.size() != n || w.pk_seeds.size() != n) return false;
    if (s.pk_l_values.size() != n) return false;
    BitString expect = w.sigma;
    for (const BitString& seed : w.pk_seeds) {
        if (seed.size() != n) return false;
        expect = expect.concat(seed);
    }
    if (!(w.payload == expect)) return false;
    for (size_t i = 0; i < n; ++i) {
        NaorCommitment com{s.receiver, s.pk_l_values[i]};
        NaorOpening open{w.sigma.bit(i), w.pk_seeds[i]};
        if (!naor_verify(env, com, open)) return false;
    }
    BitString mask = env.prf_eval(w.sigma, s.r_prime_l);
    return mask.xored(s.r_r) == s.r;
}

}  // namespace

bool eval_relation(const Env& env, const AokStatement& stmt, const AokWitness& w) {
    if (stmt.kind != w.kind) return false;
    try {
        switch (stmt.kind) {
            case AokStatement::Kind::Sk:
                return eval_sk(env, stmt.sk, w.sk);
            case AokStatement::Kind::Crs:
                return eval_crs(env, stmt.crs, w.crs);
            case AokStatement::Kind::Sigma:
                return sigma_witness_valid(stmt.sigma, w.sigma);
        }
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

// ------------------------------------------------------- ideal backend ----

uint64_t IdealLedger::submit(const Env& env, Tag tag, AokStatement stmt, AokWitness witness,
                             bool honest_origin) {
    LedgerEntry e;
    e.id = entries_.size();
    e.tag = std::move(tag);
    e.stmt_canon = aok_stmt_canon(stmt);
    e.stmt = std::move(stmt);
    e.witness = std::move(witness);
    e.verdict = eval_relation(env, e.stmt, e.witness);
    e.honest_origin = honest_origin;
    entries_.push_back(std::move(e));
    return entries_.back().id;
}

const LedgerEntry* IdealLedger::find(uint64_t id) const {
    if (id >= entries_.size()) return nullptr;
    return &entries_[id];
}

bool IdealLedger::check_proof(uint64_t id, const Tag& expect_tag,
                              const std::string& expect_stmt_canon, std::string* why) const {
    const LedgerEntry* e = find(id);
    if (!e) {
        if (why) *why = "no such proof entry";
        return false;
    }
    if (!(e->tag == expect_tag)) {
        if (why) *why = "proof bound to a different tag";
        return false;
    }
    if (e->stmt_canon != expect_stmt_canon) {
        if (why) *why = "proof is for a different statement";
        return false;
    }
    if (!e->verdict) {
        if (why) *why = "relation does not hold for the submitted witness";
        return false;
    }
    return true;
}

IdealLedger::Extraction IdealLedger::extract(uint64_t id) const {
    Extraction out;
    const LedgerEntry* e = find(id);
    if (!e) {
        out.note = "no such proof entry";
        return out;
    }
    if (!e->verdict) {
        out.note = "entry does not satisfy its relation";
        return out;
    }
    for (const LedgerEntry& h : entries_) {
        if (h.honest_origin && h.tag == e->tag) {
            out.note = "tag matches an honestly produced proof; nothing extractable";
            return out;
        }
    }
    out.ok = true;
    out.witness = e->witness;
    return out;
}

json IdealLedger::dump() const {
    json out = json::array();
    for (const LedgerEntry& e : entries_) {
        const char* rel = e.stmt.kind == AokStatement::Kind::Sk    ? "sk"
                          : e.stmt.kind == AokStatement::Kind::Crs ? "crs"
                                                                   : "sigma";
        out.push_back({{"id", e.id},
                       {"tag", e.tag.hex()},
                       {"relation", rel},
                       {"verdict", e.verdict},
                       {"honest", e.honest_origin}});
    }
    return out;
}

// ------------------------------------------------------- sigma backend ----

namespace {

size_t witness_bit_len(const GroupParams& g, const SigmaStatement& stmt) {
    size_t t = g.challenge_bits();
    switch (stmt.kind) {
        case SigmaStatement::Kind::Dlog:
            return t;
        case SigmaStatement::Kind::Opening:
            return 2 * t;
        case SigmaStatement::Kind::Or:
            // One side bit, then room for the larger arm.
            return 1 + std::max(witness_bit_len(g, stmt.children[0]),
                                witness_bit_len(g, stmt.children[1]));
    }
    return 0;
}

}  // namespace

BitString sigma_witness_bits(const SigmaStatement& stmt, const SigmaWitness& w) {
    const GroupParams& g = stmt.group;
    size_t t = g.challenge_bits();
    switch (stmt.kind) {
        case SigmaStatement::Kind::Dlog:
            return bigint_to_bits(w.x, t);
        case SigmaStatement::Kind::Opening:
            return bigint_to_bits(w.m, t).concat(bigint_to_bits(w.r, t));
        case SigmaStatement::Kind::Or: {
            bool right = w.kind == SigmaWitness::Kind::OrRight;
            const SigmaStatement& sub = stmt.children[right ? 1 : 0];
            BitString body = sigma_witness_bits(sub, w.child.at(0));
            BitString out = BitString::zeros(1);
            out.set_bit(0, right ? 1 : 0);
            out = out.concat(body);
            // Pad to the statement-determined width so the commitment length
            // does not depend on which arm the witness is for.
            size_t want = witness_bit_len(g, stmt);
            while (out.size() < want) out = out.concat(BitString::zeros(1));
            return out;
        }
    }
    throw std::logic_error("unreachable witness encoding case");
}

SigmaAokProver::SigmaAokProver(const Env& env, Tag tag, SigmaStatement stmt, SigmaWitness witness,
                               uint64_t coin_seed)
    : env_(env),
      tag_(std::move(tag)),
      stmt_(std::move(stmt)),
      witness_(std::move(witness)),
      coin_seed_(coin_seed) {
    if (!sigma_witness_valid(stmt_, witness_)) {
        throw std::domain_error("witness does not satisfy the statement");
    }
}

SigmaAokMsg1 SigmaAokProver::round1(const BitString& receiver) const {
    SigmaAokMsg1 out;
    out.tag = tag_;
    BitString bits = sigma_witness_bits(stmt_, witness_);
    Rng commit_rng = Rng(coin_seed_).child("aok/commit");
    for (size_t i = 0; i < bits.size(); ++i) {
        BitString seed = commit_rng.bits(env_.n);
        out.commitment_values.push_back(naor_commit(env_, bits.bit(i), seed, receiver).value);
    }
    Rng sigma_rng = Rng(coin_seed_).child("aok/sigma");
    SigmaProver prover(stmt_, witness_, sigma_rng);
    out.a = prover.commit();
    return out;
}

SigmaResponse SigmaAokProver::respond(const BitString& e) const {
    // Rebuild the Sigma prover from the same coin stream; round1's first
    // message is reproduced exactly, so answering a fresh challenge is a
    // genuine rewind of one fixed strategy.
    Rng sigma_rng = Rng(coin_seed_).child("aok/sigma");
    SigmaProver prover(stmt_, witness_, sigma_rng);
    prover.commit();
    return prover.respond(e);
}

SigmaAokRun sigma_aok_interact(const Env& env, const SigmaAokProver& prover,
                               const SigmaStatement& stmt, const Tag& expect_tag, Rng& rng) {
    SigmaAokRun run;
    run.receiver = rng.bits(3 * env.n);
    run.msg1 = prover.round1(run.receiver);
    if (!(run.msg1.tag == expect_tag)) {
        run.reason = "tag mismatch";
        return run;
    }
    size_t want = witness_bit_len(env.group, stmt);
    if (run.msg1.commitment_values.size() != want) {
        run.reason = "commitment count does not match the statement shape";
        return run;
    }
    for (const BitString& v : run.msg1.commitment_values) {
        if (v.size() != 3 * env.n) {
            run.reason = "malformed commitment value";
            return run;
        }
    }
    run.e = sample_challenge(stmt.group, rng);
    run.z = prover.respond(run.e);
    SigmaTranscript tr{run.msg1.a, run.e, run.z};
    SigmaVerdict v = sigma_verify(stmt, tr);
    run.accepted = v.ok;
    run.reason = v.reason;
    return run;
}

std::optional<SigmaWitness> sigma_aok_extract(
    const Env& env, const SigmaStatement& stmt, const SigmaAokMsg1& msg1, const BitString& e1,
    const SigmaResponse& z1, const std::function<SigmaResponse(const BitString&)>& replay,
    Rng& rng, size_t attempt_cap) {
    (void)env;
    SigmaTranscript first{msg1.a, e1, z1};
    if (!sigma_verify(stmt, first).ok) return std::nullopt;
    for (size_t i = 0; i < attempt_cap; ++i) {
        BitString e2 = sample_challenge(stmt.group, rng);
        if (e2 == e1) continue;
        SigmaResponse z2 = replay(e2);
        SigmaTranscript second{msg1.a, e2, z2};
        if (!sigma_verify(stmt, second).ok) continue;
        try {
            return sigma_extract(stmt, first, second);
        } catch (const ExtractionImpossible&) {
            continue;
        }
    }
    return std::nullopt;
}

}  // namespace bpkcnm
