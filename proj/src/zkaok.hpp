// Tag-based argument-of-knowledge interface with two backends: an ideal
// ledger oracle (exact soundness, extraction by lookup) and a commit-then-
// Sigma protocol with a rewinding extractor for statements that admit Sigma
// proofs.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bitstring.hpp"
#include "config.hpp"
#include "naor.hpp"
#include "sigma.hpp"

namespace bpkcnm {

// ---------------------------------------------------------------- tags ----

struct Tag {
    std::vector<uint8_t> raw;  // length-prefixed fields, zero-padded to a uniform length

    bool operator==(const Tag&) const = default;
    bool operator<(const Tag& o) const { return raw < o.raw; }
    std::string hex() const;
};

// Each field is framed as 4-byte big-endian length plus bytes; the result is
// right-padded with 0x00 up to pad_to.
Tag make_tag(const std::vector<std::string>& fields, size_t pad_to);

// Uniform tag length for a session family: the worst case over the left
// shape (pk_l, r_r, r) and the right shape (pk_l, peer right-key canon), so
// both serialize to the same length.
size_t tag_pad_len(const Env& env, const std::string& pk_l_canon);

Tag left_session_tag(const Env& env, const std::string& pk_l_canon, const BitString& r_r,
                     const BitString& r);
Tag right_session_tag(const Env& env, const std::string& pk_l_canon,
                      const std::string& peer_right_pk_canon);

// ---------------------------------------------------- statements/witness ----

// Knowledge of a committed right secret key: c_sk opens to the exponent's
// t-bit encoding and f(exponent) is one of the key's two images.
struct SkStatement {
    bigint y0 = 0;
    bigint y1 = 0;
    BitString receiver;             // Naor receiver string (3n bits)
    std::vector<BitString> c_sk;    // t commitment values
};

// Knowledge behind Stage-5: c_crs opens to an (n + n^2)-bit payload and
// either the payload is (seed || pk-opening-seeds) consistent with the left
// public key and the PRF equation, or its t-bit prefix is a preimage of y0
// or y1.
struct CrsStatement {
    BitString receiver;
    std::vector<BitString> pk_l_values;  // left pk commitment values (n of them)
    BitString r_prime_l;                 // d bits
    BitString r_r;                       // n bits
    BitString r;                         // n bits
    bigint y0 = 0;
    bigint y1 = 0;
    std::vector<BitString> c_crs;        // n + n^2 commitment values
};

struct AokStatement {
    enum class Kind { Sk, Crs, Sigma };
    Kind kind = Kind::Sk;
    SkStatement sk;
    CrsStatement crs;
    SigmaStatement sigma;
};

AokStatement aok_stmt_sk(SkStatement s);
AokStatement aok_stmt_crs(CrsStatement s);
AokStatement aok_stmt_sigma(SigmaStatement s);
std::string aok_stmt_canon(const AokStatement& stmt);

struct SkWitness {
    bigint sk = 0;                 // exponent in [0, q)
    std::vector<BitString> seeds;  // one per committed bit
};

struct CrsWitness {
    bool key_branch = false;
    // Seed branch only: the PRF seed and the left pk's commitment seeds.
    BitString sigma;
    std::vector<BitString> pk_seeds;
    // Both branches: the committed payload and its commitment seeds.
    BitString payload;
    std::vector<BitString> crs_seeds;
};

struct AokWitness {
    AokStatement::Kind kind = AokStatement::Kind::Sk;
    SkWitness sk;
    CrsWitness crs;
    SigmaWitness sigma;
};

AokWitness aok_wit_sk(SkWitness w);
AokWitness aok_wit_crs(CrsWitness w);
AokWitness aok_wit_sigma(SigmaWitness w);

// Total predicate deciding the statement's relation.
bool eval_relation(const Env& env, const AokStatement& stmt, const AokWitness& w);

// ------------------------------------------------------- ideal backend ----

struct LedgerEntry {
    uint64_t id = 0;
    Tag tag;
    std::string stmt_canon;
    AokStatement stmt;
    AokWitness witness;
    bool verdict = false;
    bool honest_origin = false;
};

// Single-writer oracle log.  A proof on the wire is just an entry id; the
// verifier learns (tag, statement, verdict) and nothing else.
class IdealLedger {
public:
    uint64_t submit(const Env& env, Tag tag, AokStatement stmt, AokWitness witness,
                    bool honest_origin);
    const LedgerEntry* find(uint64_t id) const;
    size_t size() const { return entries_.size(); }

    // Verifier-side acceptance: the entry must exist, carry a true verdict,
    // and match the tag and statement the verifier recomputed itself.
    bool check_proof(uint64_t id, const Tag& expect_tag, const std::string& expect_stmt_canon,
                     std::string* why = nullptr) const;

    // Knowledge extraction with the tag rule: a witness comes back unless
    // the entry's tag equals the tag of some honest-origin entry (copied
    // proofs carry nothing extractable).
    struct Extraction {
        bool ok = false;
        AokWitness witness;
        std::string note;
    };
    Extraction extract(uint64_t id) const;

    json dump() const;  // (tag hex, relation id, verdict) per entry

private:
    std::vector<LedgerEntry> entries_;
};

// ------------------------------------------------------- sigma backend ----

// First prover message of commit-then-Sigma: a bitwise commitment to the
// witness encoding, then the Sigma first message.
struct SigmaAokMsg1 {
    Tag tag;
    std::vector<BitString> commitment_values;
    SigmaCommitMsg a;
};

// Canonical bit encoding of a witness for the commit prefix: one side bit
// per Or level, then the leaf exponent(s) as t-bit strings.
BitString sigma_witness_bits(const SigmaStatement& stmt, const SigmaWitness& w);

// Deterministic, replayable honest prover: all coins derive from coin_seed,
// so round1 is stable and respond can be asked about many challenges (the
// rewinding extractor depends on exactly this).
class SigmaAokProver {
public:
    SigmaAokProver(const Env& env, Tag tag, SigmaStatement stmt, SigmaWitness witness,
                   uint64_t coin_seed);
    SigmaAokMsg1 round1(const BitString& receiver) const;
    SigmaResponse respond(const BitString& e) const;

private:
    Env env_;
    Tag tag_;
    SigmaStatement stmt_;
    SigmaWitness witness_;
    uint64_t coin_seed_;
};

struct SigmaAokRun {
    BitString receiver;
    SigmaAokMsg1 msg1;
    BitString e;
    SigmaResponse z;
    bool accepted = false;
    std::string reason;
};

// One honest interactive run: verifier supplies the receiver string and the
// challenge from its rng and checks tag, commitment shape, and transcript.
SigmaAokRun sigma_aok_interact(const Env& env, const SigmaAokProver& prover,
                               const SigmaStatement& stmt, const Tag& expect_tag, Rng& rng);

// Rewind the prover strategy for a second accepting transcript on a fresh
// challenge, then apply special soundness; nullopt once the attempt cap is
// exhausted.
std::optional<SigmaWitness> sigma_aok_extract(
    const Env& env, const SigmaStatement& stmt, const SigmaAokMsg1& msg1, const BitString& e1,
    const SigmaResponse& z1, const std::function<SigmaResponse(const BitString&)>& replay,
    Rng& rng, size_t attempt_cap);

}  // namespace bpkcnm
