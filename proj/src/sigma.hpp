// Three-move proofs of knowledge over the group: Schnorr discrete log,
// Pedersen-opening knowledge, and OR-composition with XOR challenge
// splitting.  Includes honest-verifier simulators and the two-transcript
// special-soundness extractor.
#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitstring.hpp"
#include "group.hpp"
#include "rng.hpp"
#include "serialize.hpp"

namespace bpkcnm {

struct SigmaStatement {
    enum class Kind { Dlog, Opening, Or };
    Kind kind = Kind::Dlog;
    GroupParams group;
    // Dlog leaf: prove knowledge of x with g^x = y.
    bigint y = 0;
    // Opening leaf: prove knowledge of (m, r) with g^m * h^r = com.
    bigint h = 0;
    bigint com = 0;
    // Or node: exactly two children; child challenges XOR to the node's.
    std::vector<SigmaStatement> children;
    // Free-form public context bound into the canonical serialization (and
    // therefore into anything hashed over the statement); no algebraic role.
    std::string label;
};

SigmaStatement stmt_dlog(const GroupParams& group, const bigint& y, const std::string& label = "");
SigmaStatement stmt_opening(const GroupParams& group, const bigint& h, const bigint& com,
                            const std::string& label = "");
SigmaStatement stmt_or(SigmaStatement left, SigmaStatement right);
// Three branches as Or(first, Or(second, third)).
SigmaStatement stmt_or3(SigmaStatement first, SigmaStatement second, SigmaStatement third);

struct SigmaWitness {
    enum class Kind { Dlog, Opening, OrLeft, OrRight };
    Kind kind = Kind::Dlog;
    bigint x = 0;        // Dlog
    bigint m = 0;        // Opening
    bigint r = 0;        // Opening
    std::vector<SigmaWitness> child;  // Or: exactly one element

    bool operator==(const SigmaWitness&) const = default;
};

SigmaWitness wit_dlog(const bigint& x);
SigmaWitness wit_opening(const bigint& m, const bigint& r);
SigmaWitness wit_or_left(SigmaWitness w);
SigmaWitness wit_or_right(SigmaWitness w);
// Wrap a leaf witness for branch `index` of a stmt_or3 statement.
SigmaWitness wit_or3(size_t index, SigmaWitness w);

// Does the witness satisfy the statement's relation?
bool sigma_witness_valid(const SigmaStatement& stmt, const SigmaWitness& w);

// First prover message; Or nodes mirror the statement tree.
struct SigmaCommitMsg {
    std::vector<bigint> a;                  // leaf: the commitment element(s)
    std::vector<SigmaCommitMsg> children;   // Or: [left, right]

    bool operator==(const SigmaCommitMsg&) const = default;
};

// Third message; for Or nodes, each child carries its own challenge.
struct SigmaResponse {
    std::vector<bigint> z;
    std::vector<std::pair<BitString, SigmaResponse>> children;  // [(e_L, z_L), (e_R, z_R)]

    bool operator==(const SigmaResponse&) const = default;
};

struct SigmaTranscript {
    SigmaCommitMsg a;
    BitString e;  // t bits, t = bitlen(q - 1)
    SigmaResponse z;

    bool operator==(const SigmaTranscript&) const = default;
};

// Source of prover/simulator coins.  Tests exhaustively enumerating coin
// space plug in a scripted source; production code wraps an Rng.
struct CoinSource {
    virtual ~CoinSource() = default;
    virtual bigint exponent(const GroupParams& group) = 0;  // uniform [0, q)
    virtual BitString challenge(size_t t) = 0;              // uniform t bits
};

struct RngCoins : CoinSource {
    explicit RngCoins(Rng& rng) : rng(&rng) {}
    bigint exponent(const GroupParams& group) override { return group.random_exponent(*rng); }
    BitString challenge(size_t t) override { return rng->bits(t); }
    Rng* rng;
};

// Honest-verifier challenge: uniform in [0, q), encoded as t bits.  Provers
// and simulators accept any t-bit challenge (arithmetic is mod q).
BitString sample_challenge(const GroupParams& group, Rng& rng);
bigint challenge_value(const GroupParams& group, const BitString& e);

// Single-use prover state: commit once, respond once.
class SigmaProver {
public:
    // Coin draw order is deterministic: depth-first over the statement; at an
    // Or node, first the simulated side's challenge, then the simulated
    // side's transcript coins, then the real side's coins.
    SigmaProver(const SigmaStatement& stmt, const SigmaWitness& witness, CoinSource& coins);
    SigmaProver(const SigmaStatement& stmt, const SigmaWitness& witness, Rng& rng);

    const SigmaCommitMsg& commit() const { return a_; }
    SigmaResponse respond(const BitString& e);

private:
    struct Node;
    std::shared_ptr<Node> root_;
    SigmaCommitMsg a_;
    size_t t_ = 0;
    bool consumed_ = false;
};

struct SigmaVerdict {
    bool ok = false;
    std::string reason;  // empty when ok
};

SigmaVerdict sigma_verify(const SigmaStatement& stmt, const SigmaTranscript& tr);

// SHVZK simulator: a verifying transcript for any statement and challenge,
// no witness involved.
SigmaTranscript sigma_simulate(const SigmaStatement& stmt, const BitString& e, CoinSource& coins);
SigmaTranscript sigma_simulate(const SigmaStatement& stmt, const BitString& e, Rng& rng);

// Raised when two transcripts cannot yield a witness (equal challenges, or
// challenges that collide mod q on every branch).
struct ExtractionImpossible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Special soundness: two accepting transcripts, same first message,
// different challenges -> witness.
SigmaWitness sigma_extract(const SigmaStatement& stmt, const SigmaTranscript& t1,
                           const SigmaTranscript& t2);

// Flattened access to the three (e_i, z_i) pairs of a stmt_or3 transcript.
struct Or3Parts {
    SigmaCommitMsg a0, a1, a2;
    BitString e0, e1, e2;
    SigmaResponse z0, z1, z2;
};
Or3Parts or3_split(const SigmaTranscript& tr);
SigmaCommitMsg or3_commit(SigmaCommitMsg a0, SigmaCommitMsg a1, SigmaCommitMsg a2);
SigmaResponse or3_response(const BitString& e0, SigmaResponse z0, const BitString& e1,
                           SigmaResponse z1, const BitString& e2, SigmaResponse z2);

// Canonical depth-first serializations; bit-exact across runs.
std::string sigma_stmt_canon(const SigmaStatement& stmt);
std::string sigma_commit_canon(const SigmaCommitMsg& a);
std::string sigma_response_canon(const SigmaResponse& z);
std::string sigma_transcript_canon(const SigmaTranscript& tr);
json sigma_transcript_json(const SigmaTranscript& tr);

}  // namespace bpkcnm
