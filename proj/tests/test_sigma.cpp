// Three-move proof layer: frozen Schnorr vectors, the honest-verifier
// simulator, two-transcript extraction, and OR composition with challenge
// splitting.  Numeric expectations come from tests/oracles/modarith.py.
#include <doctest.h>

#include <string>
#include <vector>

#include "group.hpp"
#include "pedersen.hpp"
#include "rng.hpp"
#include "sigma.hpp"
#include "testutil.hpp"

using namespace bpkcnm;
using bpkcnm::testutil::FixedCoins;

namespace {

// Prover run with a scripted coin tape; challenge given as an integer.
SigmaTranscript run_prover(const SigmaStatement& stmt, const SigmaWitness& w, FixedCoins coins,
                           uint64_t ev) {
    SigmaProver p(stmt, w, coins);
    SigmaTranscript tr{p.commit(), BitString::from_uint(ev, stmt.group.challenge_bits()), {}};
    tr.z = p.respond(tr.e);
    return tr;
}

}  // namespace

TEST_CASE("discrete-log proof reproduces the frozen oracle transcript") {
    GroupParams g = GroupParams::toy();
    // y = g^3 = 8, commit coin k = 4: a = g^4 = 16; e = 5: z = 4 + 5*3 = 8 mod 11.
    SigmaStatement stmt = stmt_dlog(g, 8);
    FixedCoins coins;
    coins.exps = {bigint(4)};
    SigmaProver p(stmt, wit_dlog(3), coins);
    CHECK(p.commit().a == std::vector<bigint>{16});

    SigmaTranscript tr{p.commit(), BitString::from_uint(5, 4), {}};
    tr.z = p.respond(tr.e);
    CHECK(tr.z.z == std::vector<bigint>{8});
    CHECK(sigma_verify(stmt, tr).ok);

    // Tampering with any of the three moves breaks verification.
    SigmaTranscript bad = tr;
    bad.z.z[0] = 9;
    CHECK_FALSE(sigma_verify(stmt, bad).ok);
    CHECK_FALSE(sigma_verify(stmt, bad).reason.empty());
    bad = tr;
    bad.a.a[0] = 3;
    CHECK_FALSE(sigma_verify(stmt, bad).ok);
    bad = tr;
    bad.e = BitString::from_uint(6, 4);
    CHECK_FALSE(sigma_verify(stmt, bad).ok);
}

TEST_CASE("prover state is single use") {
    GroupParams g = GroupParams::toy();
    SigmaStatement stmt = stmt_dlog(g, 8);
    Rng rng(1);
    SigmaProver p(stmt, wit_dlog(3), rng);
    (void)p.respond(BitString::from_uint(5, 4));
    CHECK_THROWS(p.respond(BitString::from_uint(6, 4)));
}

TEST_CASE("challenge values reduce mod q") {
    GroupParams g = GroupParams::toy();
    CHECK(challenge_value(g, BitString::from_uint(5, 4)) == 5);
    CHECK(challenge_value(g, BitString::from_uint(11, 4)) == 0);
    CHECK(challenge_value(g, BitString::from_uint(13, 4)) == 2);
    Rng rng(9);
    CHECK(sample_challenge(g, rng).size() == 4);
}

TEST_CASE("simulated transcripts verify for every challenge") {
    GroupParams g = GroupParams::toy();
    SigmaStatement stmt = stmt_dlog(g, 8);
    Rng rng(17);
    for (uint64_t ev = 0; ev < 16; ++ev) {
        SigmaTranscript tr = sigma_simulate(stmt, BitString::from_uint(ev, 4), rng);
        CHECK(sigma_verify(stmt, tr).ok);
    }

    // Same for an opening statement and an OR statement.
    bigint h = 8;
    SigmaStatement open = stmt_opening(g, h, pedersen_commit(g, h, 4, 9));
    SigmaStatement either = stmt_or(stmt_dlog(g, 8), open);
    for (uint64_t ev = 0; ev < 16; ++ev) {
        CHECK(sigma_verify(open, sigma_simulate(open, BitString::from_uint(ev, 4), rng)).ok);
        CHECK(sigma_verify(either, sigma_simulate(either, BitString::from_uint(ev, 4), rng)).ok);
    }
}

TEST_CASE("two transcripts with distinct challenge values yield the witness") {
    GroupParams g = GroupParams::toy();
    SigmaStatement stmt = stmt_dlog(g, 8);
    FixedCoins c;
    c.exps = {bigint(4)};
    SigmaTranscript t1 = run_prover(stmt, wit_dlog(3), c, 5);
    SigmaTranscript t2 = run_prover(stmt, wit_dlog(3), c, 2);
    // Oracle: z1 = 8, z2 = 10, (z1 - z2) / (e1 - e2) = 3 mod 11.
    CHECK(t2.z.z == std::vector<bigint>{10});
    CHECK(sigma_extract(stmt, t1, t2) == wit_dlog(3));

    CHECK_THROWS_AS(sigma_extract(stmt, t1, t1), ExtractionImpossible);
    // 5 and 5+11 = 16 do not fit in four bits, so the colliding pair here is
    // 0 and 11: distinct bit patterns, equal values mod q.
    SigmaTranscript t3 = run_prover(stmt, wit_dlog(3), c, 0);
    SigmaTranscript t4 = run_prover(stmt, wit_dlog(3), c, 11);
    CHECK_THROWS_AS(sigma_extract(stmt, t3, t4), ExtractionImpossible);

    // Mismatched first messages are a caller error, not an unextractable pair.
    FixedCoins other;
    other.exps = {bigint(7)};
    SigmaTranscript t5 = run_prover(stmt, wit_dlog(3), other, 2);
    CHECK_THROWS_AS(sigma_extract(stmt, t1, t5), std::invalid_argument);
}

TEST_CASE("opening proof completeness and extraction") {
    GroupParams g = GroupParams::toy();
    bigint h = 8;
    bigint com = pedersen_commit(g, h, 4, 9);
    SigmaStatement stmt = stmt_opening(g, h, com);

    FixedCoins c;
    c.exps = {bigint(2), bigint(5)};
    SigmaTranscript t1 = run_prover(stmt, wit_opening(4, 9), c, 1);
    SigmaTranscript t2 = run_prover(stmt, wit_opening(4, 9), c, 2);
    CHECK(sigma_verify(stmt, t1).ok);
    CHECK(sigma_verify(stmt, t2).ok);
    CHECK(sigma_extract(stmt, t1, t2) == wit_opening(4, 9));

    CHECK(sigma_witness_valid(stmt, wit_opening(4, 9)));
    CHECK_FALSE(sigma_witness_valid(stmt, wit_opening(4, 8)));
    CHECK_FALSE(sigma_witness_valid(stmt, wit_dlog(4)));
}

TEST_CASE("or composition proves either side without revealing which") {
    GroupParams g = GroupParams::toy();
    // Left witness known: x = 4 with y = g^4; right y = g^7 stays unproven.
    SigmaStatement stmt = stmt_or(stmt_dlog(g, g.pow_g(4)), stmt_dlog(g, g.pow_g(7)));
    Rng rng(23);
    for (uint64_t ev = 0; ev < 16; ++ev) {
        BitString e = BitString::from_uint(ev, 4);
        SigmaProver left(stmt, wit_or_left(wit_dlog(4)), rng);
        SigmaTranscript tl{left.commit(), e, {}};
        tl.z = left.respond(e);
        CHECK(sigma_verify(stmt, tl).ok);
        // Child challenges must XOR to the outer challenge.
        CHECK(tl.z.children[0].first.xored(tl.z.children[1].first) == e);
    }
    SigmaStatement stmt2 = stmt_or(stmt_dlog(g, g.pow_g(4)), stmt_dlog(g, g.pow_g(7)));
    SigmaProver right(stmt2, wit_or_right(wit_dlog(7)), rng);
    SigmaTranscript tr{right.commit(), BitString::from_uint(9, 4), {}};
    tr.z = right.respond(tr.e);
    CHECK(sigma_verify(stmt2, tr).ok);

    CHECK(sigma_witness_valid(stmt, wit_or_left(wit_dlog(4))));
    CHECK(sigma_witness_valid(stmt, wit_or_right(wit_dlog(7))));
    CHECK_FALSE(sigma_witness_valid(stmt, wit_or_left(wit_dlog(7))));
}

TEST_CASE("or extraction recurses into the branch whose challenges differ") {
    GroupParams g = GroupParams::toy();
    SigmaStatement stmt = stmt_or(stmt_dlog(g, g.pow_g(4)), stmt_dlog(g, g.pow_g(7)));
    // Simulated-side challenge pinned to 0: the real branch sees the outer
    // challenge unchanged, so outer 0 vs 11 collides mod q on both branches
    // while outer 0 vs 1 extracts.
    auto at = [&](uint64_t ev) {
        FixedCoins coins;
        coins.chs = {BitString::zeros(4)};
        coins.exps = {bigint(6), bigint(3)};
        return run_prover(stmt, wit_or_left(wit_dlog(4)), coins, ev);
    };
    SigmaTranscript t1 = at(0);
    SigmaTranscript t2 = at(11);
    CHECK_THROWS_AS(sigma_extract(stmt, t1, t2), ExtractionImpossible);

    SigmaTranscript t3 = at(1);
    SigmaWitness w = sigma_extract(stmt, t1, t3);
    CHECK(w == wit_or_left(wit_dlog(4)));
    CHECK(sigma_witness_valid(stmt, w));
}

TEST_CASE("three-branch composition splits and reassembles") {
    GroupParams g = GroupParams::toy();
    bigint h = 8;
    bigint com = pedersen_commit(g, h, 2, 6);
    SigmaStatement stmt =
        stmt_or3(stmt_dlog(g, g.pow_g(5)), stmt_dlog(g, g.pow_g(9)), stmt_opening(g, h, com));
    CHECK(stmt.kind == SigmaStatement::Kind::Or);
    CHECK(stmt.children[1].kind == SigmaStatement::Kind::Or);

    Rng rng(31);
    for (size_t branch = 0; branch < 3; ++branch) {
        SigmaWitness w = branch == 0   ? wit_or3(0, wit_dlog(5))
                         : branch == 1 ? wit_or3(1, wit_dlog(9))
                                       : wit_or3(2, wit_opening(2, 6));
        CHECK(sigma_witness_valid(stmt, w));
        SigmaProver p(stmt, w, rng);
        SigmaTranscript tr{p.commit(), BitString::from_uint(13, 4), {}};
        tr.z = p.respond(tr.e);
        CHECK(sigma_verify(stmt, tr).ok);

        Or3Parts parts = or3_split(tr);
        CHECK(parts.e0.xored(parts.e1).xored(parts.e2) == tr.e);
        // Reassembling the split parts reproduces the transcript exactly.
        SigmaTranscript re{or3_commit(parts.a0, parts.a1, parts.a2), tr.e,
                           or3_response(parts.e0, parts.z0, parts.e1, parts.z1, parts.e2,
                                        parts.z2)};
        CHECK(re == tr);
        CHECK(sigma_verify(stmt, re).ok);
    }
}

TEST_CASE("canonical serializations are stable and label-sensitive") {
    GroupParams g = GroupParams::toy();
    SigmaStatement plain = stmt_dlog(g, 8);
    SigmaStatement tagged = stmt_dlog(g, 8, "vk=16");
    CHECK(sigma_stmt_canon(plain) == sigma_stmt_canon(plain));
    CHECK(sigma_stmt_canon(plain) != sigma_stmt_canon(tagged));
    CHECK(sigma_stmt_canon(tagged).find("vk=16") != std::string::npos);

    Rng rng(5);
    SigmaProver p(plain, wit_dlog(3), rng);
    SigmaTranscript tr{p.commit(), BitString::from_uint(7, 4), {}};
    tr.z = p.respond(tr.e);
    CHECK(sigma_transcript_canon(tr) == sigma_transcript_canon(tr));
    CHECK(sigma_commit_canon(tr.a) != sigma_response_canon(tr.z));
    json j = sigma_transcript_json(tr);
    CHECK(j.contains("e"));
}
