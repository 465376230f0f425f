#include "sigma.hpp"

#include <sstream>

namespace bpkcnm {

SigmaStatement stmt_dlog(const GroupParams& group, const bigint& y, const std::string& label) {
    SigmaStatement s;
    s.kind = SigmaStatement::Kind::Dlog;
    s.group = group;
    s.y = y;
    s.label = label;
    return s;
}

SigmaStatement stmt_opening(const GroupParams& group, const bigint& h, const bigint& com,
                            const std::string& label) {
    SigmaStatement s;
    s.kind = SigmaStatement::Kind::Opening;
    s.group = group;
    s.h = h;
    s.com = com;
    s.label = label;
    return s;
}

SigmaStatement stmt_or(SigmaStatement left, SigmaStatement right) {
    SigmaStatement s;
    s.kind = SigmaStatement::Kind::Or;
    s.group = left.group;
    s.children.push_back(std::move(left));
    s.children.push_back(std::move(right));
    return s;
}

SigmaStatement stmt_or3(SigmaStatement first, SigmaStatement second, SigmaStatement third) {
    return stmt_or(std::move(first), stmt_or(std::move(second), std::move(third)));
}

SigmaWitness wit_dlog(const bigint& x) {
    SigmaWitness w;
    w.kind = SigmaWitness::Kind::Dlog;
    w.x = x;
    return w;
}

SigmaWitness wit_opening(const bigint& m, const bigint& r) {
    SigmaWitness w;
    w.kind = SigmaWitness::Kind::Opening;
    w.m = m;
    w.r = r;
    return w;
}

SigmaWitness wit_or_left(SigmaWitness inner) {
    SigmaWitness w;
    w.kind = SigmaWitness::Kind::OrLeft;
    w.child.push_back(std::move(inner));
    return w;
}

SigmaWitness wit_or_right(SigmaWitness inner) {
    SigmaWitness w;
    w.kind = SigmaWitness::Kind::OrRight;
    w.child.push_back(std::move(inner));
    return w;
}

SigmaWitness wit_or3(size_t index, SigmaWitness w) {
    switch (index) {
        case 0: return wit_or_left(std::move(w));
        case 1: return wit_or_right(wit_or_left(std::move(w)));
        case 2: return wit_or_right(wit_or_right(std::move(w)));
    }
    throw std::domain_error("wit_or3: index must be 0, 1 or 2");
}

bool sigma_witness_valid(const SigmaStatement& stmt, const SigmaWitness& w) {
    const GroupParams& g = stmt.group;
    switch (w.kind) {
        case SigmaWitness::Kind::Dlog:
            return stmt.kind == SigmaStatement::Kind::Dlog && w.x >= 0 && w.x < g.q &&
                   g.pow_g(w.x) == stmt.y;
        case SigmaWitness::Kind::Opening:
            return stmt.kind == SigmaStatement::Kind::Opening && w.m >= 0 && w.m < g.q &&
                   w.r >= 0 && w.r < g.q &&
                   (g.pow_g(w.m) * powm(stmt.h, w.r, g.p)) % g.p == stmt.com;
        case SigmaWitness::Kind::OrLeft:
            return stmt.kind == SigmaStatement::Kind::Or && w.child.size() == 1 &&
                   sigma_witness_valid(stmt.children[0], w.child[0]);
        case SigmaWitness::Kind::OrRight:
            return stmt.kind == SigmaStatement::Kind::Or && w.child.size() == 1 &&
                   sigma_witness_valid(stmt.children[1], w.child[0]);
    }
    return false;
}

BitString sample_challenge(const GroupParams& group, Rng& rng) {
    // Honest verifiers draw from [0, q); the t-bit wire format still lets a
    // dishonest party send anything in [0, 2^t).
    return bigint_to_bits(group.random_exponent(rng), group.challenge_bits());
}

bigint challenge_value(const GroupParams& group, const BitString& e) {
    return bits_to_bigint(e) % group.q;
}

namespace {

// Inverse of y^e in Z_p^*; works for elements outside the order-q subgroup
// too, which simulated transcripts for non-subgroup targets need.
bigint neg_power(const bigint& y, const bigint& e, const bigint& p) {
    return mod_inverse(powm(y, e, p), p);
}

bigint norm_q(bigint v, const bigint& q) {
    v %= q;
    if (v < 0) v += q;
    return v;
}

SigmaTranscript simulate_node(const SigmaStatement& stmt, const BitString& e, CoinSource& coins);

SigmaCommitMsg simulate_commit(const SigmaStatement& stmt, const BitString& e,
                               const bigint& eval, std::vector<bigint> z) {
    const GroupParams& g = stmt.group;
    SigmaCommitMsg a;
    switch (stmt.kind) {
        case SigmaStatement::Kind::Dlog:
            a.a.push_back(g.pow_g(z[0]) * neg_power(stmt.y, eval, g.p) % g.p);
            break;
        case SigmaStatement::Kind::Opening:
            a.a.push_back(g.pow_g(z[0]) * powm(stmt.h, z[1], g.p) % g.p *
                          neg_power(stmt.com, eval, g.p) % g.p);
            break;
        case SigmaStatement::Kind::Or:
            throw std::logic_error("simulate_commit: leaf only");
    }
    (void)e;
    return a;
}

SigmaTranscript simulate_node(const SigmaStatement& stmt, const BitString& e, CoinSource& coins) {
    const GroupParams& g = stmt.group;
    if (e.size() != g.challenge_bits())
        throw std::domain_error("sigma_simulate: challenge must have t bits");
    SigmaTranscript tr;
    tr.e = e;
    if (stmt.kind == SigmaStatement::Kind::Or) {
        BitString e_left = coins.challenge(g.challenge_bits());
        BitString e_right = e.xored(e_left);
        SigmaTranscript left = simulate_node(stmt.children[0], e_left, coins);
        SigmaTranscript right = simulate_node(stmt.children[1], e_right, coins);
        tr.a.children.push_back(left.a);
        tr.a.children.push_back(right.a);
        tr.z.children.emplace_back(e_left, left.z);
        tr.z.children.emplace_back(e_right, right.z);
        return tr;
    }
    const bigint eval = challenge_value(g, e);
    std::vector<bigint> z;
    z.push_back(coins.exponent(g));
    if (stmt.kind == SigmaStatement::Kind::Opening) z.push_back(coins.exponent(g));
    tr.a = simulate_commit(stmt, e, eval, z);
    tr.z.z = std::move(z);
    return tr;
}

}  // namespace

// Per-node prover memory: leaf randomness, or the Or bookkeeping (which side
// is real, the pre-simulated other side).
struct SigmaProver::Node {
    SigmaStatement stmt;
    SigmaWitness witness;
    std::vector<bigint> k;          // leaf commitment randomness
    int real_side = -1;             // Or: 0 = left, 1 = right
    BitString e_sim;                // Or: pre-sampled challenge of the simulated side
    SigmaTranscript sim_tr;         // Or: simulated side's full transcript
    std::unique_ptr<Node> real_child;

    Node(const SigmaStatement& s, const SigmaWitness& w, CoinSource& coins) : stmt(s), witness(w) {
        const GroupParams& g = stmt.group;
        switch (stmt.kind) {
            case SigmaStatement::Kind::Dlog:
                k.push_back(coins.exponent(g));
                break;
            case SigmaStatement::Kind::Opening:
                k.push_back(coins.exponent(g));
                k.push_back(coins.exponent(g));
                break;
            case SigmaStatement::Kind::Or: {
                real_side = witness.kind == SigmaWitness::Kind::OrLeft ? 0 : 1;
                const SigmaStatement& sim_stmt = stmt.children[1 - real_side];
                e_sim = coins.challenge(g.challenge_bits());
                sim_tr = simulate_node(sim_stmt, e_sim, coins);
                real_child =
                    std::make_unique<Node>(stmt.children[real_side], witness.child[0], coins);
                break;
            }
        }
    }

    SigmaCommitMsg commit() const {
        SigmaCommitMsg a;
        const GroupParams& g = stmt.group;
        switch (stmt.kind) {
            case SigmaStatement::Kind::Dlog:
                a.a.push_back(g.pow_g(k[0]));
                break;
            case SigmaStatement::Kind::Opening:
                a.a.push_back(g.pow_g(k[0]) * powm(stmt.h, k[1], g.p) % g.p);
                break;
            case SigmaStatement::Kind::Or: {
                SigmaCommitMsg real_a = real_child->commit();
                if (real_side == 0) {
                    a.children.push_back(real_a);
                    a.children.push_back(sim_tr.a);
                } else {
                    a.children.push_back(sim_tr.a);
                    a.children.push_back(real_a);
                }
                break;
            }
        }
        return a;
    }

    SigmaResponse respond(const BitString& e) const {
        const GroupParams& g = stmt.group;
        if (e.size() != g.challenge_bits())
            throw std::domain_error("sigma_respond: challenge must have t bits");
        SigmaResponse z;
        const bigint eval = challenge_value(g, e);
        switch (stmt.kind) {
            case SigmaStatement::Kind::Dlog:
                z.z.push_back(norm_q(k[0] + eval * witness.x, g.q));
                break;
            case SigmaStatement::Kind::Opening:
                z.z.push_back(norm_q(k[0] + eval * witness.m, g.q));
                z.z.push_back(norm_q(k[1] + eval * witness.r, g.q));
                break;
            case SigmaStatement::Kind::Or: {
                BitString e_real = e.xored(e_sim);
                SigmaResponse real_z = real_child->respond(e_real);
                if (real_side == 0) {
                    z.children.emplace_back(e_real, real_z);
                    z.children.emplace_back(e_sim, sim_tr.z);
                } else {
                    z.children.emplace_back(e_sim, sim_tr.z);
                    z.children.emplace_back(e_real, real_z);
                }
                break;
            }
        }
        return z;
    }
};

SigmaProver::SigmaProver(const SigmaStatement& stmt, const SigmaWitness& witness,
                         CoinSource& coins) {
    if (!sigma_witness_valid(stmt, witness))
        throw std::domain_error("sigma prover: witness does not satisfy statement");
    root_ = std::make_shared<Node>(stmt, witness, coins);
    a_ = root_->commit();
    t_ = stmt.group.challenge_bits();
}

SigmaProver::SigmaProver(const SigmaStatement& stmt, const SigmaWitness& witness, Rng& rng) {
    if (!sigma_witness_valid(stmt, witness))
        throw std::domain_error("sigma prover: witness does not satisfy statement");
    RngCoins coins(rng);
    root_ = std::make_shared<Node>(stmt, witness, coins);
    a_ = root_->commit();
    t_ = stmt.group.challenge_bits();
}

SigmaResponse SigmaProver::respond(const BitString& e) {
    if (consumed_) throw std::logic_error("sigma prover: state already consumed");
    consumed_ = true;
    return root_->respond(e);
}

namespace {

bool verify_node(const SigmaStatement& stmt, const SigmaCommitMsg& a, const BitString& e,
                 const SigmaResponse& z, std::string& why) {
    const GroupParams& g = stmt.group;
    if (e.size() != g.challenge_bits()) {
        why = "challenge length mismatch";
        return false;
    }
    if (stmt.kind == SigmaStatement::Kind::Or) {
        if (a.children.size() != 2 || !a.a.empty() || z.children.size() != 2 || !z.z.empty()) {
            why = "malformed or-node message";
            return false;
        }
        if (z.children[0].first.xored(z.children[1].first) != e) {
            why = "child challenges do not split the challenge";
            return false;
        }
        return verify_node(stmt.children[0], a.children[0], z.children[0].first,
                           z.children[0].second, why) &&
               verify_node(stmt.children[1], a.children[1], z.children[1].first,
                           z.children[1].second, why);
    }
    const size_t want = stmt.kind == SigmaStatement::Kind::Dlog ? 1 : 2;
    if (a.a.size() != 1 || !a.children.empty() || z.z.size() != want || !z.children.empty()) {
        why = "malformed leaf message";
        return false;
    }
    if (a.a[0] <= 0 || a.a[0] >= g.p) {
        why = "first message out of range";
        return false;
    }
    for (const bigint& v : z.z)
        if (v < 0 || v >= g.q) {
            why = "response out of range";
            return false;
        }
    const bigint eval = challenge_value(g, e);
    if (stmt.kind == SigmaStatement::Kind::Dlog) {
        if (g.pow_g(z.z[0]) != a.a[0] * powm(stmt.y, eval, g.p) % g.p) {
            why = "dlog equation fails";
            return false;
        }
    } else {
        bigint lhs = g.pow_g(z.z[0]) * powm(stmt.h, z.z[1], g.p) % g.p;
        if (lhs != a.a[0] * powm(stmt.com, eval, g.p) % g.p) {
            why = "opening equation fails";
            return false;
        }
    }
    return true;
}

}  // namespace

SigmaVerdict sigma_verify(const SigmaStatement& stmt, const SigmaTranscript& tr) {
    SigmaVerdict v;
    v.ok = verify_node(stmt, tr.a, tr.e, tr.z, v.reason);
    if (v.ok) v.reason.clear();
    return v;
}

SigmaTranscript sigma_simulate(const SigmaStatement& stmt, const BitString& e, CoinSource& coins) {
    return simulate_node(stmt, e, coins);
}

SigmaTranscript sigma_simulate(const SigmaStatement& stmt, const BitString& e, Rng& rng) {
    RngCoins coins(rng);
    return simulate_node(stmt, e, coins);
}

namespace {

SigmaWitness extract_node(const SigmaStatement& stmt, const SigmaCommitMsg& a, const BitString& e1,
                          const SigmaResponse& z1, const BitString& e2, const SigmaResponse& z2) {
    const GroupParams& g = stmt.group;
    if (stmt.kind == SigmaStatement::Kind::Or) {
        // Recurse into a branch whose challenges differ; with wrap-around
        // (distinct bits, equal mod q) a branch can still be unextractable,
        // so fall through to the other one.
        std::string last = "no branch with differing challenges";
        for (int side = 0; side < 2; ++side) {
            if (z1.children[side].first == z2.children[side].first) continue;
            try {
                SigmaWitness w = extract_node(stmt.children[side], a.children[side],
                                              z1.children[side].first, z1.children[side].second,
                                              z2.children[side].first, z2.children[side].second);
                return side == 0 ? wit_or_left(std::move(w)) : wit_or_right(std::move(w));
            } catch (const ExtractionImpossible& ex) {
                last = ex.what();
            }
        }
        throw ExtractionImpossible(last);
    }
    const bigint ev1 = challenge_value(g, e1);
    const bigint ev2 = challenge_value(g, e2);
    if (ev1 == ev2) throw ExtractionImpossible("challenges collide mod q");
    const bigint dinv = mod_inverse(norm_q(ev1 - ev2, g.q), g.q);
    if (stmt.kind == SigmaStatement::Kind::Dlog) {
        return wit_dlog(norm_q((z1.z[0] - z2.z[0]) * dinv, g.q));
    }
    return wit_opening(norm_q((z1.z[0] - z2.z[0]) * dinv, g.q),
                       norm_q((z1.z[1] - z2.z[1]) * dinv, g.q));
}

}  // namespace

SigmaWitness sigma_extract(const SigmaStatement& stmt, const SigmaTranscript& t1,
                           const SigmaTranscript& t2) {
    if (t1.e == t2.e) throw ExtractionImpossible("equal challenges");
    if (!(t1.a == t2.a)) throw std::invalid_argument("sigma_extract: first messages differ");
    if (!sigma_verify(stmt, t1).ok || !sigma_verify(stmt, t2).ok)
        throw std::invalid_argument("sigma_extract: non-accepting transcript");
    return extract_node(stmt, t1.a, t1.e, t1.z, t2.e, t2.z);
}

Or3Parts or3_split(const SigmaTranscript& tr) {
    if (tr.a.children.size() != 2 || tr.z.children.size() != 2)
        throw std::domain_error("or3_split: not an or transcript");
    const SigmaCommitMsg& inner_a = tr.a.children[1];
    const SigmaResponse& inner_z = tr.z.children[1].second;
    if (inner_a.children.size() != 2 || inner_z.children.size() != 2)
        throw std::domain_error("or3_split: right child is not an or transcript");
    Or3Parts p;
    p.a0 = tr.a.children[0];
    p.e0 = tr.z.children[0].first;
    p.z0 = tr.z.children[0].second;
    p.a1 = inner_a.children[0];
    p.e1 = inner_z.children[0].first;
    p.z1 = inner_z.children[0].second;
    p.a2 = inner_a.children[1];
    p.e2 = inner_z.children[1].first;
    p.z2 = inner_z.children[1].second;
    return p;
}

SigmaCommitMsg or3_commit(SigmaCommitMsg a0, SigmaCommitMsg a1, SigmaCommitMsg a2) {
    SigmaCommitMsg inner;
    inner.children.push_back(std::move(a1));
    inner.children.push_back(std::move(a2));
    SigmaCommitMsg outer;
    outer.children.push_back(std::move(a0));
    outer.children.push_back(std::move(inner));
    return outer;
}

SigmaResponse or3_response(const BitString& e0, SigmaResponse z0, const BitString& e1,
                           SigmaResponse z1, const BitString& e2, SigmaResponse z2) {
    SigmaResponse inner;
    inner.children.emplace_back(e1, std::move(z1));
    inner.children.emplace_back(e2, std::move(z2));
    SigmaResponse outer;
    outer.children.emplace_back(e0, std::move(z0));
    outer.children.emplace_back(e1.xored(e2), std::move(inner));
    return outer;
}

std::string sigma_stmt_canon(const SigmaStatement& stmt) {
    std::ostringstream os;
    switch (stmt.kind) {
        case SigmaStatement::Kind::Dlog:
            os << "dlog(y=" << stmt.y.str();
            break;
        case SigmaStatement::Kind::Opening:
            os << "open(h=" << stmt.h.str() << ",com=" << stmt.com.str();
            break;
        case SigmaStatement::Kind::Or:
            os << "or(" << sigma_stmt_canon(stmt.children[0]) << ","
               << sigma_stmt_canon(stmt.children[1]);
            break;
    }
    if (!stmt.label.empty()) os << ";lbl=" << stmt.label;
    os << ")";
    return os.str();
}

std::string sigma_commit_canon(const SigmaCommitMsg& a) {
    std::ostringstream os;
    if (a.children.empty()) {
        os << "[";
        for (size_t i = 0; i < a.a.size(); ++i) os << (i ? "," : "") << a.a[i].str();
        os << "]";
    } else {
        os << "(" << sigma_commit_canon(a.children[0]) << "|" << sigma_commit_canon(a.children[1])
           << ")";
    }
    return os.str();
}

std::string sigma_response_canon(const SigmaResponse& z) {
    std::ostringstream os;
    if (z.children.empty()) {
        os << "[";
        for (size_t i = 0; i < z.z.size(); ++i) os << (i ? "," : "") << z.z[i].str();
        os << "]";
    } else {
        os << "(" << z.children[0].first.to_hex() << ":" << sigma_response_canon(z.children[0].second)
           << "|" << z.children[1].first.to_hex() << ":" << sigma_response_canon(z.children[1].second)
           << ")";
    }
    return os.str();
}

std::string sigma_transcript_canon(const SigmaTranscript& tr) {
    return "a=" + sigma_commit_canon(tr.a) + " e=" + tr.e.to_hex() +
           " z=" + sigma_response_canon(tr.z);
}

namespace {

json commit_json(const SigmaCommitMsg& a) {
    json j;
    if (a.children.empty()) {
        json vals = json::array();
        for (const bigint& v : a.a) vals.push_back(v.str());
        j["a"] = vals;
    } else {
        j["children"] = json::array({commit_json(a.children[0]), commit_json(a.children[1])});
    }
    return j;
}

json response_json(const SigmaResponse& z) {
    json j;
    if (z.children.empty()) {
        json vals = json::array();
        for (const bigint& v : z.z) vals.push_back(v.str());
        j["z"] = vals;
    } else {
        json kids = json::array();
        for (const auto& [e, sub] : z.children) {
            json k;
            k["e"] = e.to_hex();
            k["z"] = response_json(sub);
            kids.push_back(k);
        }
        j["children"] = kids;
    }
    return j;
}

}  // namespace

json sigma_transcript_json(const SigmaTranscript& tr) {
    json j;
    j["a"] = commit_json(tr.a);
    j["e"] = tr.e.to_hex();
    j["z"] = response_json(tr.z);
    return j;
}

}  // namespace bpkcnm
