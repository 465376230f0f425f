#include "bpk.hpp"

#include <sstream>
#include <stdexcept>

namespace bpkcnm {

LeftKeyPair gen_left_key(const Env& env, Rng& rng) {
    LeftKeyPair kp;
    kp.receiver = rng.bits(3 * env.n);
    kp.sigma = rng.bits(env.n);
    for (size_t i = 0; i < env.n; ++i) {
        BitString seed = rng.bits(env.n);
        kp.seeds.push_back(seed);
        kp.pk_values.push_back(naor_commit(env, kp.sigma.bit(i), seed, kp.receiver).value);
    }
    return kp;
}

RightKeyPair gen_right_key(const GroupParams& group, Rng& rng) {
    // Draw both preimages, publish both images, keep only one preimage.
    bigint s0 = group.random_exponent(rng);
    bigint s1 = group.random_exponent(rng);
    int side = static_cast<int>(rng.below(2));
    RightKeyPair kp;
    kp.y0 = group.owf_eval(s0);
    kp.y1 = group.owf_eval(s1);
    kp.sk = side == 0 ? s0 : s1;
    kp.side = side;
    return kp;
}

bool validate_left_key(const Env& env, const LeftKeyPair& kp) {
    if (kp.sigma.size() != env.n) return false;
    if (kp.receiver.size() != 3 * env.n) return false;
    if (kp.pk_values.size() != env.n || kp.seeds.size() != env.n) return false;
    for (size_t i = 0; i < env.n; ++i) {
        NaorCommitment com{kp.receiver, kp.pk_values[i]};
        NaorOpening open{kp.sigma.bit(i), kp.seeds[i]};
        if (!naor_verify(env, com, open)) return false;
    }
    return true;
}

bool validate_right_key(const GroupParams& group, const RightKeyPair& kp) {
    if (kp.sk < 0 || kp.sk >= group.q) return false;
    bigint y = group.owf_eval(kp.sk);
    if (kp.side == 0) return y == kp.y0 && group.is_member(kp.y1);
    return y == kp.y1 && group.is_member(kp.y0);
}

json left_pk_json(const LeftKeyPair& kp) {
    json values = json::array();
    for (const BitString& v : kp.pk_values) values.push_back(v.to_hex());
    return json{{"role", "L"}, {"c", values}, {"R", kp.receiver.to_hex()}};
}

json right_pk_json(const RightKeyPair& kp) {
    return json{{"role", "R"}, {"y0", bigint_to_dec(kp.y0)}, {"y1", bigint_to_dec(kp.y1)}};
}

std::optional<ParsedLeftPk> parse_left_pk(const Env& env, const json& key) {
    try {
        if (!key.is_object() || key.value("role", "") != "L") return std::nullopt;
        ParsedLeftPk out;
        out.receiver = BitString::parse_hex(key.at("R").get<std::string>());
        if (out.receiver.size() != 3 * env.n) return std::nullopt;
        for (const auto& v : key.at("c")) {
            BitString value = BitString::parse_hex(v.get<std::string>());
            if (value.size() != 3 * env.n) return std::nullopt;
            out.values.push_back(value);
        }
        if (out.values.size() != env.n) return std::nullopt;
        return out;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<ParsedRightPk> parse_right_pk(const GroupParams& group, const json& key) {
    try {
        if (!key.is_object() || key.value("role", "") != "R") return std::nullopt;
        ParsedRightPk out;
        out.y0 = bigint(key.at("y0").get<std::string>());
        out.y1 = bigint(key.at("y1").get<std::string>());
        if (out.y0 <= 0 || out.y0 >= group.p) return std::nullopt;
        if (out.y1 <= 0 || out.y1 >= group.p) return std::nullopt;
        return out;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string key_canon(const json& key) { return key.dump(); }

std::string secret_record_left(const LeftKeyPair& kp) {
    std::ostringstream os;
    os << "lsk:" << kp.sigma.to_hex();
    for (const BitString& s : kp.seeds) os << ":" << s.to_hex();
    return os.str();
}

std::string secret_record_right(const RightKeyPair& kp) {
    std::ostringstream os;
    os << "rsk:" << bigint_to_dec(kp.sk) << ":" << bigint_to_dec(kp.y0) << ":"
       << bigint_to_dec(kp.y1);
    return os.str();
}

size_t PublicFile::add(const std::string& owner, json key) {
    if (frozen_) throw std::logic_error("public file is frozen");
    PublicFileEntry e;
    e.id = entries_.size();
    e.owner = owner;
    e.key = std::move(key);
    entries_.push_back(std::move(e));
    return entries_.back().id;
}

void PublicFile::freeze() { frozen_ = true; }

const PublicFileEntry& PublicFile::at(size_t id) const {
    if (id >= entries_.size()) throw std::out_of_range("no such public file entry");
    return entries_[id];
}

json PublicFile::to_json() const {
    json out = json::array();
    for (const PublicFileEntry& e : entries_) {
        out.push_back({{"id", e.id}, {"owner", e.owner}, {"key", e.key}});
    }
    return out;
}

PublicFile PublicFile::build(json left_pk, json right_pk, const std::vector<json>& adversary_keys,
                             size_t s_limit) {
    if (adversary_keys.size() > s_limit) {
        throw std::invalid_argument("adversary registered more keys than the session bound");
    }
    PublicFile f;
    f.add("left-player", std::move(left_pk));
    f.add("right-player", std::move(right_pk));
    for (const json& k : adversary_keys) f.add("adversary", k);
    f.freeze();
    return f;
}

}  // namespace bpkcnm
