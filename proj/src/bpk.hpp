// Bare public-key registration: key generation for both player roles and the
// public file that freezes before any session starts.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bitstring.hpp"
#include "config.hpp"
#include "naor.hpp"
#include "rng.hpp"

namespace bpkcnm {

// Left key: a bitwise commitment to an n-bit PRF seed.  The receiver string
// is part of the public key; every commitment the owner later makes in a
// session reuses it.
struct LeftKeyPair {
    std::vector<BitString> pk_values;  // n commitment values
    BitString receiver;                // R, 3n bits
    BitString sigma;                   // secret: n-bit PRF seed
    std::vector<BitString> seeds;      // secret: n commitment seeds
};

// Right key: two images of the exponent map, one known preimage.  The other
// preimage is drawn, used for the image, and dropped on the floor here —
// the pair type never holds it.
struct RightKeyPair {
    bigint y0 = 0;
    bigint y1 = 0;
    bigint sk = 0;  // preimage of y0 or y1
    int side = 0;   // which image sk maps to
};

LeftKeyPair gen_left_key(const Env& env, Rng& rng);
RightKeyPair gen_right_key(const GroupParams& group, Rng& rng);

bool validate_left_key(const Env& env, const LeftKeyPair& kp);
bool validate_right_key(const GroupParams& group, const RightKeyPair& kp);

// Wire/registration forms.  Registered keys are opaque json blobs; parsing
// happens at the point of use and failure just means no session against
// that key can complete.
json left_pk_json(const LeftKeyPair& kp);
json right_pk_json(const RightKeyPair& kp);

struct ParsedLeftPk {
    std::vector<BitString> values;
    BitString receiver;
};
std::optional<ParsedLeftPk> parse_left_pk(const Env& env, const json& key);

struct ParsedRightPk {
    bigint y0 = 0;
    bigint y1 = 0;
};
std::optional<ParsedRightPk> parse_right_pk(const GroupParams& group, const json& key);

// Canonical byte identity of a registered key (tags and the covered-key set
// go by these, so a byte-copied key is the same key and a tweaked one is
// not).
std::string key_canon(const json& key);

// Framed one-line records of the secret material; the secrecy scans look
// for exactly these strings.
std::string secret_record_left(const LeftKeyPair& kp);
std::string secret_record_right(const RightKeyPair& kp);

struct PublicFileEntry {
    size_t id = 0;
    std::string owner;  // "left-player" | "right-player" | "adversary"
    json key;
};

// The registration directory: honest keys first, then at most s_limit
// adversary keys, then frozen for the rest of the experiment.
class PublicFile {
public:
    size_t add(const std::string& owner, json key);
    void freeze();
    bool frozen() const { return frozen_; }
    size_t size() const { return entries_.size(); }
    const PublicFileEntry& at(size_t id) const;
    json to_json() const;

    static PublicFile build(json left_pk, json right_pk, const std::vector<json>& adversary_keys,
                            size_t s_limit);

private:
    std::vector<PublicFileEntry> entries_;
    bool frozen_ = false;
};

}  // namespace bpkcnm
