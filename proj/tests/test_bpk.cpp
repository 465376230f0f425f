// Key generation, registration forms, and the frozen public file.
#include <doctest.h>

#include <string>
#include <vector>

#include "bpk.hpp"
#include "config.hpp"
#include "rng.hpp"

using namespace bpkcnm;

namespace {

Env small_env() {
    Config cfg;
    cfg.n = 4;
    cfg.prf_input_len = 4;
    return Env::from(cfg);
}

}  // namespace

TEST_CASE("left keys validate and survive the wire round-trip") {
    Env env = small_env();
    Rng rng(61);
    LeftKeyPair kp = gen_left_key(env, rng);
    CHECK(kp.pk_values.size() == env.n);
    CHECK(kp.receiver.size() == 3 * env.n);
    CHECK(kp.sigma.size() == env.n);
    CHECK(validate_left_key(env, kp));

    // The public part re-parses to the same values.
    json pk = left_pk_json(kp);
    auto parsed = parse_left_pk(env, pk);
    REQUIRE(parsed.has_value());
    CHECK(parsed->values == kp.pk_values);
    CHECK(parsed->receiver == kp.receiver);

    // A flipped seed bit no longer opens the commitments.
    LeftKeyPair bad = kp;
    bad.sigma.set_bit(0, 1 - bad.sigma.bit(0));
    CHECK_FALSE(validate_left_key(env, bad));
}

TEST_CASE("right keys validate and expose images only") {
    Env env = small_env();
    Rng rng(62);
    RightKeyPair kp = gen_right_key(env.group, rng);
    CHECK(validate_right_key(env.group, kp));
    CHECK(env.group.owf_eval(kp.sk) == (kp.side == 0 ? kp.y0 : kp.y1));

    json pk = right_pk_json(kp);
    CHECK_FALSE(pk.contains("sk"));
    auto parsed = parse_right_pk(env.group, pk);
    REQUIRE(parsed.has_value());
    CHECK(parsed->y0 == kp.y0);
    CHECK(parsed->y1 == kp.y1);

    RightKeyPair bad = kp;
    bad.sk = (bad.sk + 1) % env.group.q;
    CHECK_FALSE(validate_right_key(env.group, bad));
}

TEST_CASE("garbage registration blobs parse to nothing") {
    Env env = small_env();
    CHECK_FALSE(parse_left_pk(env, json{{"nope", 1}}).has_value());
    CHECK_FALSE(parse_left_pk(env, json::array()).has_value());
    // Role tag, field presence, and numeric range are all enforced.
    CHECK_FALSE(parse_right_pk(env.group, json{{"y0", "8"}, {"y1", "8"}}).has_value());
    CHECK_FALSE(
        parse_right_pk(env.group, json{{"role", "R"}, {"y0", "zzz"}, {"y1", "8"}}).has_value());
    CHECK_FALSE(
        parse_right_pk(env.group, json{{"role", "R"}, {"y0", "25"}, {"y1", "8"}}).has_value());
    CHECK_FALSE(
        parse_right_pk(env.group, json{{"role", "R"}, {"y0", "0"}, {"y1", "8"}}).has_value());

    Rng rng(63);
    LeftKeyPair kp = gen_left_key(env, rng);
    json pk = left_pk_json(kp);
    json wrong_len = pk;
    wrong_len["c"].erase(0);
    CHECK_FALSE(parse_left_pk(env, wrong_len).has_value());
    json wrong_role = pk;
    wrong_role["role"] = "R";
    CHECK_FALSE(parse_left_pk(env, wrong_role).has_value());
}

TEST_CASE("key identity is canonical bytes") {
    Env env = small_env();
    Rng rng(64);
    LeftKeyPair kp = gen_left_key(env, rng);
    json pk = left_pk_json(kp);
    json copy = json::parse(pk.dump());
    CHECK(key_canon(pk) == key_canon(copy));

    RightKeyPair rk = gen_right_key(env.group, rng);
    CHECK(key_canon(right_pk_json(rk)) != key_canon(pk));

    // Same content, one flipped bit: a different key.
    LeftKeyPair kp2 = kp;
    kp2.pk_values[0].set_bit(0, 1 - kp2.pk_values[0].bit(0));
    CHECK(key_canon(left_pk_json(kp2)) != key_canon(pk));
}

TEST_CASE("public file freezes after registration") {
    Env env = small_env();
    Rng rng(65);
    LeftKeyPair lk = gen_left_key(env, rng);
    RightKeyPair rk = gen_right_key(env.group, rng);
    RightKeyPair adv = gen_right_key(env.group, rng);

    PublicFile file =
        PublicFile::build(left_pk_json(lk), right_pk_json(rk), {right_pk_json(adv)}, 2);
    CHECK(file.frozen());
    CHECK(file.size() == 3);
    CHECK(file.at(0).owner == "left-player");
    CHECK(file.at(1).owner == "right-player");
    CHECK(file.at(2).owner == "adversary");
    CHECK_THROWS_AS(file.at(3), std::out_of_range);
    CHECK_THROWS_AS(file.add("adversary", json::object()), std::logic_error);
    CHECK(file.to_json().size() == 3);

    // The session bound caps adversary registrations.
    std::vector<json> too_many(3, right_pk_json(adv));
    CHECK_THROWS_AS(PublicFile::build(left_pk_json(lk), right_pk_json(rk), too_many, 2),
                    std::invalid_argument);
}

TEST_CASE("secret records are framed one-liners") {
    Env env = small_env();
    Rng rng(66);
    LeftKeyPair lk = gen_left_key(env, rng);
    RightKeyPair rk = gen_right_key(env.group, rng);

    std::string ls = secret_record_left(lk);
    CHECK(ls.rfind("lsk:", 0) == 0);
    CHECK(ls.find(lk.sigma.to_hex()) != std::string::npos);

    std::string rs = secret_record_right(rk);
    CHECK(rs == "rsk:" + bigint_to_dec(rk.sk) + ":" + bigint_to_dec(rk.y0) + ":" +
                    bigint_to_dec(rk.y1));

    // Neither record leaks through the registration forms.
    CHECK(left_pk_json(lk).dump().find(lk.sigma.to_hex()) == std::string::npos);
    CHECK(left_pk_json(lk).dump().find(ls) == std::string::npos);
    CHECK(right_pk_json(rk).dump().find(rs) == std::string::npos);
}
