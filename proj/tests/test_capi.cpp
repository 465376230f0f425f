// The extern-C boundary: config handles, the pipeline entry points, error
// code mapping, and artifact round-trips, exactly as a foreign caller
// would see them.
#include <doctest.h>

#include <cstring>
#include <string>

#include <bpkcnm.h>

#include "serialize.hpp"

using bpkcnm::json;

namespace {

// Small, fast parameters shared by every pipeline call here.
bpkcnm_config* small_config(long long seed) {
    bpkcnm_config* cfg = bpkcnm_config_new();
    REQUIRE(cfg != nullptr);
    REQUIRE(bpkcnm_config_set_int(cfg, "n", 8) == BPKCNM_OK);
    REQUIRE(bpkcnm_config_set_int(cfg, "s", 2) == BPKCNM_OK);
    REQUIRE(bpkcnm_config_set_int(cfg, "prf_input_len", 8) == BPKCNM_OK);
    REQUIRE(bpkcnm_config_set_int(cfg, "seed", seed) == BPKCNM_OK);
    return cfg;
}

json result_artifact(bpkcnm_result* res) {
    REQUIRE(res != nullptr);
    CHECK(bpkcnm_result_status(res) == BPKCNM_OK);
    json artifact = json::parse(bpkcnm_result_json(res));
    bpkcnm_result_destroy(res);
    return artifact;
}

}  // namespace

TEST_CASE("config handles accept known keys and name unknown ones") {
    bpkcnm_config* cfg = bpkcnm_config_new();
    REQUIRE(cfg != nullptr);

    CHECK(bpkcnm_config_set_int(cfg, "seed", 42) == BPKCNM_OK);
    CHECK(bpkcnm_config_set_int(cfg, "action_budget", 500) == BPKCNM_OK);
    CHECK(bpkcnm_config_set_str(cfg, "group", "toy") == BPKCNM_OK);
    CHECK(bpkcnm_config_set_str(cfg, "crs", "prg-seed") == BPKCNM_OK);
    CHECK(bpkcnm_config_set_str(cfg, "adversary", "null") == BPKCNM_OK);

    CHECK(bpkcnm_config_set_int(cfg, "bogus", 1) == BPKCNM_ERR_CONFIG);
    CHECK(std::string(bpkcnm_last_error()).find("bogus") != std::string::npos);
    CHECK(bpkcnm_config_set_int(cfg, "seed", -3) == BPKCNM_ERR_CONFIG);
    CHECK(bpkcnm_config_set_str(cfg, "group", "imaginary") == BPKCNM_ERR_CONFIG);
    CHECK(bpkcnm_config_set_str(cfg, "crs", "whatever") == BPKCNM_ERR_CONFIG);

    // Null arguments are reported, not dereferenced.
    CHECK(bpkcnm_config_set_int(nullptr, "seed", 1) == BPKCNM_ERR_CONFIG);
    CHECK(bpkcnm_config_set_str(cfg, nullptr, "x") == BPKCNM_ERR_CONFIG);

    bpkcnm_config_destroy(cfg);
}

TEST_CASE("the run pipeline emits a classified trace artifact") {
    bpkcnm_config* cfg = small_config(5);
    bpkcnm_result* res = nullptr;
    REQUIRE(bpkcnm_run(cfg, &res) == BPKCNM_OK);
    json artifact = result_artifact(res);

    CHECK(artifact.at("manifest").at("command") == "run");
    CHECK(artifact.at("manifest").at("tool") == "bpkcnm");
    CHECK(artifact.at("manifest").at("config").at("n") == 8);
    CHECK(artifact.at("manifest").at("deviations").empty());
    CHECK(artifact.at("trace").at("left_sessions").size() == 2);
    CHECK(artifact.at("classification").at("valid") == true);

    // The artifact feeds straight back into classification.
    bpkcnm_result* cls = nullptr;
    std::string text = artifact.dump();
    REQUIRE(bpkcnm_classify(text.c_str(), &cls) == BPKCNM_OK);
    json classified = result_artifact(cls);
    CHECK(classified.at("manifest").at("command") == "classify");
    CHECK(classified.at("classification") == artifact.at("classification"));

    bpkcnm_config_destroy(cfg);
}

TEST_CASE("the simulate pipeline reports a completed simulation") {
    bpkcnm_config* cfg = small_config(9);
    bpkcnm_result* res = nullptr;
    REQUIRE(bpkcnm_simulate(cfg, &res) == BPKCNM_OK);
    json artifact = result_artifact(res);

    CHECK(artifact.at("manifest").at("command") == "simulate");
    const json& sim = artifact.at("simulation");
    CHECK(sim.at("completed") == true);
    CHECK(sim.at("extraction_failed") == false);
    CHECK(sim.at("repetitions") == 1);
    CHECK(sim.at("classification").at("pattern") == "copying");

    bpkcnm_config_destroy(cfg);
}

TEST_CASE("the attack pipeline insists on the interleaver") {
    bpkcnm_config* cfg = small_config(1);

    bpkcnm_result* res = nullptr;
    CHECK(bpkcnm_attack(cfg, &res) == BPKCNM_ERR_CONFIG);
    CHECK(std::string(bpkcnm_last_error()).find("interleaver") != std::string::npos);

    // And conversely, the coin-toss pipelines refuse it.
    REQUIRE(bpkcnm_config_set_str(cfg, "adversary", "interleaver") == BPKCNM_OK);
    CHECK(bpkcnm_run(cfg, &res) == BPKCNM_ERR_CONFIG);
    CHECK(std::string(bpkcnm_last_error()).find("interleaver") != std::string::npos);

    REQUIRE(bpkcnm_attack(cfg, &res) == BPKCNM_OK);
    json artifact = result_artifact(res);
    CHECK(artifact.at("manifest").at("command") == "attack");
    CHECK(artifact.at("attack").at("success") == true);
    CHECK(artifact.at("attack").at("patched_success") == false);

    bpkcnm_config_destroy(cfg);
}

TEST_CASE("the probe pipeline runs trials and checks its arguments") {
    bpkcnm_config* cfg = small_config(13);
    bpkcnm_result* res = nullptr;
    REQUIRE(bpkcnm_probe_ski(cfg, "const-true", 2, &res) == BPKCNM_OK);
    json artifact = result_artifact(res);

    CHECK(artifact.at("manifest").at("command") == "probe-ski");
    CHECK(artifact.at("probe").at("trials") == 2);
    CHECK(artifact.at("probe").at("freq_sk").get<double>() == 1.0);
    CHECK(artifact.at("probe").at("freq_sk_prime").get<double>() == 1.0);

    CHECK(bpkcnm_probe_ski(cfg, "const-true", 0, &res) == BPKCNM_ERR_CONFIG);
    CHECK(bpkcnm_probe_ski(cfg, "no-such-relation", 1, &res) == BPKCNM_ERR_CONFIG);
    CHECK(bpkcnm_probe_ski(cfg, nullptr, 1, &res) == BPKCNM_ERR_CONFIG);

    bpkcnm_config_destroy(cfg);
}

TEST_CASE("classification rejects junk with the right status codes") {
    bpkcnm_result* res = nullptr;
    CHECK(bpkcnm_classify("not json at all", &res) == BPKCNM_ERR_PROTOCOL);
    CHECK(std::string(bpkcnm_last_error()).find("malformed input") != std::string::npos);
    CHECK(bpkcnm_classify("{}", &res) == BPKCNM_ERR_CONFIG);
    CHECK(bpkcnm_classify(nullptr, &res) == BPKCNM_ERR_CONFIG);
}

TEST_CASE("versioning and result accessors tolerate nulls") {
    CHECK(std::strcmp(bpkcnm_version(), "1.0.0") == 0);
    CHECK(std::strcmp(bpkcnm_result_json(nullptr), "") == 0);
    CHECK(bpkcnm_result_status(nullptr) == BPKCNM_ERR_CONFIG);

    bpkcnm_result* res = nullptr;
    CHECK(bpkcnm_run(nullptr, &res) == BPKCNM_ERR_CONFIG);
    bpkcnm_config* cfg = small_config(1);
    CHECK(bpkcnm_run(cfg, nullptr) == BPKCNM_ERR_CONFIG);
    bpkcnm_config_destroy(cfg);
}
