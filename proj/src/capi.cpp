// The extern-C boundary.  Exceptions stop here: every entry point catches,
// records the message for bpkcnm_last_error, and maps the failure class to
// a status code.
#include "bpkcnm.h"

#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "config.hpp"
#include "harness.hpp"
#include "selftest.hpp"
#include "serialize.hpp"
#include "simulator.hpp"
#include "strawman.hpp"

using bpkcnm::Config;
using bpkcnm::ConfigError;
using bpkcnm::json;

struct bpkcnm_config {
    Config cfg;
};

struct bpkcnm_result {
    std::string text;
    int status = BPKCNM_OK;
};

namespace {

constexpr const char* kVersion = "1.0.0";

thread_local std::string g_last_error;

json make_manifest(const std::string& command, const Config* cfg) {
    json m{{"tool", "bpkcnm"},
           {"version", kVersion},
           {"command", command},
           {"deviations", json::array()}};
    if (cfg) m["config"] = bpkcnm::config_to_json(*cfg);
    return m;
}

int deliver(bpkcnm_result** out, json artifact) {
    auto* res = new (std::nothrow) bpkcnm_result;
    if (!res) {
        g_last_error = "out of memory";
        return BPKCNM_ERR_INTERNAL;
    }
    res->text = artifact.dump(2);
    *out = res;
    return BPKCNM_OK;
}

// One catch ladder for every pipeline: configuration problems, protocol or
// input problems, internal invariant violations.
template <typename Fn>
int guarded(bpkcnm_result** out, Fn&& fn) {
    if (!out) {
        g_last_error = "output pointer is null";
        return BPKCNM_ERR_CONFIG;
    }
    try {
        return deliver(out, fn());
    } catch (const ConfigError& e) {
        g_last_error = e.what();
        return BPKCNM_ERR_CONFIG;
    } catch (const json::exception& e) {
        g_last_error = std::string("malformed input: ") + e.what();
        return BPKCNM_ERR_PROTOCOL;
    } catch (const std::logic_error& e) {
        g_last_error = std::string("internal invariant violated: ") + e.what();
        return BPKCNM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BPKCNM_ERR_PROTOCOL;
    } catch (...) {
        g_last_error = "unknown failure";
        return BPKCNM_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

bpkcnm_config* bpkcnm_config_new(void) { return new (std::nothrow) bpkcnm_config; }

void bpkcnm_config_destroy(bpkcnm_config* cfg) { delete cfg; }

int bpkcnm_config_set_int(bpkcnm_config* cfg, const char* key, long long value) {
    if (!cfg || !key) {
        g_last_error = "null config or key";
        return BPKCNM_ERR_CONFIG;
    }
    std::string k = key;
    if (value < 0) {
        g_last_error = "value for '" + k + "' must be non-negative";
        return BPKCNM_ERR_CONFIG;
    }
    auto v = static_cast<uint64_t>(value);
    if (k == "n") {
        cfg->cfg.n = static_cast<size_t>(v);
    } else if (k == "s") {
        cfg->cfg.s = static_cast<size_t>(v);
    } else if (k == "seed") {
        cfg->cfg.seed = v;
    } else if (k == "prf_input_len") {
        cfg->cfg.prf_input_len = static_cast<size_t>(v);
    } else if (k == "action_budget") {
        cfg->cfg.action_budget = static_cast<size_t>(v);
    } else if (k == "rewind_cap_factor") {
        cfg->cfg.rewind_cap_factor = static_cast<size_t>(v);
    } else {
        g_last_error = "unknown integer key: " + k;
        return BPKCNM_ERR_CONFIG;
    }
    return BPKCNM_OK;
}

int bpkcnm_config_set_str(bpkcnm_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        g_last_error = "null config, key, or value";
        return BPKCNM_ERR_CONFIG;
    }
    std::string k = key;
    std::string v = value;
    try {
        if (k == "group") {
            cfg->cfg.group_name = v;
        } else if (k == "backend") {
            cfg->cfg.backend = bpkcnm::aok_backend_by_name(v);
        } else if (k == "prg") {
            cfg->cfg.prg = bpkcnm::prg_backend_by_name(v);
        } else if (k == "crs") {
            cfg->cfg.crs = bpkcnm::crs_variant_by_name(v);
        } else if (k == "adversary") {
            cfg->cfg.adversary = v;
        } else if (k == "adversary_script") {
            cfg->cfg.adversary_script = v;
        } else if (k == "aux") {
            cfg->cfg.aux = v;
        } else {
            g_last_error = "unknown string key: " + k;
            return BPKCNM_ERR_CONFIG;
        }
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BPKCNM_ERR_CONFIG;
    }
    return BPKCNM_OK;
}

int bpkcnm_run(const bpkcnm_config* cfg, bpkcnm_result** out) {
    if (!cfg) {
        g_last_error = "null config";
        return BPKCNM_ERR_CONFIG;
    }
    return guarded(out, [&] {
        bpkcnm::validate_config(cfg->cfg, "run");
        bpkcnm::ExperimentResult res = bpkcnm::run_experiment(cfg->cfg);
        json artifact{{"manifest", make_manifest("run", &cfg->cfg)},
                      {"trace", res.trace.to_json()}};
        artifact["classification"] = bpkcnm::classify_trace(res.trace);
        return artifact;
    });
}

int bpkcnm_simulate(const bpkcnm_config* cfg, bpkcnm_result** out) {
    if (!cfg) {
        g_last_error = "null config";
        return BPKCNM_ERR_CONFIG;
    }
    return guarded(out, [&] {
        bpkcnm::validate_config(cfg->cfg, "simulate");
        bpkcnm::SimOutput sim = bpkcnm::simulate(cfg->cfg);
        return json{{"manifest", make_manifest("simulate", &cfg->cfg)},
                    {"simulation", sim.to_json()}};
    });
}

int bpkcnm_attack(const bpkcnm_config* cfg, bpkcnm_result** out) {
    if (!cfg) {
        g_last_error = "null config";
        return BPKCNM_ERR_CONFIG;
    }
    return guarded(out, [&] {
        bpkcnm::validate_config(cfg->cfg, "attack");
        bpkcnm::AttackResult res = bpkcnm::run_interleaving_attack(cfg->cfg);
        return json{{"manifest", make_manifest("attack", &cfg->cfg)},
                    {"attack", res.artifact()}};
    });
}

int bpkcnm_probe_ski(const bpkcnm_config* cfg, const char* relation, size_t trials,
                     bpkcnm_result** out) {
    if (!cfg || !relation) {
        g_last_error = "null config or relation";
        return BPKCNM_ERR_CONFIG;
    }
    std::string rel = relation;
    return guarded(out, [&, rel] {
        bpkcnm::validate_config(cfg->cfg, "probe-ski");
        if (trials == 0) throw ConfigError("probe needs at least one trial");
        bpkcnm::ProbeResult pr = bpkcnm::sk_independence_probe(cfg->cfg, rel, trials);
        return json{{"manifest", make_manifest("probe-ski", &cfg->cfg)},
                    {"probe", pr.to_json()}};
    });
}

int bpkcnm_classify(const char* artifact_json, bpkcnm_result** out) {
    if (!artifact_json) {
        g_last_error = "null artifact";
        return BPKCNM_ERR_CONFIG;
    }
    std::string text = artifact_json;
    return guarded(out, [text] {
        json parsed = json::parse(text);
        return json{{"manifest", make_manifest("classify", nullptr)},
                    {"classification", bpkcnm::classify_artifact_json(parsed)}};
    });
}

int bpkcnm_selftest(bpkcnm_result** out) {
    return guarded(out, [] {
        bpkcnm::SelftestReport report = bpkcnm::run_selftest();
        return json{{"manifest", make_manifest("selftest", nullptr)},
                    {"selftest", report.to_json()}};
    });
}

const char* bpkcnm_result_json(const bpkcnm_result* res) {
    return res ? res->text.c_str() : "";
}

int bpkcnm_result_status(const bpkcnm_result* res) {
    return res ? res->status : BPKCNM_ERR_CONFIG;
}

void bpkcnm_result_destroy(bpkcnm_result* res) { delete res; }

const char* bpkcnm_last_error(void) { return g_last_error.c_str(); }

const char* bpkcnm_version(void) { return kVersion; }

}  // extern "C"
