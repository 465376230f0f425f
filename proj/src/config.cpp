#include "config.hpp"

#include "prf.hpp"

namespace bpkcnm {

std::string aok_backend_name(AokBackendKind kind) {
    switch (kind) {
        case AokBackendKind::Ideal: return "ideal";
        case AokBackendKind::Sigma: return "sigma";
    }
    throw std::logic_error("unreachable");
}

AokBackendKind aok_backend_by_name(const std::string& name) {
    if (name == "ideal") return AokBackendKind::Ideal;
    if (name == "sigma") return AokBackendKind::Sigma;
    throw ConfigError("unknown backend: " + name);
}

std::string crs_variant_name(CrsVariant v) {
    switch (v) {
        case CrsVariant::Identity: return "identity";
        case CrsVariant::PrgSeed: return "prg-seed";
    }
    throw std::logic_error("unreachable");
}

CrsVariant crs_variant_by_name(const std::string& name) {
    if (name == "identity") return CrsVariant::Identity;
    if (name == "prg-seed") return CrsVariant::PrgSeed;
    throw ConfigError("unknown crs variant: " + name);
}

void validate_config(const Config& cfg, const std::string& command) {
    if (cfg.n < 2) throw ConfigError("n must be >= 2");
    if (cfg.s < 1) throw ConfigError("s must be >= 1");
    if (cfg.prf_input_len < 1) throw ConfigError("prf input length must be >= 1");
    if (cfg.group_name != "toy" && cfg.group_name != "large")
        throw ConfigError("unknown group: " + cfg.group_name);
    const bool coin_toss_command =
        command == "run" || command == "simulate" || command == "probe-ski" || command == "classify";
    if (coin_toss_command && cfg.backend == AokBackendKind::Sigma) {
        // The coin-toss relations recompute PRG/PRF/commitments and admit no
        // Sigma protocol; only the oracle backend can carry them.
        throw ConfigError("backend 'sigma' supports only statements with Sigma protocols; "
                          "command '" + command + "' requires --backend ideal");
    }
    const bool known_adversary = cfg.adversary == "relay" || cfg.adversary == "independent" ||
                                 cfg.adversary == "null" || cfg.adversary == "interleaver" ||
                                 cfg.adversary == "stage1-prober" ||
                                 cfg.adversary.rfind("scripted:", 0) == 0;
    if (!known_adversary) throw ConfigError("unknown adversary: " + cfg.adversary);
    if (coin_toss_command && cfg.adversary == "interleaver")
        throw ConfigError("adversary 'interleaver' only applies to the attack command");
    if (command == "attack" && cfg.adversary != "interleaver")
        throw ConfigError("the attack command runs the 'interleaver' adversary only");
    if (cfg.adversary == "independent" && cfg.s < 2 && coin_toss_command)
        throw ConfigError("adversary 'independent' needs --s >= 2 (it registers two keys)");
}

json config_to_json(const Config& cfg) {
    json j;
    j["n"] = cfg.n;
    j["s"] = cfg.s;
    j["seed"] = cfg.seed;
    j["group"] = cfg.group_name;
    j["backend"] = aok_backend_name(cfg.backend);
    j["prg"] = prg_backend_name(cfg.prg);
    j["crs"] = crs_variant_name(cfg.crs);
    j["prf_input_len"] = cfg.prf_input_len;
    j["adversary"] = cfg.adversary;
    if (!cfg.adversary_script.empty()) j["adversary_script"] = cfg.adversary_script;
    if (!cfg.aux.empty()) j["aux"] = cfg.aux;
    return j;
}

Env Env::from(const Config& cfg) {
    Env env;
    env.group = GroupParams::by_name(cfg.group_name);
    env.prg_kind = cfg.prg;
    env.n = cfg.n;
    env.d = cfg.prf_input_len;
    return env;
}

BitString Env::prg_expand(const BitString& seed, size_t out_len) const {
    return bpkcnm::prg_expand(group, prg_kind, seed, out_len);
}

BitString Env::prf_eval(const BitString& sigma, const BitString& x) const {
    return bpkcnm::prf_eval(group, prg_kind, sigma, x, d);
}

}  // namespace bpkcnm
