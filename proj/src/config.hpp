// Experiment configuration and the resolved environment handed to protocol
// code.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "group.hpp"
#include "prg.hpp"
#include "serialize.hpp"

namespace bpkcnm {

// Exit-code-1 class: bad flags, bad combinations, unreadable config.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class AokBackendKind { Ideal, Sigma };
enum class CrsVariant { Identity, PrgSeed };

std::string aok_backend_name(AokBackendKind kind);
AokBackendKind aok_backend_by_name(const std::string& name);
std::string crs_variant_name(CrsVariant v);
CrsVariant crs_variant_by_name(const std::string& name);

struct Config {
    size_t n = 16;              // security parameter (bit lengths of sigma, r_r, r)
    size_t s = 2;               // session bound per side
    uint64_t seed = 1;
    std::string group_name = "toy";
    AokBackendKind backend = AokBackendKind::Ideal;
    PrgBackendKind prg = PrgBackendKind::BlumMicali;
    CrsVariant crs = CrsVariant::Identity;
    size_t prf_input_len = 16;  // d, decoupled from n
    std::string adversary = "relay";
    std::string adversary_script;  // path for adversary "scripted:<file>"
    std::string aux;               // opaque auxiliary input, echoed into traces
    size_t action_budget = 100000;
    size_t rewind_cap_factor = 64;  // sigma-backend extraction cap = factor * q
};

// Commands the CLI exposes; validation depends on which one runs.
void validate_config(const Config& cfg, const std::string& command);

json config_to_json(const Config& cfg);

// Resolved runtime environment: group constants plus primitive shorthands.
struct Env {
    GroupParams group;
    PrgBackendKind prg_kind = PrgBackendKind::BlumMicali;
    size_t n = 16;
    size_t d = 16;

    static Env from(const Config& cfg);

    BitString prg_expand(const BitString& seed, size_t out_len) const;
    BitString prf_eval(const BitString& sigma, const BitString& x) const;
    // Challenge bit length t = bitlen(q - 1).
    size_t t() const { return group.challenge_bits(); }
};

}  // namespace bpkcnm
