// The straight-line simulator for the man-in-the-middle experiment: it runs
// the same event loop with substituted session behavior, accumulates a
// covered-key set by extracting from the adversary's accepted proofs, and
// finishes within s+1 repetitions with outputs equal to predefined
// distribution draws.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "adversaries.hpp"
#include "harness.hpp"

namespace bpkcnm {

// One draw of the predefinable outcome distribution: a value plus the
// trapdoor that certifies it ("identity" publishes the value itself;
// "prg-seed" publishes an expansion and keeps the seed).
struct CrsDraw {
    BitString value;
    BitString trapdoor;
};

CrsDraw m_crs_sample(const Env& env, CrsVariant variant, Rng& rng);
bool r_crs_holds(const Env& env, CrsVariant variant, const CrsDraw& d);

// Right-key generation for the simulated experiment: the usual keypair plus
// a second, independently chosen secret key for the same public key.
struct SimKeyTriple {
    RightKeyPair kp;
    bigint sk_prime = 0;
    int side_prime = 0;
};

SimKeyTriple sim_gen_right_triple(const GroupParams& group, Rng& master);

struct SimOutput {
    ExperimentTrace trace;  // trace of the successful repetition
    size_t repetitions = 0;
    bool completed = false;
    bool extraction_failed = false;  // a finished right session yielded no usable left key
    CrsVariant variant = CrsVariant::Identity;
    std::vector<json> repetition_log;
    std::vector<std::optional<CrsDraw>> left_draws;
    std::vector<std::optional<CrsDraw>> right_draws;
    json r_l = json::array();
    json sta_l = json::array();
    json r_r = json::array();
    json sta_r = json::array();
    json covered_kinds = json::array();
    json classification;

    // Analysis-only material; to_json never includes it.
    SimKeyTriple right_triple;

    json to_json() const;
};

using AdversaryFactory = std::function<std::unique_ptr<Adversary>()>;

// Runs the simulation against the configured adversary (or a caller-made
// one; the factory is invoked once per repetition with identical coins).
SimOutput simulate(const Config& cfg, const AdversaryFactory& factory = {});

// Output classification: every finished right session's outcome is either
// the session's own predefined draw or a copy of some left session's draw,
// each left session copied at most once.
json classify_outputs(const SimOutput& sim);
// Trace-only fallback when no draws are available: classify by output
// equality against the left sessions.
json classify_trace(const ExperimentTrace& trace);
// File-level entry point: accepts a serialized run artifact, simulation
// artifact, or bare trace object, and classifies whatever it carries.
json classify_artifact_json(const json& artifact);

// Secret-key-independence probe: run the simulation many times and compare
// how often a relation over (sk, outputs, sta) holds for the used right
// secret key versus the independently drawn spare.
struct ProbeResult {
    std::string relation;
    size_t trials = 0;
    double freq_sk = 0.0;
    double freq_sk_prime = 0.0;

    json to_json() const;
};

ProbeResult sk_independence_probe(const Config& cfg, const std::string& relation, size_t trials,
                                  const AdversaryFactory& factory = {});

}  // namespace bpkcnm
