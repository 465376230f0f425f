// The eight shipped self-checks: honest completeness, the interleaving
// break plus its patched failure, exhaustive small-group proof behavior,
// commitment equivocation counting, simulation structure, secret-key
// independence, artifact determinism, and witness indistinguishability.
// Every criterion pins its own parameters internally -- results do not vary
// with the caller's configuration -- and reports carry no timings, so a
// report is byte-stable run to run.
#pragma once

#include <string>
#include <vector>

#include "serialize.hpp"

namespace bpkcnm {

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    json details = json::object();

    json to_json() const;
};

CriterionResult criterion_honest_completeness();            // C1
CriterionResult criterion_interleaving_attack();            // C2
CriterionResult criterion_proofs_exhaustive();              // C3
CriterionResult criterion_equivocation_count();             // C4
CriterionResult criterion_simulation_structure();           // C5
CriterionResult criterion_key_independence();               // C6
CriterionResult criterion_artifact_determinism();           // C7
CriterionResult criterion_witness_indistinguishability();   // C8

struct SelftestReport {
    std::vector<CriterionResult> criteria;

    bool all_pass() const;
    json to_json() const;
};

SelftestReport run_selftest();

}  // namespace bpkcnm
