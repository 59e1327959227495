#pragma once

#include <optional>
#include <string>
#include <vector>

#include "naup/semantics.hpp"
#include "naup/term.hpp"

// Equivariance matching modulo E: given equations t <~ s and a freshness
// context, find an injective atom-variable mapping P with ctx |= P*t ~_E s.
//
// The search decomposes the equations under a simple freshness context
// (EqAbs / Eqf / EqfC / EqfAC), builds a mapping from the suspension
// leaves, and checks injectivity. Candidates found under one equality
// pattern are re-verified against the full context; `verified` records
// whether that check passed. Rule Mer must only consume verified mappings.

namespace naup {

struct EquivEquation {
    Term left, right;
};

struct AtomMapping {
    // entries sorted by subject name; identity entries are dropped
    std::vector<std::pair<std::string, Suspension>> entries;
    // constraints for decomposition-fresh variables the mapping mentions
    FreshnessContext support;
    // the simple context (equality pattern) the mapping was found under
    SimpleContext disjunct;
    // full-context contract: ctx u support |= pi*t ~_E s for all equations
    bool verified = false;

    bool is_identity() const { return entries.empty(); }
    std::string key() const;
};

struct EqvmOptions {
    bool all_mappings = false;
};

// One decomposition branch: suspension equations plus the extended context.
struct DecompBranch {
    std::vector<EquivEquation> leaves;
    SimpleContext ctx;
    // fresh variables introduced by EqAbs, with their constraint sets
    std::vector<std::pair<std::string, FreshnessContext>> fresh;
};

// Exhaustive application of the decomposition rules under a simple context.
// Branches that hit a head clash are dropped.
std::vector<DecompBranch> decompose(const std::vector<EquivEquation>& psi,
                                    const SimpleContext& ctx, const Signature& sig,
                                    NameGen& gen, const std::set<std::string>& all_avars,
                                    const std::set<std::string>& all_tvars);

// Algorithm steps 4-17 on a reduced equation set. Several mappings can come
// out of the guessing phase; all are returned in deterministic order.
std::vector<AtomMapping> build_mapping(const DecompBranch& branch, const TheoryConfig& cfg);

// Full solver. Returns the first verified mapping if one exists, otherwise
// the first candidate (unverified), otherwise nullopt.
std::optional<AtomMapping> eqvm(const std::vector<EquivEquation>& psi,
                                const FreshnessContext& ctx, const Signature& sig, NameGen& gen,
                                JudgementCache* cache = nullptr);

// Verification mode: all distinct candidates.
std::vector<AtomMapping> eqvm_all(const std::vector<EquivEquation>& psi,
                                  const FreshnessContext& ctx, const Signature& sig,
                                  NameGen& gen, JudgementCache* cache = nullptr);

// A swap sequence whose action on the mapping's domain agrees with the
// mapping under every interpretation respecting its context.
Permutation mapping_to_permutation(const AtomMapping& m);

}  // namespace naup
