#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "naup/semantics.hpp"
#include "naup/term.hpp"

// The generality order on terms-in-context (TIC-subset), constraint
// entailment, generate-and-test post-processing of generalizations, result
// set minimization, and the unique-lgg criteria for AC, C and A over
// constants.

namespace naup {

// [[cand]] subseteq [[ref]]: renames apart, E-matches ref's term onto
// cand's term (backtracking over AC alignments and suspension targets), and
// checks every instantiated ref constraint against cand's context.
bool tic_subset(const TermInContext& cand, const TermInContext& ref, const TheoryConfig& cfg,
                JudgementCache* cache = nullptr);

// ctx |- c, decided by exhaustive enumeration of atom assignments over an
// n-atom pool and free-atom subsets for term-variables.
bool entails_constraint(const FreshnessContext& ctx, const FreshnessConstraint& c);

struct PostProcessOutcome {
    TermInContext strengthened;
    bool budget_exceeded = false;
    std::vector<FreshnessConstraint> added;
};

struct PostProcessBudget {
    size_t max_avars = 6;
};

// Strengthens a computed generalization's context with every catalog
// constraint over M (and the occurring term-variables) that keeps it a
// generalization of both inputs.
PostProcessOutcome post_process(const TermInContext& result, const TermInContext& input1,
                                const TermInContext& input2, const std::set<std::string>& M,
                                const TheoryConfig& cfg, const PostProcessBudget& budget = {},
                                JudgementCache* cache = nullptr);

// Indices of the <=_E-maximal elements (mutual-subset duplicates collapse
// onto the element with the smallest key).
std::vector<size_t> minimize_indices(const std::vector<TermInContext>& results,
                                     const std::vector<std::string>& keys,
                                     const TheoryConfig& cfg, JudgementCache* cache = nullptr);

// ---------------------------------------------------------------------------
// Unique-lgg criteria (single symbol over constants).
// ---------------------------------------------------------------------------

using DepthMultiset = std::multiset<std::pair<std::string, size_t>>;

// Constants paired with their depth; direct arguments of the root count as
// depth 1.
DepthMultiset depth_multiset(const GTerm& s, const Signature& sig);

std::optional<Term> unique_lgg_ac(const GTerm& s, const GTerm& t, const Signature& sig,
                                  NameGen& gen);
std::optional<Term> unique_lgg_c(const GTerm& s, const GTerm& t, const Signature& sig,
                                 NameGen& gen);
std::optional<Term> unique_lgg_a(const GTerm& s, const GTerm& t, const Signature& sig,
                                 NameGen& gen);

}  // namespace naup
