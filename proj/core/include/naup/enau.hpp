#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "naup/eqvm.hpp"
#include "naup/semantics.hpp"
#include "naup/term.hpp"

// The rule-based anti-unification state machine: Dec, Abs, SusAA, SusYY,
// SolAB, Sol, Mer plus the equational decompositions DecA, DecC, DecAC,
// with an exhaustive search collecting all final states.

namespace naup {

enum class GenVarKind { TermVar, AtomVar };

struct AUEquation {
    GenVarKind kind = GenVarKind::TermVar;
    std::string genvar;
    Term left, right;
};

enum class Rule { Dec, Abs, SusAA, SusYY, SolAB, Sol, DecA, DecC, DecAC, Mer };

const char* rule_name(Rule r);

struct RuleInstance {
    Rule rule;
    size_t eq_index = 0;          // index into P (or first store index for Mer)
    size_t k = 0, l = 0;          // DecA split points
    int c_variant = 0;            // DecC argument order
    std::vector<size_t> sel_l, sel_r;  // DecAC argument selections
    size_t mer_keep = 0, mer_drop = 0; // Mer store indices
};

struct State {
    std::vector<AUEquation> problems;  // P
    std::vector<AUEquation> store;     // S
    FreshnessContext gamma;            // starts as the input context
    Substitution subst;
    std::vector<std::string> trace;
};

struct EnauLimits {
    size_t max_states = 10000;
    int jobs = 1;
};

struct GeneralizationResult {
    TermInContext result;  // (Gamma, X0 sigma)
    std::vector<AUEquation> store;
    Substitution subst;
    std::vector<std::string> trace;
};

struct EnauOutcome {
    std::vector<GeneralizationResult> results;
    bool complete = true;
    std::string limit_note;
    size_t states_explored = 0;
    size_t measure_violations = 0;  // termination instrumentation, must stay 0
};

class EnauEngine {
public:
    EnauEngine(const Signature& sig, FreshnessContext nabla);

    // Start state ({X0: s =^= t}; {}; nabla; Id). The generalization
    // variable must not occur in the inputs or the context.
    State init_state(const Term& s, const Term& t, const std::string& genvar);
    State init_state(const Term& s, const Term& t);

    std::vector<RuleInstance> applicable_rules(const State& st) const;

    // Applies one instance; Mer yields nothing when no mapping exists.
    std::optional<State> apply_rule(const State& st, const RuleInstance& ri);

    EnauOutcome run(const Term& s, const Term& t, const EnauLimits& limits = {});

    // Lexicographic termination measure (problem size, store size).
    std::pair<size_t, size_t> measure(const State& st) const;

    // Current image of the root generalization variable.
    Term root_image(const State& st) const {
        return st.subst.maps_term(root_) ? st.subst.term_image(root_) : Term::var(root_);
    }

    const Signature& sig() const { return *sig_; }
    const FreshnessContext& nabla() const { return nabla_; }
    NameGen& names() { return gen_; }
    JudgementCache& cache() { return cache_; }
    const std::string& root_var() const { return root_; }

private:
    const Signature* sig_;
    FreshnessContext nabla_;
    NameGen gen_;
    JudgementCache cache_;
    TheoryConfig cfg_;
    std::string root_;

    bool susp_equal_entailed(const FreshnessContext& gamma, const Term& a, const Term& b);
    friend struct EnauSearch;
};

// Substitutions rebuilding the two inputs from a result: each store entry's
// generalization variable is sent to its left (resp. right) side. The
// reversal property itself is checked with holds_eq under the result
// context.
std::pair<Substitution, Substitution> reversal_substitutions(const GeneralizationResult& r);

// Canonical key of a result/state modulo generated-name renaming; used for
// deduplication.
std::string canonical_result_key(const TermInContext& tic, const std::vector<AUEquation>& store,
                                 const Signature& sig);

}  // namespace naup
