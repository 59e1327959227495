#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "naup/ground.hpp"
#include "naup/term.hpp"

// Interpretations, semantic judgements over freshness contexts, context
// simplification, EQR contexts, and the bounded ground semantics of
// terms-in-context.
//
// Judgements quantify over all interpretations. Only the equality pattern
// of the atom-variables matters, so the decision procedure enumerates
// partitions of the relevant atom-variables (Bell-bounded), assigns one
// pool atom per class, and keeps term-variables symbolic.

namespace naup {

// Total order on names: user names before generated ones, short before long.
bool name_less(const std::string& a, const std::string& b);

struct Interpretation {
    std::map<std::string, std::string> atom_map;  // atom-variable -> atom
    std::map<std::string, GTerm> term_map;        // term-variable -> ground term
};

// Fully applies an interpretation; throws std::out_of_range on a missing
// binding.
GTerm interpret(const Term& t, const Interpretation& rho);
GroundPerm interpret(const Permutation& p, const Interpretation& rho);

// ---------------------------------------------------------------------------
// Simple freshness contexts.
//
// A disjunct produced by simplification fixes the complete equality pattern
// of its atom-variables: a partition (A=B inside a class, A#B across
// classes) plus residual A#X facts recorded at class representatives.
// ---------------------------------------------------------------------------

class SimpleContext {
public:
    SimpleContext() = default;
    SimpleContext(std::vector<std::vector<std::string>> classes,
                  std::set<std::pair<std::string, std::string>> facts);

    const std::vector<std::vector<std::string>>& classes() const { return classes_; }
    const std::set<std::pair<std::string, std::string>>& facts() const { return facts_; }

    bool covers(const std::string& avar) const;
    int class_of(const std::string& avar) const;  // -1 when absent
    const std::string& rep(int cls) const { return classes_[cls][0]; }

    // Resolves a suspension to the class of its denotation.
    int resolve(const Suspension& u) const;
    int resolve_perm(const Permutation& p, int cls) const;

    // Adds a variable known distinct from every existing class, with
    // facts var # X for all given term-variables.
    void add_fresh_var(const std::string& avar, const std::set<std::string>& tvars);

    // The constraint view: {A=B, A#B, A#X} triples.
    enum class Form { Eq, Neq, FreshVar };
    struct Constraint {
        Form form;
        std::string lhs, rhs;
    };
    std::vector<Constraint> to_constraints() const;

    std::string key() const;  // canonical serialization

private:
    std::vector<std::vector<std::string>> classes_;  // sorted members, sorted by rep
    std::map<std::string, int> index_;
    std::set<std::pair<std::string, std::string>> facts_;  // (class rep, term-var)
};

// Equivalent disjunction of simple freshness contexts; inconsistent
// disjuncts pruned. Covers at least the atom-variables of ctx plus `extra`.
std::vector<SimpleContext> simplify_context(const FreshnessContext& ctx,
                                            const std::set<std::string>& extra = {});

// Evaluates one constraint under a full equality pattern; returns false when
// violated, otherwise adds the residual A#X facts (at class representatives).
bool eval_constraint_under(const SimpleContext& p, const FreshnessConstraint& c,
                           std::set<std::pair<std::string, std::string>>& facts);

// ---------------------------------------------------------------------------
// Partitions.
// ---------------------------------------------------------------------------

struct AtomPartition {
    std::vector<std::vector<std::string>> classes;
    std::set<std::pair<std::string, std::string>> facts;  // (class rep, term-var)
};

// All equivalence relations on avars consistent with at least one disjunct,
// each with the induced facts.
std::vector<AtomPartition> enumerate_partitions(const std::set<std::string>& avars,
                                                const std::vector<SimpleContext>& disjuncts);

// ---------------------------------------------------------------------------
// Judgements.
// ---------------------------------------------------------------------------

class JudgementCache {
public:
    std::optional<bool> lookup(const std::string& key) const;
    void store(const std::string& key, bool value);

private:
    mutable std::mutex mu_;
    std::map<std::string, bool> cache_;
};

// True iff ctx has at least one consistent interpretation.
bool consistent(const FreshnessContext& ctx, JudgementCache* cache = nullptr);

// ctx |= avar # t. Vacuously true over an inconsistent ctx.
bool holds_freshness(const FreshnessContext& ctx, const FreshnessConstraint& c,
                     const TheoryConfig& cfg, JudgementCache* cache = nullptr);

// ctx |= s ~_E t.
bool holds_eq(const FreshnessContext& ctx, const Term& s, const Term& t,
              const TheoryConfig& cfg, JudgementCache* cache = nullptr);

// ctx |= p1 == p2 (as functions on atoms).
bool perm_equiv(const FreshnessContext& ctx, const Permutation& p1, const Permutation& p2,
                const TheoryConfig& cfg, JudgementCache* cache = nullptr);

// ---------------------------------------------------------------------------
// Bounded ground semantics.
// ---------------------------------------------------------------------------

// All ground terms over the pool and signature with depth <= maxdepth.
std::vector<GTerm> enumerate_ground_terms(const std::vector<std::string>& pool,
                                          const Signature& sig, size_t maxdepth);

// The restriction of [[(ctx, t)]] to interpretations drawing atoms from
// `pool` and term instantiations of depth <= maxdepth; canonical
// representatives of the equivalence classes modulo =_E.
std::set<GTerm> sem_representatives(const TermInContext& tc, const std::vector<std::string>& pool,
                                    size_t maxdepth, const TheoryConfig& cfg);

// ---------------------------------------------------------------------------
// EQR contexts.
// ---------------------------------------------------------------------------

struct EqrConstraint {
    std::vector<std::vector<std::string>> partition;       // equivalence relation on M
    bool is_false = false;                                  // (E, False)
    std::set<std::pair<std::string, std::string>> facts;    // A # X, A a class rep
};

struct EqrContext {
    std::vector<EqrConstraint> constraints;  // standardized: one per partition of M
};

// Equivalent EQR context over M (M must cover the atom-variables of ctx).
EqrContext to_eqr(const FreshnessContext& ctx, const std::set<std::string>& M);

}  // namespace naup
