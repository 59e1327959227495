#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "naup/enau.hpp"
#include "naup/ground.hpp"
#include "naup/semantics.hpp"
#include "naup/term.hpp"

// Shared test helpers: a platform-stable RNG, random term generators, and
// the independent oracles the derived expected values are computed with.
// Oracles stay independent of the implementation paths they check: equality
// uses the literal permutation rule, judgements use exhaustive ground
// enumeration.

namespace naup::test {

struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {  // splitmix64
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    size_t below(size_t n) { return static_cast<size_t>(next() % n); }
    bool coin() { return next() & 1; }
};

// f:AC/2, fc:C/2, fa:A/2, g:/1, h:/2, c1:/0, c2:/0, c3:/0
Signature basic_sig();

GTerm random_ground(Rng& rng, const Signature& sig, const std::vector<std::string>& pool,
                    size_t depth);

// random term over declared variables; size roughly bounded by `budget`
Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& avars,
                 const std::vector<std::string>& tvars, size_t budget);

FreshnessContext random_context(Rng& rng, const Signature& sig,
                                const std::vector<std::string>& avars,
                                const std::vector<std::string>& tvars, size_t max_constraints);

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// =_E by the literal equational rules: (A) positional, (C) both orders,
// (AC) over all argument permutations (factorial).
bool eq_oracle(const GTerm& s, const GTerm& t, const TheoryConfig& cfg);

enum class JudgementKind { Freshness, Equality };

struct OracleOutcome {
    bool counterexample_found = false;
    bool exhausted_atom_only = false;  // witness search covered the judgement
};

// Exhaustive ground check of a judgement: atom-variables range over a pool
// of (#avars + 1) atoms, term-variables over ground terms of depth <=
// depth. Reports whether any interpretation respects ctx but violates the
// judgement.
OracleOutcome judgement_oracle(const FreshnessContext& ctx, JudgementKind kind,
                               const std::string& subject, const Term& lhs, const Term& rhs,
                               const TheoryConfig& cfg, size_t depth);

// Semantic inclusion [[sub]] subseteq [[sup]] on a fixed pool/depth. Uses a
// reversal hint when direct enumeration of the superset would blow up: a
// claimed member must then be exhibited by the hinted interpretation.
bool sem_included(const TermInContext& sub, const TermInContext& sup,
                  const std::vector<std::string>& pool, size_t depth, const TheoryConfig& cfg,
                  const Substitution* reversal_hint = nullptr);

// term component equality up to renaming generated variables
bool equal_mod_genvars(const Term& a, const Term& b, const Signature& sig);

}  // namespace naup::test
