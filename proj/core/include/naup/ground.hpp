#pragma once

#include <set>
#include <string>
#include <utility>

#include "naup/term.hpp"

// Freshness, alpha-equivalence and equality modulo A/C/AC on terms of the
// ground language. Suspended term-variable leaves are handled symbolically
// against a set of known freshness facts.

namespace naup {

// Known facts of the form atom # X for suspended term-variables.
using FreshFacts = std::set<std::pair<std::string, std::string>>;

struct TheoryConfig {
    const Signature* sig = nullptr;
    Theory theory_of(const std::string& f) const {
        return sig && sig->contains(f) ? sig->theory_of(f) : Theory::Free;
    }
};

// a # t by the four freshness rules; Var leaves consult facts.
bool fresh_ground(const std::string& atom, const GTerm& t, const FreshFacts& facts = {});

// Alpha-equivalence (theory-blind).
bool alpha_eq(const GTerm& s, const GTerm& t);

// s =_E t. Expects flattened inputs; flattens defensively otherwise.
// Rule (A) compares equal-length argument lists positionally, (C) tries both
// orders, (AC) does backtracking multiset matching.
bool eq_modulo(const GTerm& s, const GTerm& t, const TheoryConfig& cfg);

// Same, with term-variable leaves kept symbolic: pi1*X matches pi2*X iff
// every atom the two permutations disagree on is known fresh for X.
bool eq_modulo_symbolic(const GTerm& s, const GTerm& t, const TheoryConfig& cfg,
                        const FreshFacts& facts);

std::set<std::string> free_atoms(const GTerm& t);

// Canonical representative modulo =_E: flattened, AC arguments sorted,
// binders renamed by binding depth. Two terms are =_E iff their canonical
// forms are structurally equal.
GTerm canonical_ground(const GTerm& t, const TheoryConfig& cfg);

}  // namespace naup
