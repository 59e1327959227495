#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Term languages: the variable language (atom-variables, term-variables,
// suspensions) and the ground language (concrete atoms). Both keep
// associative applications flattened.

namespace naup {

enum class Theory { Free, A, C, AC };

bool is_assoc(Theory th);

struct FunSymbol {
    std::string name;
    int arity = 0;
    Theory theory = Theory::Free;
};

// Symbol table. A/C/AC symbols are declared binary; flattened applications
// of A/AC symbols may carry more arguments.
class Signature {
public:
    void declare(const std::string& name, int arity, Theory th);
    bool contains(const std::string& name) const;
    const FunSymbol& at(const std::string& name) const;
    Theory theory_of(const std::string& name) const;
    std::vector<FunSymbol> symbols() const;
    void override_theory(const std::string& name, Theory th);

private:
    std::map<std::string, FunSymbol> table_;
};

// ---------------------------------------------------------------------------
// Permutations and suspensions over atom-variables.
//
// A permutation is a sequence of swappings applied right-to-left (the
// rightmost swap acts first). Displayed left-to-right, outermost first.
// Swap elements are themselves suspensions, per the grammar.
// ---------------------------------------------------------------------------

struct Swap;

struct Permutation {
    std::vector<Swap> swaps;

    bool is_identity() const { return swaps.empty(); }
    Permutation inverse() const;                 // reversed swap sequence
    Permutation compose(const Permutation& inner) const;  // this after inner
    static Permutation identity() { return Permutation{}; }
};

struct Suspension {
    Permutation perm;
    std::string var;  // atom-variable name

    static Suspension plain(std::string a) { return Suspension{Permutation{}, std::move(a)}; }
    bool is_plain() const { return perm.is_identity(); }
};

struct Swap {
    Suspension lhs, rhs;
};

bool operator==(const Permutation& a, const Permutation& b);
bool operator==(const Suspension& a, const Suspension& b);
bool operator==(const Swap& a, const Swap& b);
int compare(const Suspension& a, const Suspension& b);

// Normalizes a swap ((W W) is dropped elsewhere; element order is canonical).
Swap make_swap(Suspension a, Suspension b);
Swap make_swap(const std::string& a, const std::string& b);

// Applies one swap to a suspension. Fires only on exact syntactic match of
// the core; otherwise stays suspended.
Suspension apply_swap(const Swap& sw, const Suspension& u);

// Applies a permutation to a suspension, innermost swap first, simplifying
// where swaps fire. Adjacent equal swaps cancel.
Suspension apply_perm(const Permutation& pi, const Suspension& u);

Permutation normalize_perm(const Permutation& pi);

// ---------------------------------------------------------------------------
// Terms with variables.
// ---------------------------------------------------------------------------

class Term;
using TermList = std::vector<Term>;

class Term {
public:
    enum class Kind { AtomSusp, VarSusp, App, Abs };

    Term() = default;

    static Term atom_susp(Suspension s);
    static Term atom_var(const std::string& a) { return atom_susp(Suspension::plain(a)); }
    static Term var_susp(Permutation p, std::string x);
    static Term var(const std::string& x) { return var_susp(Permutation{}, x); }
    static Term app(std::string f, TermList args);
    static Term abs(Suspension binder, Term body);

    Kind kind() const { return node_->kind; }
    bool is(Kind k) const { return node_ && node_->kind == k; }
    const Suspension& susp() const { return node_->susp; }           // AtomSusp, Abs binder
    const Permutation& vperm() const { return node_->susp.perm; }    // VarSusp
    const std::string& vname() const { return node_->susp.var; }     // VarSusp
    const std::string& sym() const { return node_->sym; }            // App
    const TermList& args() const { return node_->args; }             // App
    const Term& body() const { return node_->args.front(); }         // Abs
    const Suspension& binder() const { return node_->susp; }         // Abs

    bool valid() const { return node_ != nullptr; }
    size_t hash() const;

    friend bool operator==(const Term& a, const Term& b);
    friend int compare(const Term& a, const Term& b);

private:
    struct Node {
        Kind kind;
        Suspension susp;   // AtomSusp payload, VarSusp perm+var, Abs binder
        std::string sym;
        TermList args;     // App args; Abs body at [0]
    };
    std::shared_ptr<const Node> node_;
};

bool operator!=(const Term& a, const Term& b);
bool operator<(const Term& a, const Term& b);

// ---------------------------------------------------------------------------
// Ground language. Atoms are identified by their name. Permutations are
// eliminated at construction; the only extension is a suspended
// term-variable leaf so that judgement checking can keep term-variables
// symbolic. A term is ground proper when no Var leaf occurs.
// ---------------------------------------------------------------------------

struct GroundSwap {
    std::string lhs, rhs;
};
using GroundPerm = std::vector<GroundSwap>;  // rightmost swap acts first

std::string apply_ground_perm(const GroundPerm& p, const std::string& atom);
GroundPerm invert_ground(const GroundPerm& p);
GroundPerm compose_ground(const GroundPerm& outer, const GroundPerm& inner);

class GTerm {
public:
    enum class Kind { Atom, App, Abs, Var };

    GTerm() = default;

    static GTerm atom(std::string a);
    static GTerm app(std::string f, std::vector<GTerm> args);
    static GTerm abs(std::string a, GTerm body);
    static GTerm var(GroundPerm p, std::string x);

    Kind kind() const { return node_->kind; }
    bool is(Kind k) const { return node_ && node_->kind == k; }
    const std::string& name() const { return node_->name; }   // Atom, Var, Abs binder
    const std::string& sym() const { return node_->name; }    // App
    const std::vector<GTerm>& args() const { return node_->args; }
    const GTerm& body() const { return node_->args.front(); }
    const GroundPerm& vperm() const { return node_->perm; }

    bool valid() const { return node_ != nullptr; }
    bool is_ground() const;  // no Var leaf
    size_t hash() const;

    friend bool operator==(const GTerm& a, const GTerm& b);
    friend int compare(const GTerm& a, const GTerm& b);

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<GTerm> args;  // App args; Abs body at [0]
        GroundPerm perm;          // Var only
    };
    std::shared_ptr<const Node> node_;
};

bool operator!=(const GTerm& a, const GTerm& b);
bool operator<(const GTerm& a, const GTerm& b);

// Homomorphic permutation application; binders are swapped as well.
GTerm apply_permutation_ground(const GroundPerm& p, const GTerm& t);

// ---------------------------------------------------------------------------
// Freshness constraints and substitutions.
// ---------------------------------------------------------------------------

struct FreshnessConstraint {
    std::string avar;  // subject: always a plain atom-variable
    Term target;
};

bool operator==(const FreshnessConstraint& a, const FreshnessConstraint& b);
int compare(const FreshnessConstraint& a, const FreshnessConstraint& b);
bool operator<(const FreshnessConstraint& a, const FreshnessConstraint& b);

// Finite set, kept sorted and deduplicated.
class FreshnessContext {
public:
    FreshnessContext() = default;
    explicit FreshnessContext(std::vector<FreshnessConstraint> cs);

    void add(FreshnessConstraint c);
    void merge(const FreshnessContext& other);
    const std::vector<FreshnessConstraint>& constraints() const { return cs_; }
    bool empty() const { return cs_.empty(); }
    size_t size() const { return cs_.size(); }

    friend bool operator==(const FreshnessContext& a, const FreshnessContext& b);

private:
    std::vector<FreshnessConstraint> cs_;
};

struct TermInContext {
    FreshnessContext context;
    Term term;
};

class Substitution {
public:
    bool maps_term(const std::string& x) const;
    bool maps_atom(const std::string& a) const;
    const Term& term_image(const std::string& x) const;
    const Suspension& atom_image(const std::string& a) const;
    void bind_term(const std::string& x, Term t);
    void bind_atom(const std::string& a, Suspension s);
    const std::map<std::string, Term>& term_map() const { return tmap_; }
    const std::map<std::string, Suspension>& atom_map() const { return amap_; }
    bool empty() const { return tmap_.empty() && amap_.empty(); }

private:
    std::map<std::string, Term> tmap_;
    std::map<std::string, Suspension> amap_;
};

// ---------------------------------------------------------------------------
// Core operations.
// ---------------------------------------------------------------------------

// Pushes a permutation through a term; composes with suspensions at leaves.
Term apply_permutation_nla(const Permutation& pi, const Term& t);

// Merges nested same-symbol A/AC applications, recursively. Idempotent.
Term flatten(const Term& t, const Signature& sig);
GTerm flatten(const GTerm& t, const Signature& sig);

// Homomorphic; re-flattens applications; suspensions on replaced variables
// push their permutation into the replacement.
Term apply_substitution(const Term& t, const Substitution& s, const Signature& sig);
Suspension apply_substitution(const Suspension& u, const Substitution& s);
Permutation apply_substitution(const Permutation& p, const Substitution& s);
FreshnessContext apply_substitution(const FreshnessContext& ctx, const Substitution& s,
                                    const Signature& sig);

// Atom-variables occurring anywhere, including inside permutations.
void collect_atom_vars(const Permutation& p, std::set<std::string>& out);
void collect_atom_vars(const Suspension& u, std::set<std::string>& out);
void collect_atom_vars(const Term& t, std::set<std::string>& out);
void collect_atom_vars(const FreshnessContext& c, std::set<std::string>& out);
std::set<std::string> atom_vars(const Term& t);
std::set<std::string> atom_vars(const FreshnessContext& c);

void collect_term_vars(const Term& t, std::set<std::string>& out);
void collect_term_vars(const FreshnessContext& c, std::set<std::string>& out);
std::set<std::string> term_vars(const Term& t);

// Node count with flattened A/AC applications weighted as their binary
// tree: an n-ary application counts n-1 nodes. Suspension leaves count 1.
size_t term_size(const Term& t, const Signature& sig);

size_t depth(const GTerm& t);

// ---------------------------------------------------------------------------
// Fresh names. Reserved prefix "_" is rejected by the parser, so generated
// names never collide with user input. Linearizable.
// ---------------------------------------------------------------------------

class NameGen {
public:
    std::string fresh_atom_var() { return "_A" + std::to_string(++counter_); }
    std::string fresh_term_var() { return "_X" + std::to_string(++counter_); }

    static bool reserved(const std::string& name) { return !name.empty() && name[0] == '_'; }

private:
    std::atomic<uint64_t> counter_{0};
};

// Printing (mirrors the input grammar).
std::string to_string(const Permutation& p);
std::string to_string(const Suspension& s);
std::string to_string(const Term& t);
std::string to_string(const GTerm& t);
std::string to_string(const GroundPerm& p);
std::string to_string(const FreshnessConstraint& c);
std::string to_string(const FreshnessContext& c);

}  // namespace naup
