#include "naup/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace naup {

bool is_assoc(Theory th) { return th == Theory::A || th == Theory::AC; }

void Signature::declare(const std::string& name, int arity, Theory th) {
    if (th != Theory::Free && arity != 2)
        throw std::invalid_argument("symbol '" + name + "': A/C/AC symbols are declared with arity 2");
    if (arity < 0) throw std::invalid_argument("symbol '" + name + "': negative arity");
    auto it = table_.find(name);
    if (it != table_.end()) {
        if (it->second.arity != arity || it->second.theory != th)
            throw std::invalid_argument("symbol '" + name + "' redeclared inconsistently");
        return;
    }
    table_.emplace(name, FunSymbol{name, arity, th});
}

bool Signature::contains(const std::string& name) const { return table_.count(name) > 0; }

const FunSymbol& Signature::at(const std::string& name) const {
    auto it = table_.find(name);
    if (it == table_.end()) throw std::invalid_argument("undeclared symbol '" + name + "'");
    return it->second;
}

Theory Signature::theory_of(const std::string& name) const { return at(name).theory; }

std::vector<FunSymbol> Signature::symbols() const {
    std::vector<FunSymbol> out;
    for (auto& [_, s] : table_) out.push_back(s);
    return out;
}

void Signature::override_theory(const std::string& name, Theory th) {
    auto it = table_.find(name);
    if (it == table_.end()) throw std::invalid_argument("undeclared symbol '" + name + "'");
    if (th != Theory::Free && it->second.arity != 2)
        throw std::invalid_argument("symbol '" + name + "': only binary symbols take a theory");
    it->second.theory = th;
}

// --------------------------------------------------------------------------
// Permutations and suspensions
// --------------------------------------------------------------------------

bool operator==(const Suspension& a, const Suspension& b) {
    return a.var == b.var && a.perm == b.perm;
}

bool operator==(const Swap& a, const Swap& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }

bool operator==(const Permutation& a, const Permutation& b) { return a.swaps == b.swaps; }

int compare(const Permutation& a, const Permutation& b);

int compare(const Suspension& a, const Suspension& b) {
    if (int c = a.var.compare(b.var)) return c;
    return compare(a.perm, b.perm);
}

int compare(const Swap& a, const Swap& b) {
    if (int c = compare(a.lhs, b.lhs)) return c;
    return compare(a.rhs, b.rhs);
}

int compare(const Permutation& a, const Permutation& b) {
    if (a.swaps.size() != b.swaps.size()) return a.swaps.size() < b.swaps.size() ? -1 : 1;
    for (size_t i = 0; i < a.swaps.size(); ++i)
        if (int c = compare(a.swaps[i], b.swaps[i])) return c;
    return 0;
}

Swap make_swap(Suspension a, Suspension b) {
    if (compare(b, a) < 0) std::swap(a, b);
    return Swap{std::move(a), std::move(b)};
}

Swap make_swap(const std::string& a, const std::string& b) {
    return make_swap(Suspension::plain(a), Suspension::plain(b));
}

Permutation Permutation::inverse() const {
    Permutation r;
    r.swaps.assign(swaps.rbegin(), swaps.rend());
    return r;
}

Permutation Permutation::compose(const Permutation& inner) const {
    Permutation r;
    r.swaps = swaps;
    r.swaps.insert(r.swaps.end(), inner.swaps.begin(), inner.swaps.end());
    return normalize_perm(r);
}

Permutation normalize_perm(const Permutation& pi) {
    Permutation out;
    for (const Swap& s : pi.swaps) {
        if (s.lhs == s.rhs) continue;  // (W W) is the identity
        if (!out.swaps.empty() && out.swaps.back() == s)
            out.swaps.pop_back();  // adjacent equal swaps cancel
        else
            out.swaps.push_back(s);
    }
    return out;
}

Suspension apply_swap(const Swap& sw, const Suspension& u) {
    if (u == sw.lhs) return sw.rhs;
    if (u == sw.rhs) return sw.lhs;
    if (sw.lhs == sw.rhs) return u;
    Suspension r = u;
    r.perm.swaps.insert(r.perm.swaps.begin(), sw);
    r.perm = normalize_perm(r.perm);
    return r;
}

Suspension apply_perm(const Permutation& pi, const Suspension& u) {
    Suspension cur = u;
    cur.perm = normalize_perm(cur.perm);
    for (auto it = pi.swaps.rbegin(); it != pi.swaps.rend(); ++it) cur = apply_swap(*it, cur);
    return cur;
}

// --------------------------------------------------------------------------
// Term
// --------------------------------------------------------------------------

Term Term::atom_susp(Suspension s) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::AtomSusp;
    s.perm = normalize_perm(s.perm);
    n->susp = std::move(s);
    Term t;
    t.node_ = std::move(n);
    return t;
}

Term Term::var_susp(Permutation p, std::string x) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::VarSusp;
    n->susp = Suspension{normalize_perm(p), std::move(x)};
    Term t;
    t.node_ = std::move(n);
    return t;
}

Term Term::app(std::string f, TermList args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    n->sym = std::move(f);
    n->args = std::move(args);
    Term t;
    t.node_ = std::move(n);
    return t;
}

Term Term::abs(Suspension binder, Term body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Abs;
    binder.perm = normalize_perm(binder.perm);
    n->susp = std::move(binder);
    n->args.push_back(std::move(body));
    Term t;
    t.node_ = std::move(n);
    return t;
}

static size_t hash_mix(size_t h, size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

static size_t hash_susp(const Suspension& s);

static size_t hash_perm(const Permutation& p) {
    size_t h = 0x51ed2701;
    for (auto& sw : p.swaps) {
        h = hash_mix(h, hash_susp(sw.lhs));
        h = hash_mix(h, hash_susp(sw.rhs));
    }
    return h;
}

static size_t hash_susp(const Suspension& s) {
    return hash_mix(std::hash<std::string>{}(s.var), hash_perm(s.perm));
}

size_t Term::hash() const {
    size_t h = static_cast<size_t>(node_->kind) * 0x100001b3;
    switch (node_->kind) {
        case Kind::AtomSusp:
        case Kind::VarSusp: return hash_mix(h, hash_susp(node_->susp));
        case Kind::App:
            h = hash_mix(h, std::hash<std::string>{}(node_->sym));
            for (auto& a : node_->args) h = hash_mix(h, a.hash());
            return h;
        case Kind::Abs:
            h = hash_mix(h, hash_susp(node_->susp));
            return hash_mix(h, node_->args[0].hash());
    }
    return h;
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.node_->kind != b.node_->kind) return false;
    switch (a.node_->kind) {
        case Term::Kind::AtomSusp:
        case Term::Kind::VarSusp: return a.node_->susp == b.node_->susp;
        case Term::Kind::App:
            return a.node_->sym == b.node_->sym && a.node_->args == b.node_->args;
        case Term::Kind::Abs:
            return a.node_->susp == b.node_->susp && a.node_->args[0] == b.node_->args[0];
    }
    return false;
}

bool operator!=(const Term& a, const Term& b) { return !(a == b); }

int compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (a.node_->kind != b.node_->kind)
        return static_cast<int>(a.node_->kind) < static_cast<int>(b.node_->kind) ? -1 : 1;
    switch (a.node_->kind) {
        case Term::Kind::AtomSusp:
        case Term::Kind::VarSusp: return compare(a.node_->susp, b.node_->susp);
        case Term::Kind::App: {
            if (int c = a.node_->sym.compare(b.node_->sym)) return c;
            if (a.node_->args.size() != b.node_->args.size())
                return a.node_->args.size() < b.node_->args.size() ? -1 : 1;
            for (size_t i = 0; i < a.node_->args.size(); ++i)
                if (int c = compare(a.node_->args[i], b.node_->args[i])) return c;
            return 0;
        }
        case Term::Kind::Abs: {
            if (int c = compare(a.node_->susp, b.node_->susp)) return c;
            return compare(a.node_->args[0], b.node_->args[0]);
        }
    }
    return 0;
}

bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

// --------------------------------------------------------------------------
// Ground terms
// --------------------------------------------------------------------------

std::string apply_ground_perm(const GroundPerm& p, const std::string& atom) {
    std::string cur = atom;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        if (cur == it->lhs) cur = it->rhs;
        else if (cur == it->rhs) cur = it->lhs;
    }
    return cur;
}

GroundPerm invert_ground(const GroundPerm& p) { return GroundPerm(p.rbegin(), p.rend()); }

GroundPerm compose_ground(const GroundPerm& outer, const GroundPerm& inner) {
    GroundPerm r = outer;
    r.insert(r.end(), inner.begin(), inner.end());
    return r;
}

GTerm GTerm::atom(std::string a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->name = std::move(a);
    GTerm t;
    t.node_ = std::move(n);
    return t;
}

GTerm GTerm::app(std::string f, std::vector<GTerm> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    n->name = std::move(f);
    n->args = std::move(args);
    GTerm t;
    t.node_ = std::move(n);
    return t;
}

GTerm GTerm::abs(std::string a, GTerm body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Abs;
    n->name = std::move(a);
    n->args.push_back(std::move(body));
    GTerm t;
    t.node_ = std::move(n);
    return t;
}

GTerm GTerm::var(GroundPerm p, std::string x) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = std::move(x);
    // keep only swaps that move something
    for (auto& sw : p)
        if (sw.lhs != sw.rhs) n->perm.push_back(sw);
    GTerm t;
    t.node_ = std::move(n);
    return t;
}

bool GTerm::is_ground() const {
    switch (kind()) {
        case Kind::Atom: return true;
        case Kind::Var: return false;
        case Kind::Abs: return body().is_ground();
        case Kind::App:
            for (auto& a : args())
                if (!a.is_ground()) return false;
            return true;
    }
    return true;
}

size_t GTerm::hash() const {
    size_t h = static_cast<size_t>(node_->kind) * 0x01000193;
    h = hash_mix(h, std::hash<std::string>{}(node_->name));
    for (auto& a : node_->args) h = hash_mix(h, a.hash());
    for (auto& sw : node_->perm) {
        h = hash_mix(h, std::hash<std::string>{}(sw.lhs));
        h = hash_mix(h, std::hash<std::string>{}(sw.rhs));
    }
    return h;
}

bool operator==(const GTerm& a, const GTerm& b) { return compare(a, b) == 0; }
bool operator!=(const GTerm& a, const GTerm& b) { return compare(a, b) != 0; }

int compare(const GTerm& a, const GTerm& b) {
    if (a.node_ == b.node_) return 0;
    if (a.node_->kind != b.node_->kind)
        return static_cast<int>(a.node_->kind) < static_cast<int>(b.node_->kind) ? -1 : 1;
    if (int c = a.node_->name.compare(b.node_->name)) return c;
    if (a.node_->perm.size() != b.node_->perm.size())
        return a.node_->perm.size() < b.node_->perm.size() ? -1 : 1;
    for (size_t i = 0; i < a.node_->perm.size(); ++i) {
        if (int c = a.node_->perm[i].lhs.compare(b.node_->perm[i].lhs)) return c;
        if (int c = a.node_->perm[i].rhs.compare(b.node_->perm[i].rhs)) return c;
    }
    if (a.node_->args.size() != b.node_->args.size())
        return a.node_->args.size() < b.node_->args.size() ? -1 : 1;
    for (size_t i = 0; i < a.node_->args.size(); ++i)
        if (int c = compare(a.node_->args[i], b.node_->args[i])) return c;
    return 0;
}

bool operator<(const GTerm& a, const GTerm& b) { return compare(a, b) < 0; }

GTerm apply_permutation_ground(const GroundPerm& p, const GTerm& t) {
    if (p.empty()) return t;
    switch (t.kind()) {
        case GTerm::Kind::Atom: return GTerm::atom(apply_ground_perm(p, t.name()));
        case GTerm::Kind::Abs:
            return GTerm::abs(apply_ground_perm(p, t.name()), apply_permutation_ground(p, t.body()));
        case GTerm::Kind::App: {
            std::vector<GTerm> args;
            args.reserve(t.args().size());
            for (auto& a : t.args()) args.push_back(apply_permutation_ground(p, a));
            return GTerm::app(t.sym(), std::move(args));
        }
        case GTerm::Kind::Var: return GTerm::var(compose_ground(p, t.vperm()), t.name());
    }
    return t;
}

// --------------------------------------------------------------------------
// Freshness
// --------------------------------------------------------------------------

bool operator==(const FreshnessConstraint& a, const FreshnessConstraint& b) {
    return a.avar == b.avar && a.target == b.target;
}

int compare(const FreshnessConstraint& a, const FreshnessConstraint& b) {
    if (int c = a.avar.compare(b.avar)) return c;
    return compare(a.target, b.target);
}

bool operator<(const FreshnessConstraint& a, const FreshnessConstraint& b) {
    return compare(a, b) < 0;
}

FreshnessContext::FreshnessContext(std::vector<FreshnessConstraint> cs) : cs_(std::move(cs)) {
    std::sort(cs_.begin(), cs_.end());
    cs_.erase(std::unique(cs_.begin(), cs_.end()), cs_.end());
}

void FreshnessContext::add(FreshnessConstraint c) {
    auto it = std::lower_bound(cs_.begin(), cs_.end(), c);
    if (it == cs_.end() || !(*it == c)) cs_.insert(it, std::move(c));
}

void FreshnessContext::merge(const FreshnessContext& other) {
    for (auto& c : other.cs_) add(c);
}

bool operator==(const FreshnessContext& a, const FreshnessContext& b) { return a.cs_ == b.cs_; }

// --------------------------------------------------------------------------
// Substitution
// --------------------------------------------------------------------------

bool Substitution::maps_term(const std::string& x) const { return tmap_.count(x) > 0; }
bool Substitution::maps_atom(const std::string& a) const { return amap_.count(a) > 0; }

const Term& Substitution::term_image(const std::string& x) const {
    auto it = tmap_.find(x);
    if (it == tmap_.end()) throw std::out_of_range("no term binding for " + x);
    return it->second;
}

const Suspension& Substitution::atom_image(const std::string& a) const {
    auto it = amap_.find(a);
    if (it == amap_.end()) throw std::out_of_range("no atom binding for " + a);
    return it->second;
}

void Substitution::bind_term(const std::string& x, Term t) { tmap_[x] = std::move(t); }
void Substitution::bind_atom(const std::string& a, Suspension s) { amap_[a] = std::move(s); }

// --------------------------------------------------------------------------
// Operations
// --------------------------------------------------------------------------

Term apply_permutation_nla(const Permutation& pi, const Term& t) {
    if (pi.is_identity()) return t;
    switch (t.kind()) {
        case Term::Kind::AtomSusp: return Term::atom_susp(apply_perm(pi, t.susp()));
        case Term::Kind::VarSusp:
            return Term::var_susp(pi.compose(t.vperm()), t.vname());
        case Term::Kind::App: {
            TermList args;
            args.reserve(t.args().size());
            for (auto& a : t.args()) args.push_back(apply_permutation_nla(pi, a));
            return Term::app(t.sym(), std::move(args));
        }
        case Term::Kind::Abs:
            return Term::abs(apply_perm(pi, t.binder()), apply_permutation_nla(pi, t.body()));
    }
    return t;
}

Term flatten(const Term& t, const Signature& sig) {
    if (!t.is(Term::Kind::App)) {
        if (t.is(Term::Kind::Abs)) return Term::abs(t.binder(), flatten(t.body(), sig));
        return t;
    }
    TermList args;
    args.reserve(t.args().size());
    bool assoc = sig.contains(t.sym()) && is_assoc(sig.theory_of(t.sym()));
    for (auto& a : t.args()) {
        Term fa = flatten(a, sig);
        if (assoc && fa.is(Term::Kind::App) && fa.sym() == t.sym())
            args.insert(args.end(), fa.args().begin(), fa.args().end());
        else
            args.push_back(std::move(fa));
    }
    return Term::app(t.sym(), std::move(args));
}

GTerm flatten(const GTerm& t, const Signature& sig) {
    switch (t.kind()) {
        case GTerm::Kind::Atom:
        case GTerm::Kind::Var: return t;
        case GTerm::Kind::Abs: return GTerm::abs(t.name(), flatten(t.body(), sig));
        case GTerm::Kind::App: {
            std::vector<GTerm> args;
            bool assoc = sig.contains(t.sym()) && is_assoc(sig.theory_of(t.sym()));
            for (auto& a : t.args()) {
                GTerm fa = flatten(a, sig);
                if (assoc && fa.is(GTerm::Kind::App) && fa.sym() == t.sym())
                    args.insert(args.end(), fa.args().begin(), fa.args().end());
                else
                    args.push_back(std::move(fa));
            }
            return GTerm::app(t.sym(), std::move(args));
        }
    }
    return t;
}

Suspension apply_substitution(const Suspension& u, const Substitution& s) {
    Permutation p = apply_substitution(u.perm, s);
    if (s.maps_atom(u.var)) return apply_perm(p, s.atom_image(u.var));
    return Suspension{normalize_perm(p), u.var};
}

Permutation apply_substitution(const Permutation& p, const Substitution& s) {
    Permutation out;
    out.swaps.reserve(p.swaps.size());
    for (auto& sw : p.swaps)
        out.swaps.push_back(Swap{apply_substitution(sw.lhs, s), apply_substitution(sw.rhs, s)});
    return normalize_perm(out);
}

Term apply_substitution(const Term& t, const Substitution& s, const Signature& sig) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp: return Term::atom_susp(apply_substitution(t.susp(), s));
        case Term::Kind::VarSusp: {
            Permutation p = apply_substitution(t.vperm(), s);
            if (s.maps_term(t.vname()))
                return flatten(apply_permutation_nla(p, s.term_image(t.vname())), sig);
            return Term::var_susp(std::move(p), t.vname());
        }
        case Term::Kind::App: {
            TermList args;
            args.reserve(t.args().size());
            for (auto& a : t.args()) args.push_back(apply_substitution(a, s, sig));
            return flatten(Term::app(t.sym(), std::move(args)), sig);
        }
        case Term::Kind::Abs:
            return Term::abs(apply_substitution(t.binder(), s),
                             apply_substitution(t.body(), s, sig));
    }
    return t;
}

// Constraint subjects stay plain atom-variables: pi*A # s becomes A # pi^-1*s.
FreshnessContext apply_substitution(const FreshnessContext& ctx, const Substitution& s,
                                    const Signature& sig) {
    FreshnessContext out;
    for (auto& c : ctx.constraints()) {
        Suspension subj = s.maps_atom(c.avar) ? s.atom_image(c.avar) : Suspension::plain(c.avar);
        Term target = apply_substitution(c.target, s, sig);
        if (!subj.is_plain()) target = apply_permutation_nla(subj.perm.inverse(), target);
        out.add(FreshnessConstraint{subj.var, std::move(target)});
    }
    return out;
}

void collect_atom_vars(const Permutation& p, std::set<std::string>& out) {
    for (auto& sw : p.swaps) {
        collect_atom_vars(sw.lhs, out);
        collect_atom_vars(sw.rhs, out);
    }
}

void collect_atom_vars(const Suspension& u, std::set<std::string>& out) {
    out.insert(u.var);
    collect_atom_vars(u.perm, out);
}

void collect_atom_vars(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp: collect_atom_vars(t.susp(), out); break;
        case Term::Kind::VarSusp: collect_atom_vars(t.vperm(), out); break;
        case Term::Kind::App:
            for (auto& a : t.args()) collect_atom_vars(a, out);
            break;
        case Term::Kind::Abs:
            collect_atom_vars(t.binder(), out);
            collect_atom_vars(t.body(), out);
            break;
    }
}

void collect_atom_vars(const FreshnessContext& c, std::set<std::string>& out) {
    for (auto& fc : c.constraints()) {
        out.insert(fc.avar);
        collect_atom_vars(fc.target, out);
    }
}

std::set<std::string> atom_vars(const Term& t) {
    std::set<std::string> out;
    collect_atom_vars(t, out);
    return out;
}

std::set<std::string> atom_vars(const FreshnessContext& c) {
    std::set<std::string> out;
    collect_atom_vars(c, out);
    return out;
}

void collect_term_vars(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp: break;
        case Term::Kind::VarSusp: out.insert(t.vname()); break;
        case Term::Kind::App:
            for (auto& a : t.args()) collect_term_vars(a, out);
            break;
        case Term::Kind::Abs: collect_term_vars(t.body(), out); break;
    }
}

void collect_term_vars(const FreshnessContext& c, std::set<std::string>& out) {
    for (auto& fc : c.constraints()) collect_term_vars(fc.target, out);
}

std::set<std::string> term_vars(const Term& t) {
    std::set<std::string> out;
    collect_term_vars(t, out);
    return out;
}

size_t term_size(const Term& t, const Signature& sig) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp:
        case Term::Kind::VarSusp: return 1;
        case Term::Kind::Abs: return 1 + term_size(t.body(), sig);
        case Term::Kind::App: {
            size_t n = t.args().size();
            bool assoc = sig.contains(t.sym()) && is_assoc(sig.theory_of(t.sym()));
            size_t head = assoc && n >= 1 ? n - 1 : 1;
            size_t total = head;
            for (auto& a : t.args()) total += term_size(a, sig);
            return total;
        }
    }
    return 1;
}

size_t depth(const GTerm& t) {
    switch (t.kind()) {
        case GTerm::Kind::Atom:
        case GTerm::Kind::Var: return 0;
        case GTerm::Kind::Abs: return 1 + depth(t.body());
        case GTerm::Kind::App: {
            size_t d = 0;
            for (auto& a : t.args()) d = std::max(d, depth(a));
            return 1 + d;
        }
    }
    return 0;
}

// --------------------------------------------------------------------------
// Printing
// --------------------------------------------------------------------------

std::string to_string(const Suspension& s) {
    if (s.is_plain()) return s.var;
    return to_string(s.perm) + "*" + s.var;
}

std::string to_string(const Permutation& p) {
    std::string out;
    for (auto& sw : p.swaps) {
        out += "(";
        out += to_string(sw.lhs);
        out += " ";
        out += to_string(sw.rhs);
        out += ")";
    }
    return out;
}

std::string to_string(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp: return to_string(t.susp());
        case Term::Kind::VarSusp:
            if (t.vperm().is_identity()) return t.vname();
            return to_string(t.vperm()) + "*" + t.vname();
        case Term::Kind::App: {
            std::string out = t.sym();
            if (t.args().empty()) return out;
            out += "(";
            for (size_t i = 0; i < t.args().size(); ++i) {
                if (i) out += ",";
                out += to_string(t.args()[i]);
            }
            out += ")";
            return out;
        }
        case Term::Kind::Abs: {
            std::string b = to_string(t.binder());
            if (!t.binder().is_plain()) b = to_string(t.binder().perm) + "*" + t.binder().var;
            return "lam " + b + ". " + to_string(t.body());
        }
    }
    return "?";
}

std::string to_string(const GroundPerm& p) {
    std::string out;
    for (auto& sw : p) out += "(" + sw.lhs + " " + sw.rhs + ")";
    return out;
}

std::string to_string(const GTerm& t) {
    switch (t.kind()) {
        case GTerm::Kind::Atom: return t.name();
        case GTerm::Kind::Var:
            if (t.vperm().empty()) return t.name();
            return to_string(t.vperm()) + "*" + t.name();
        case GTerm::Kind::App: {
            std::string out = t.sym();
            if (t.args().empty()) return out;
            out += "(";
            for (size_t i = 0; i < t.args().size(); ++i) {
                if (i) out += ",";
                out += to_string(t.args()[i]);
            }
            out += ")";
            return out;
        }
        case GTerm::Kind::Abs: return "lam " + t.name() + ". " + to_string(t.body());
    }
    return "?";
}

std::string to_string(const FreshnessConstraint& c) { return c.avar + "#" + to_string(c.target); }

std::string to_string(const FreshnessContext& c) {
    std::string out;
    for (size_t i = 0; i < c.constraints().size(); ++i) {
        if (i) out += ", ";
        out += to_string(c.constraints()[i]);
    }
    return out;
}

}  // namespace naup
