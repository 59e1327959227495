#include "naup/ground.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace naup {

bool fresh_ground(const std::string& atom, const GTerm& t, const FreshFacts& facts) {
    switch (t.kind()) {
        case GTerm::Kind::Atom: return atom != t.name();
        case GTerm::Kind::Abs:
            if (atom == t.name()) return true;
            return fresh_ground(atom, t.body(), facts);
        case GTerm::Kind::App:
            for (auto& a : t.args())
                if (!fresh_ground(atom, a, facts)) return false;
            return true;
        case GTerm::Kind::Var: {
            // a # pi*X  iff  pi^-1(a) # X
            std::string back = apply_ground_perm(invert_ground(t.vperm()), atom);
            return facts.count({back, t.name()}) > 0;
        }
    }
    return false;
}

std::set<std::string> free_atoms(const GTerm& t) {
    std::set<std::string> out;
    switch (t.kind()) {
        case GTerm::Kind::Atom: out.insert(t.name()); break;
        case GTerm::Kind::Abs: {
            out = free_atoms(t.body());
            out.erase(t.name());
            break;
        }
        case GTerm::Kind::App:
            for (auto& a : t.args()) {
                auto sub = free_atoms(a);
                out.insert(sub.begin(), sub.end());
            }
            break;
        case GTerm::Kind::Var:
            throw std::invalid_argument("free_atoms: term is not ground");
    }
    return out;
}

namespace {

struct EqEnv {
    const TheoryConfig* cfg;
    const FreshFacts* facts;
    bool use_theories;
    // memo keyed on node identity; `alive` pins the keyed nodes so addresses
    // cannot be reused while the memo is in scope
    std::map<std::pair<const void*, const void*>, bool> memo;
    std::vector<std::pair<GTerm, GTerm>> alive;
};

bool eq_rec(const GTerm& s, const GTerm& t, EqEnv& env);

bool eq_args_positional(const std::vector<GTerm>& a, const std::vector<GTerm>& b, EqEnv& env) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!eq_rec(a[i], b[i], env)) return false;
    return true;
}

// Backtracking multiset matching for rule (AC).
bool eq_args_multiset(const std::vector<GTerm>& a, const std::vector<GTerm>& b, EqEnv& env,
                      size_t i, std::vector<bool>& used) {
    if (i == a.size()) return true;
    for (size_t j = 0; j < b.size(); ++j) {
        if (used[j]) continue;
        if (!eq_rec(a[i], b[j], env)) continue;
        used[j] = true;
        if (eq_args_multiset(a, b, env, i + 1, used)) return true;
        used[j] = false;
    }
    return false;
}

// Disagreement set of two swap-sequence permutations, over the atoms they
// mention.
std::set<std::string> disagreement(const GroundPerm& p1, const GroundPerm& p2) {
    std::set<std::string> support;
    for (auto& sw : p1) {
        support.insert(sw.lhs);
        support.insert(sw.rhs);
    }
    for (auto& sw : p2) {
        support.insert(sw.lhs);
        support.insert(sw.rhs);
    }
    std::set<std::string> out;
    for (auto& a : support)
        if (apply_ground_perm(p1, a) != apply_ground_perm(p2, a)) out.insert(a);
    return out;
}

bool eq_rec(const GTerm& s, const GTerm& t, EqEnv& env) {
    if (s.kind() != t.kind()) return false;
    switch (s.kind()) {
        case GTerm::Kind::Atom: return s.name() == t.name();
        case GTerm::Kind::Var: {
            if (s.name() != t.name()) return false;  // distinct term-variables never match
            for (auto& a : disagreement(s.vperm(), t.vperm()))
                if (!env.facts || env.facts->count({a, s.name()}) == 0) return false;
            return true;
        }
        case GTerm::Kind::Abs: {
            if (s.name() == t.name()) return eq_rec(s.body(), t.body(), env);
            if (!fresh_ground(s.name(), t.body(), env.facts ? *env.facts : FreshFacts{}))
                return false;
            GTerm swapped = apply_permutation_ground({GroundSwap{s.name(), t.name()}}, t.body());
            return eq_rec(s.body(), swapped, env);
        }
        case GTerm::Kind::App: {
            if (s.sym() != t.sym()) return false;
            auto key = std::make_pair(static_cast<const void*>(&s.args()),
                                      static_cast<const void*>(&t.args()));
            auto it = env.memo.find(key);
            if (it != env.memo.end()) return it->second;
            Theory th = env.use_theories ? env.cfg->theory_of(s.sym()) : Theory::Free;
            bool r = false;
            switch (th) {
                case Theory::Free:
                case Theory::A:
                    r = eq_args_positional(s.args(), t.args(), env);
                    break;
                case Theory::C:
                    r = eq_args_positional(s.args(), t.args(), env);
                    if (!r && s.args().size() == 2 && t.args().size() == 2)
                        r = eq_rec(s.args()[0], t.args()[1], env) &&
                            eq_rec(s.args()[1], t.args()[0], env);
                    break;
                case Theory::AC: {
                    if (s.args().size() == t.args().size()) {
                        std::vector<bool> used(t.args().size(), false);
                        r = eq_args_multiset(s.args(), t.args(), env, 0, used);
                    }
                    break;
                }
            }
            if (env.memo.emplace(key, r).second) env.alive.emplace_back(s, t);
            return r;
        }
    }
    return false;
}

}  // namespace

bool alpha_eq(const GTerm& s, const GTerm& t) {
    TheoryConfig none;
    EqEnv env{&none, nullptr, false, {}, {}};
    return eq_rec(s, t, env);
}

bool eq_modulo(const GTerm& s, const GTerm& t, const TheoryConfig& cfg) {
    GTerm fs = cfg.sig ? flatten(s, *cfg.sig) : s;
    GTerm ft = cfg.sig ? flatten(t, *cfg.sig) : t;
    EqEnv env{&cfg, nullptr, true, {}, {}};
    return eq_rec(fs, ft, env);
}

bool eq_modulo_symbolic(const GTerm& s, const GTerm& t, const TheoryConfig& cfg,
                        const FreshFacts& facts) {
    GTerm fs = cfg.sig ? flatten(s, *cfg.sig) : s;
    GTerm ft = cfg.sig ? flatten(t, *cfg.sig) : t;
    EqEnv env{&cfg, &facts, true, {}, {}};
    return eq_rec(fs, ft, env);
}

namespace {

// Minimal swap list realizing the permutation graph of p on its moved atoms.
GroundPerm canonical_perm(const GroundPerm& p) {
    std::set<std::string> support;
    for (auto& sw : p) {
        support.insert(sw.lhs);
        support.insert(sw.rhs);
    }
    std::map<std::string, std::string> graph;
    for (auto& a : support) {
        std::string img = apply_ground_perm(p, a);
        if (img != a) graph[a] = img;
    }
    GroundPerm out;
    // decompose into cycles, emit each cycle as adjacent transpositions
    std::set<std::string> done;
    for (auto& [a, _] : graph) {
        if (done.count(a)) continue;
        std::vector<std::string> cycle{a};
        done.insert(a);
        for (std::string cur = graph[a]; cur != a; cur = graph[cur]) {
            cycle.push_back(cur);
            done.insert(cur);
        }
        // (c0 c1)(c1 c2)...(c_{k-2} c_{k-1}) maps c0->c1->...->c0
        for (size_t i = 0; i + 1 < cycle.size(); ++i)
            out.push_back(GroundSwap{cycle[i], cycle[i + 1]});
    }
    return out;
}

GTerm canon_rec(const GTerm& t, const TheoryConfig& cfg,
                std::map<std::string, std::string>& env, size_t bdepth) {
    switch (t.kind()) {
        case GTerm::Kind::Atom: {
            auto it = env.find(t.name());
            return it == env.end() ? t : GTerm::atom(it->second);
        }
        case GTerm::Kind::Var: {
            GroundPerm renamed;
            for (auto& sw : t.vperm()) {
                auto l = env.count(sw.lhs) ? env.at(sw.lhs) : sw.lhs;
                auto r = env.count(sw.rhs) ? env.at(sw.rhs) : sw.rhs;
                renamed.push_back(GroundSwap{l, r});
            }
            return GTerm::var(canonical_perm(renamed), t.name());
        }
        case GTerm::Kind::Abs: {
            std::string marker = "_b" + std::to_string(bdepth);
            auto saved = env.find(t.name()) != env.end()
                             ? std::optional<std::string>(env[t.name()])
                             : std::nullopt;
            env[t.name()] = marker;
            GTerm body = canon_rec(t.body(), cfg, env, bdepth + 1);
            if (saved)
                env[t.name()] = *saved;
            else
                env.erase(t.name());
            return GTerm::abs(marker, std::move(body));
        }
        case GTerm::Kind::App: {
            std::vector<GTerm> args;
            args.reserve(t.args().size());
            for (auto& a : t.args()) args.push_back(canon_rec(a, cfg, env, bdepth));
            Theory th = cfg.theory_of(t.sym());
            if (th == Theory::AC || th == Theory::C)
                std::sort(args.begin(), args.end());
            return GTerm::app(t.sym(), std::move(args));
        }
    }
    return t;
}

}  // namespace

GTerm canonical_ground(const GTerm& t, const TheoryConfig& cfg) {
    GTerm ft = cfg.sig ? flatten(t, *cfg.sig) : t;
    std::map<std::string, std::string> env;
    return canon_rec(ft, cfg, env, 0);
}

}  // namespace naup
