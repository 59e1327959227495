#include "naup/semantics.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace naup {

bool name_less(const std::string& a, const std::string& b) {
    bool ra = NameGen::reserved(a), rb = NameGen::reserved(b);
    if (ra != rb) return rb;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

// --------------------------------------------------------------------------
// Interpretation
// --------------------------------------------------------------------------

static std::string interp_susp(const Suspension& u, const Interpretation& rho);

GroundPerm interpret(const Permutation& p, const Interpretation& rho) {
    GroundPerm out;
    out.reserve(p.swaps.size());
    for (auto& sw : p.swaps) out.push_back(GroundSwap{interp_susp(sw.lhs, rho), interp_susp(sw.rhs, rho)});
    return out;
}

static std::string interp_susp(const Suspension& u, const Interpretation& rho) {
    auto it = rho.atom_map.find(u.var);
    if (it == rho.atom_map.end()) throw std::out_of_range("interpretation misses atom-variable " + u.var);
    return apply_ground_perm(interpret(u.perm, rho), it->second);
}

GTerm interpret(const Term& t, const Interpretation& rho) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp: return GTerm::atom(interp_susp(t.susp(), rho));
        case Term::Kind::VarSusp: {
            auto it = rho.term_map.find(t.vname());
            if (it == rho.term_map.end())
                throw std::out_of_range("interpretation misses term-variable " + t.vname());
            return apply_permutation_ground(interpret(t.vperm(), rho), it->second);
        }
        case Term::Kind::App: {
            std::vector<GTerm> args;
            args.reserve(t.args().size());
            for (auto& a : t.args()) args.push_back(interpret(a, rho));
            return GTerm::app(t.sym(), std::move(args));
        }
        case Term::Kind::Abs:
            return GTerm::abs(interp_susp(t.binder(), rho), interpret(t.body(), rho));
    }
    throw std::logic_error("interpret: bad term");
}

// --------------------------------------------------------------------------
// SimpleContext
// --------------------------------------------------------------------------

SimpleContext::SimpleContext(std::vector<std::vector<std::string>> classes,
                             std::set<std::pair<std::string, std::string>> facts)
    : classes_(std::move(classes)), facts_(std::move(facts)) {
    for (auto& cls : classes_) std::sort(cls.begin(), cls.end(), name_less);
    std::sort(classes_.begin(), classes_.end(),
              [](const auto& a, const auto& b) { return name_less(a[0], b[0]); });
    for (size_t i = 0; i < classes_.size(); ++i)
        for (auto& v : classes_[i]) index_[v] = static_cast<int>(i);
}

bool SimpleContext::covers(const std::string& avar) const { return index_.count(avar) > 0; }

int SimpleContext::class_of(const std::string& avar) const {
    auto it = index_.find(avar);
    return it == index_.end() ? -1 : it->second;
}

int SimpleContext::resolve(const Suspension& u) const {
    int c = class_of(u.var);
    if (c < 0) throw std::logic_error("unresolved atom-variable " + u.var);
    return resolve_perm(u.perm, c);
}

int SimpleContext::resolve_perm(const Permutation& p, int cls) const {
    int cur = cls;
    for (auto it = p.swaps.rbegin(); it != p.swaps.rend(); ++it) {
        int l = resolve(it->lhs);
        int r = resolve(it->rhs);
        if (cur == l) cur = r;
        else if (cur == r) cur = l;
    }
    return cur;
}

void SimpleContext::add_fresh_var(const std::string& avar, const std::set<std::string>& tvars) {
    classes_.push_back({avar});
    index_[avar] = static_cast<int>(classes_.size()) - 1;
    for (auto& x : tvars) facts_.emplace(avar, x);
}

std::vector<SimpleContext::Constraint> SimpleContext::to_constraints() const {
    std::vector<Constraint> out;
    for (auto& cls : classes_)
        for (size_t i = 1; i < cls.size(); ++i)
            out.push_back({Form::Eq, cls[0], cls[i]});
    for (size_t i = 0; i < classes_.size(); ++i)
        for (size_t j = i + 1; j < classes_.size(); ++j)
            out.push_back({Form::Neq, classes_[i][0], classes_[j][0]});
    for (auto& [a, x] : facts_) out.push_back({Form::FreshVar, a, x});
    return out;
}

std::string SimpleContext::key() const {
    std::string k;
    for (auto& cls : classes_) {
        k += "{";
        for (auto& v : cls) k += v + ",";
        k += "}";
    }
    for (auto& [a, x] : facts_) k += a + "#" + x + ";";
    return k;
}

// --------------------------------------------------------------------------
// Constraint evaluation under a full partition
// --------------------------------------------------------------------------

namespace {

struct EvalOut {
    bool violated = false;
    std::set<std::pair<int, std::string>> facts;  // (class, term-var)
};

void eval_target(const SimpleContext& p, int subject_cls, const Term& target, EvalOut& out) {
    if (out.violated) return;
    switch (target.kind()) {
        case Term::Kind::AtomSusp:
            if (p.resolve(target.susp()) == subject_cls) out.violated = true;
            return;
        case Term::Kind::VarSusp: {
            // A # pi*X  ==  pi^-1 * A # X
            int back = p.resolve_perm(target.vperm().inverse(), subject_cls);
            out.facts.emplace(back, target.vname());
            return;
        }
        case Term::Kind::App:
            for (auto& a : target.args()) eval_target(p, subject_cls, a, out);
            return;
        case Term::Kind::Abs:
            if (p.resolve(target.binder()) == subject_cls) return;  // captured
            eval_target(p, subject_cls, target.body(), out);
            return;
    }
}

// Evaluates one constraint; empty facts and !violated means satisfied.
EvalOut eval_constraint(const SimpleContext& p, const FreshnessConstraint& c) {
    EvalOut out;
    int cls = p.class_of(c.avar);
    if (cls < 0) throw std::logic_error("constraint subject not covered: " + c.avar);
    eval_target(p, cls, c.target, out);
    return out;
}

std::set<std::string> constraint_avars(const FreshnessConstraint& c) {
    std::set<std::string> s;
    s.insert(c.avar);
    collect_atom_vars(c.target, s);
    return s;
}

// Enumerates set partitions of vars (restricted growth), pruning with the
// constraints as soon as all their variables are placed. Calls sink with
// the surviving partition and its residual facts.
void enumerate_consistent(const std::vector<std::string>& vars,
                          const std::vector<FreshnessConstraint>& constraints,
                          const std::function<bool(const SimpleContext&)>& sink) {
    std::vector<std::set<std::string>> cvars(constraints.size());
    std::vector<size_t> ready_at(constraints.size(), 0);
    std::map<std::string, size_t> pos;
    for (size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = i;
    for (size_t ci = 0; ci < constraints.size(); ++ci) {
        cvars[ci] = constraint_avars(constraints[ci]);
        size_t last = 0;
        for (auto& v : cvars[ci]) {
            auto it = pos.find(v);
            if (it == pos.end()) throw std::logic_error("constraint variable outside enumeration");
            last = std::max(last, it->second);
        }
        ready_at[ci] = last;
    }

    std::vector<int> assign(vars.size(), -1);
    bool stop = false;

    std::function<void(size_t, int)> rec = [&](size_t i, int nclasses) {
        if (stop) return;
        if (i == vars.size()) {
            std::vector<std::vector<std::string>> classes(nclasses);
            for (size_t k = 0; k < vars.size(); ++k) classes[assign[k]].push_back(vars[k]);
            SimpleContext part(std::move(classes), {});
            std::set<std::pair<std::string, std::string>> facts;
            for (auto& c : constraints) {
                EvalOut e = eval_constraint(part, c);
                if (e.violated) return;
                for (auto& [cls, x] : e.facts) facts.emplace(part.rep(cls), x);
            }
            SimpleContext full(part.classes(), std::move(facts));
            if (!sink(full)) stop = true;
            return;
        }
        for (int c = 0; c <= nclasses && !stop; ++c) {
            assign[i] = c;
            // prune: constraints whose variables are all placed must not be violated
            bool ok = true;
            for (size_t ci = 0; ci < constraints.size() && ok; ++ci) {
                if (ready_at[ci] != i) continue;
                std::vector<std::vector<std::string>> classes(std::max(nclasses, c + 1));
                for (size_t k = 0; k <= i; ++k) classes[assign[k]].push_back(vars[k]);
                classes.erase(std::remove_if(classes.begin(), classes.end(),
                                             [](const auto& v) { return v.empty(); }),
                              classes.end());
                SimpleContext part(std::move(classes), {});
                if (eval_constraint(part, constraints[ci]).violated) ok = false;
            }
            if (ok) rec(i + 1, std::max(nclasses, c + 1));
        }
        assign[i] = -1;
    };
    rec(0, 0);
}

std::vector<std::string> sorted_vars(const std::set<std::string>& s) {
    std::vector<std::string> v(s.begin(), s.end());
    std::sort(v.begin(), v.end(), name_less);
    return v;
}

}  // namespace

bool eval_constraint_under(const SimpleContext& p, const FreshnessConstraint& c,
                           std::set<std::pair<std::string, std::string>>& facts) {
    EvalOut e = eval_constraint(p, c);
    if (e.violated) return false;
    for (auto& [cls, x] : e.facts) facts.emplace(p.rep(cls), x);
    return true;
}

std::vector<SimpleContext> simplify_context(const FreshnessContext& ctx,
                                            const std::set<std::string>& extra) {
    std::set<std::string> vars = atom_vars(ctx);
    vars.insert(extra.begin(), extra.end());
    std::vector<SimpleContext> out;
    enumerate_consistent(sorted_vars(vars), ctx.constraints(), [&](const SimpleContext& sc) {
        out.push_back(sc);
        return true;
    });
    return out;
}

std::vector<AtomPartition> enumerate_partitions(const std::set<std::string>& avars,
                                                const std::vector<SimpleContext>& disjuncts) {
    std::vector<AtomPartition> out;
    enumerate_consistent(sorted_vars(avars), {}, [&](const SimpleContext& p) {
        for (auto& d : disjuncts) {
            // agreement on the shared variables
            bool agree = true;
            std::vector<std::string> shared;
            for (auto& cls : d.classes())
                for (auto& v : cls)
                    if (p.class_of(v) >= 0) shared.push_back(v);
            for (size_t i = 0; i < shared.size() && agree; ++i)
                for (size_t j = i + 1; j < shared.size() && agree; ++j) {
                    bool in_d = d.class_of(shared[i]) == d.class_of(shared[j]);
                    bool in_p = p.class_of(shared[i]) == p.class_of(shared[j]);
                    if (in_d != in_p) agree = false;
                }
            if (!agree) continue;
            AtomPartition ap;
            ap.classes = p.classes();
            for (auto& [a, x] : d.facts())
                if (p.class_of(a) >= 0) ap.facts.emplace(p.rep(p.class_of(a)), x);
            out.push_back(std::move(ap));
            break;
        }
        return true;
    });
    return out;
}

// --------------------------------------------------------------------------
// Judgements
// --------------------------------------------------------------------------

std::optional<bool> JudgementCache::lookup(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it == cache_.end()) return std::nullopt;
    return it->second;
}

void JudgementCache::store(const std::string& key, bool value) {
    std::lock_guard<std::mutex> lock(mu_);
    cache_[key] = value;
}

namespace {

std::string pool_atom(int cls) { return "_p" + std::to_string(cls); }

GTerm instantiate(const Term& t, const SimpleContext& p) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp: return GTerm::atom(pool_atom(p.resolve(t.susp())));
        case Term::Kind::VarSusp: {
            GroundPerm gp;
            for (auto& sw : t.vperm().swaps)
                gp.push_back(GroundSwap{pool_atom(p.resolve(sw.lhs)), pool_atom(p.resolve(sw.rhs))});
            return GTerm::var(std::move(gp), t.vname());
        }
        case Term::Kind::App: {
            std::vector<GTerm> args;
            args.reserve(t.args().size());
            for (auto& a : t.args()) args.push_back(instantiate(a, p));
            return GTerm::app(t.sym(), std::move(args));
        }
        case Term::Kind::Abs:
            return GTerm::abs(pool_atom(p.resolve(t.binder())), instantiate(t.body(), p));
    }
    throw std::logic_error("instantiate: bad term");
}

FreshFacts pool_facts(const SimpleContext& p) {
    FreshFacts facts;
    for (auto& [rep, x] : p.facts()) facts.emplace(pool_atom(p.class_of(rep)), x);
    return facts;
}

// Splits ctx into the constraints connected (through shared atom-variables)
// to the judgement variables, and the rest.
void split_relevant(const FreshnessContext& ctx, std::set<std::string>& vars,
                    std::vector<FreshnessConstraint>& related,
                    std::vector<FreshnessConstraint>& rest) {
    std::vector<FreshnessConstraint> pending = ctx.constraints();
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = pending.begin(); it != pending.end();) {
            auto cv = constraint_avars(*it);
            bool touches = std::any_of(cv.begin(), cv.end(),
                                       [&](const std::string& v) { return vars.count(v) > 0; });
            if (touches) {
                vars.insert(cv.begin(), cv.end());
                related.push_back(*it);
                it = pending.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    rest = std::move(pending);
}

bool constraints_consistent(const std::vector<FreshnessConstraint>& cs, JudgementCache* cache);

// Runs `check` on every consistent partition of the judgement-relevant
// variables. Returns true when all pass (vacuously true when the context
// has no consistent interpretation at all).
bool for_all_partitions(const FreshnessContext& ctx, const std::set<std::string>& judgement_vars,
                        JudgementCache* cache,
                        const std::function<bool(const SimpleContext&)>& check) {
    std::set<std::string> vars = judgement_vars;
    std::vector<FreshnessConstraint> related, rest;
    split_relevant(ctx, vars, related, rest);
    if (!constraints_consistent(rest, cache)) return true;  // vacuous
    bool all = true;
    enumerate_consistent(sorted_vars(vars), related, [&](const SimpleContext& p) {
        if (!check(p)) {
            all = false;
            return false;
        }
        return true;
    });
    return all;
}

bool constraints_consistent(const std::vector<FreshnessConstraint>& cs, JudgementCache* cache) {
    if (cs.empty()) return true;
    std::string key = "cons|";
    for (auto& c : cs) key += to_string(c) + ";";
    if (cache) {
        if (auto hit = cache->lookup(key)) return *hit;
    }
    // connected components are independent
    std::vector<FreshnessConstraint> todo = cs;
    bool ok = true;
    while (!todo.empty() && ok) {
        std::set<std::string> vars = constraint_avars(todo.front());
        FreshnessContext comp;
        std::vector<FreshnessConstraint> related, rest;
        FreshnessContext all_ctx(todo);
        split_relevant(all_ctx, vars, related, rest);
        bool found = false;
        enumerate_consistent(sorted_vars(vars), related, [&](const SimpleContext&) {
            found = true;
            return false;
        });
        ok = found;
        todo = std::move(rest);
    }
    if (cache) cache->store(key, ok);
    return ok;
}

}  // namespace

bool consistent(const FreshnessContext& ctx, JudgementCache* cache) {
    return constraints_consistent(ctx.constraints(), cache);
}

bool holds_freshness(const FreshnessContext& ctx, const FreshnessConstraint& c,
                     const TheoryConfig& cfg, JudgementCache* cache) {
    (void)cfg;  // freshness is theory-independent
    std::string key = "fresh|" + to_string(ctx) + "|" + to_string(c);
    if (cache) {
        if (auto hit = cache->lookup(key)) return *hit;
    }
    std::set<std::string> jvars = constraint_avars(c);
    bool r = for_all_partitions(ctx, jvars, cache, [&](const SimpleContext& p) {
        return fresh_ground(pool_atom(p.class_of(c.avar)), instantiate(c.target, p),
                            pool_facts(p));
    });
    if (cache) cache->store(key, r);
    return r;
}

bool holds_eq(const FreshnessContext& ctx, const Term& s, const Term& t, const TheoryConfig& cfg,
              JudgementCache* cache) {
    std::string key = "eq|" + to_string(ctx) + "|" + to_string(s) + "|" + to_string(t);
    if (cache) {
        if (auto hit = cache->lookup(key)) return *hit;
    }
    std::set<std::string> jvars;
    collect_atom_vars(s, jvars);
    collect_atom_vars(t, jvars);
    bool r = for_all_partitions(ctx, jvars, cache, [&](const SimpleContext& p) {
        return eq_modulo_symbolic(instantiate(s, p), instantiate(t, p), cfg, pool_facts(p));
    });
    if (cache) cache->store(key, r);
    return r;
}

bool perm_equiv(const FreshnessContext& ctx, const Permutation& p1, const Permutation& p2,
                const TheoryConfig& cfg, JudgementCache* cache) {
    (void)cfg;
    std::string key = "perm|" + to_string(ctx) + "|" + to_string(p1) + "|" + to_string(p2);
    if (cache) {
        if (auto hit = cache->lookup(key)) return *hit;
    }
    std::set<std::string> jvars;
    collect_atom_vars(p1, jvars);
    collect_atom_vars(p2, jvars);
    bool r = for_all_partitions(ctx, jvars, cache, [&](const SimpleContext& p) {
        for (size_t c = 0; c < p.classes().size(); ++c)
            if (p.resolve_perm(p1, static_cast<int>(c)) != p.resolve_perm(p2, static_cast<int>(c)))
                return false;
        return true;
    });
    if (cache) cache->store(key, r);
    return r;
}

// --------------------------------------------------------------------------
// Bounded ground semantics
// --------------------------------------------------------------------------

std::vector<GTerm> enumerate_ground_terms(const std::vector<std::string>& pool,
                                          const Signature& sig, size_t maxdepth) {
    std::set<GTerm> cur;
    for (auto& a : pool) cur.insert(GTerm::atom(a));
    for (auto& f : sig.symbols())
        if (f.arity == 0) cur.insert(GTerm::app(f.name, {}));
    for (size_t d = 1; d <= maxdepth; ++d) {
        std::set<GTerm> next = cur;
        std::vector<GTerm> prev(cur.begin(), cur.end());
        for (auto& a : pool)
            for (auto& t : prev) next.insert(GTerm::abs(a, t));
        for (auto& f : sig.symbols()) {
            if (f.arity == 0) continue;
            std::vector<size_t> idx(f.arity, 0);
            while (true) {
                std::vector<GTerm> args;
                args.reserve(f.arity);
                for (int i = 0; i < f.arity; ++i) args.push_back(prev[idx[i]]);
                next.insert(flatten(GTerm::app(f.name, std::move(args)), sig));
                int i = f.arity - 1;
                while (i >= 0 && ++idx[i] == prev.size()) idx[i--] = 0;
                if (i < 0) break;
            }
        }
        cur = std::move(next);
    }
    return std::vector<GTerm>(cur.begin(), cur.end());
}

std::set<GTerm> sem_representatives(const TermInContext& tc, const std::vector<std::string>& pool,
                                    size_t maxdepth, const TheoryConfig& cfg) {
    std::set<std::string> avs = atom_vars(tc.term);
    collect_atom_vars(tc.context, avs);
    std::set<std::string> tvs = term_vars(tc.term);
    collect_term_vars(tc.context, tvs);
    std::vector<std::string> av(avs.begin(), avs.end());
    std::vector<std::string> tv(tvs.begin(), tvs.end());

    std::vector<GTerm> terms;
    if (!tv.empty()) {
        if (!cfg.sig) throw std::invalid_argument("sem_representatives: signature required");
        terms = enumerate_ground_terms(pool, *cfg.sig, maxdepth);
    }

    std::set<GTerm> out;
    std::vector<size_t> aidx(av.size(), 0), tidx(tv.size(), 0);
    while (true) {
        Interpretation rho;
        for (size_t i = 0; i < av.size(); ++i) rho.atom_map[av[i]] = pool[aidx[i]];
        for (size_t i = 0; i < tv.size(); ++i) rho.term_map[tv[i]] = terms[tidx[i]];
        bool ok = true;
        for (auto& c : tc.context.constraints()) {
            if (!fresh_ground(rho.atom_map.at(c.avar), interpret(c.target, rho))) {
                ok = false;
                break;
            }
        }
        if (ok) out.insert(canonical_ground(interpret(tc.term, rho), cfg));
        // advance the joint index vector
        size_t i = 0;
        for (; i < av.size(); ++i) {
            if (++aidx[i] < pool.size()) break;
            aidx[i] = 0;
        }
        if (i < av.size()) continue;
        size_t j = 0;
        for (; j < tv.size(); ++j) {
            if (++tidx[j] < terms.size()) break;
            tidx[j] = 0;
        }
        if (j == tv.size()) break;
    }
    return out;
}

// --------------------------------------------------------------------------
// EQR contexts
// --------------------------------------------------------------------------

EqrContext to_eqr(const FreshnessContext& ctx, const std::set<std::string>& M) {
    for (auto& v : atom_vars(ctx))
        if (!M.count(v)) throw std::invalid_argument("to_eqr: M must cover the context variables");
    EqrContext out;
    enumerate_consistent(sorted_vars(M), {}, [&](const SimpleContext& p) {
        EqrConstraint ec;
        ec.partition = p.classes();
        for (auto& c : ctx.constraints()) {
            EvalOut e = eval_constraint(p, c);
            if (e.violated) {
                ec.is_false = true;
                ec.facts.clear();
                break;
            }
            for (auto& [cls, x] : e.facts) ec.facts.emplace(p.rep(cls), x);
        }
        out.constraints.push_back(std::move(ec));
        return true;
    });
    return out;
}

}  // namespace naup
