#include "naup/enau.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>

#include "naup/minimize.hpp"

namespace naup {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Dec: return "Dec";
        case Rule::Abs: return "Abs";
        case Rule::SusAA: return "SusAA";
        case Rule::SusYY: return "SusYY";
        case Rule::SolAB: return "SolAB";
        case Rule::Sol: return "Sol";
        case Rule::DecA: return "DecA";
        case Rule::DecC: return "DecC";
        case Rule::DecAC: return "DecAC";
        case Rule::Mer: return "Mer";
    }
    return "?";
}

EnauEngine::EnauEngine(const Signature& sig, FreshnessContext nabla)
    : sig_(&sig), nabla_(std::move(nabla)), cfg_{&sig} {}

State EnauEngine::init_state(const Term& s, const Term& t, const std::string& genvar) {
    std::set<std::string> used = term_vars(s);
    collect_term_vars(t, used);
    collect_term_vars(nabla_, used);
    if (used.count(genvar))
        throw std::invalid_argument("generalization variable " + genvar + " occurs in the input");
    State st;
    st.problems.push_back(AUEquation{GenVarKind::TermVar, genvar, flatten(s, *sig_),
                                     flatten(t, *sig_)});
    st.gamma = nabla_;
    return st;
}

State EnauEngine::init_state(const Term& s, const Term& t) {
    root_ = gen_.fresh_term_var();
    return init_state(s, t, root_);
}

bool EnauEngine::susp_equal_entailed(const FreshnessContext& gamma, const Term& a, const Term& b) {
    return holds_eq(gamma, a, b, cfg_, &cache_);
}

namespace {

// subsets of {0..n-1} that are neither empty nor full, in mask order
std::vector<std::vector<size_t>> proper_subsets(size_t n) {
    if (n > 20) throw std::length_error("flattened AC application too wide to branch on");
    std::vector<std::vector<size_t>> out;
    for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<size_t> sel;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) sel.push_back(i);
        out.push_back(std::move(sel));
    }
    return out;
}

Term group(const std::string& sym, const TermList& args, const std::vector<size_t>& sel) {
    if (sel.size() == 1) return args[sel[0]];
    TermList picked;
    picked.reserve(sel.size());
    for (size_t i : sel) picked.push_back(args[i]);
    return Term::app(sym, std::move(picked));
}

std::vector<size_t> complement(size_t n, const std::vector<size_t>& sel) {
    std::vector<size_t> out;
    std::set<size_t> in(sel.begin(), sel.end());
    for (size_t i = 0; i < n; ++i)
        if (!in.count(i)) out.push_back(i);
    return out;
}

}  // namespace

std::vector<RuleInstance> EnauEngine::applicable_rules(const State& st) const {
    auto* self = const_cast<EnauEngine*>(this);
    // deterministic rules first, on the first equation that admits one
    for (size_t i = 0; i < st.problems.size(); ++i) {
        const AUEquation& eq = st.problems[i];
        const Term& l = eq.left;
        const Term& r = eq.right;
        if (l.is(Term::Kind::App) && r.is(Term::Kind::App) && l.sym() == r.sym() &&
            sig_->theory_of(l.sym()) == Theory::Free)
            return {RuleInstance{Rule::Dec, i}};
        if (l.is(Term::Kind::Abs) && r.is(Term::Kind::Abs)) return {RuleInstance{Rule::Abs, i}};
        if (l.is(Term::Kind::AtomSusp) && r.is(Term::Kind::AtomSusp)) {
            bool same = self->susp_equal_entailed(st.gamma, l, r);
            return {RuleInstance{same ? Rule::SusAA : Rule::SolAB, i}};
        }
        if (l.is(Term::Kind::VarSusp) && r.is(Term::Kind::VarSusp) && l.vname() == r.vname() &&
            self->susp_equal_entailed(st.gamma, l, r))
            return {RuleInstance{Rule::SusYY, i}};
    }
    // equational decompositions branch
    for (size_t i = 0; i < st.problems.size(); ++i) {
        const AUEquation& eq = st.problems[i];
        const Term& l = eq.left;
        const Term& r = eq.right;
        if (!l.is(Term::Kind::App) || !r.is(Term::Kind::App) || l.sym() != r.sym()) continue;
        std::vector<RuleInstance> out;
        switch (sig_->theory_of(l.sym())) {
            case Theory::A:
                for (size_t k = 1; k < l.args().size(); ++k)
                    for (size_t m = 1; m < r.args().size(); ++m) {
                        RuleInstance ri{Rule::DecA, i};
                        ri.k = k;
                        ri.l = m;
                        out.push_back(ri);
                    }
                return out;
            case Theory::C:
                for (int v = 0; v < 2; ++v) {
                    RuleInstance ri{Rule::DecC, i};
                    ri.c_variant = v;
                    out.push_back(ri);
                }
                return out;
            case Theory::AC: {
                auto ls = proper_subsets(l.args().size());
                auto rs = proper_subsets(r.args().size());
                for (auto& sl : ls)
                    for (auto& sr : rs) {
                        RuleInstance ri{Rule::DecAC, i};
                        ri.sel_l = sl;
                        ri.sel_r = sr;
                        out.push_back(ri);
                    }
                return out;
            }
            case Theory::Free: break;  // unreachable: handled above
        }
    }
    if (!st.problems.empty()) return {RuleInstance{Rule::Sol, 0}};
    // P empty: Mer candidates over same-kind store pairs
    std::vector<RuleInstance> out;
    for (size_t i = 0; i < st.store.size(); ++i)
        for (size_t j = 0; j < st.store.size(); ++j) {
            if (i == j || st.store[i].kind != st.store[j].kind) continue;
            RuleInstance ri{Rule::Mer, i};
            ri.mer_keep = i;
            ri.mer_drop = j;
            out.push_back(ri);
        }
    return out;
}

namespace {

// sigma{X -> u}: applies the new binding to the range, then records it
void compose_term_binding(Substitution& s, const std::string& x, const Term& u,
                          const Signature& sig) {
    Substitution one;
    one.bind_term(x, u);
    Substitution out;
    for (auto& [v, t] : s.term_map()) out.bind_term(v, apply_substitution(t, one, sig));
    for (auto& [v, sp] : s.atom_map()) out.bind_atom(v, sp);
    out.bind_term(x, u);
    s = std::move(out);
}

void compose_atom_binding(Substitution& s, const std::string& a, const Suspension& u,
                          const Signature& sig) {
    Substitution one;
    one.bind_atom(a, u);
    Substitution out;
    for (auto& [v, t] : s.term_map()) out.bind_term(v, apply_substitution(t, one, sig));
    for (auto& [v, sp] : s.atom_map()) out.bind_atom(v, apply_substitution(sp, one));
    out.bind_atom(a, u);
    s = std::move(out);
}

AUEquation take_out(State& st, size_t i) {
    AUEquation eq = std::move(st.problems[i]);
    st.problems.erase(st.problems.begin() + i);
    return eq;
}

}  // namespace

std::optional<State> EnauEngine::apply_rule(const State& st0, const RuleInstance& ri) {
    State st = st0;
    st.trace.push_back(rule_name(ri.rule));
    switch (ri.rule) {
        case Rule::Dec: {
            AUEquation eq = take_out(st, ri.eq_index);
            TermList fresh_args;
            for (size_t a = 0; a < eq.left.args().size(); ++a) {
                std::string y = gen_.fresh_term_var();
                st.problems.push_back(AUEquation{GenVarKind::TermVar, y, eq.left.args()[a],
                                                 eq.right.args()[a]});
                fresh_args.push_back(Term::var(y));
            }
            compose_term_binding(st.subst, eq.genvar,
                                 Term::app(eq.left.sym(), std::move(fresh_args)), *sig_);
            return st;
        }
        case Rule::Abs: {
            AUEquation eq = take_out(st, ri.eq_index);
            std::string c = gen_.fresh_atom_var();
            std::string y = gen_.fresh_term_var();
            Permutation swl{{make_swap(eq.left.binder(), Suspension::plain(c))}};
            Permutation swr{{make_swap(eq.right.binder(), Suspension::plain(c))}};
            st.problems.push_back(AUEquation{GenVarKind::TermVar, y,
                                             apply_permutation_nla(swl, eq.left.body()),
                                             apply_permutation_nla(swr, eq.right.body())});
            st.gamma.add(FreshnessConstraint{c, eq.left});
            st.gamma.add(FreshnessConstraint{c, eq.right});
            compose_term_binding(st.subst, eq.genvar,
                                 Term::abs(Suspension::plain(c), Term::var(y)), *sig_);
            return st;
        }
        case Rule::SusAA:
        case Rule::SusYY: {
            AUEquation eq = take_out(st, ri.eq_index);
            compose_term_binding(st.subst, eq.genvar, eq.left, *sig_);
            return st;
        }
        case Rule::SolAB: {
            AUEquation eq = take_out(st, ri.eq_index);
            std::string c = gen_.fresh_atom_var();
            st.gamma.add(FreshnessConstraint{
                c, Term::abs(eq.left.susp(), Term::abs(eq.right.susp(), Term::atom_var(c)))});
            st.store.push_back(AUEquation{GenVarKind::AtomVar, c, eq.left, eq.right});
            compose_term_binding(st.subst, eq.genvar, Term::atom_var(c), *sig_);
            return st;
        }
        case Rule::Sol: {
            AUEquation eq = take_out(st, ri.eq_index);
            st.store.push_back(std::move(eq));
            return st;
        }
        case Rule::DecA: {
            AUEquation eq = take_out(st, ri.eq_index);
            std::string y1 = gen_.fresh_term_var();
            std::string y2 = gen_.fresh_term_var();
            const TermList& la = eq.left.args();
            const TermList& ra = eq.right.args();
            auto slice = [&](const TermList& v, size_t from, size_t to) {
                std::vector<size_t> idx;
                for (size_t i = from; i < to; ++i) idx.push_back(i);
                (void)v;
                return idx;
            };
            st.problems.push_back(AUEquation{GenVarKind::TermVar, y1,
                                             group(eq.left.sym(), la, slice(la, 0, ri.k)),
                                             group(eq.right.sym(), ra, slice(ra, 0, ri.l))});
            st.problems.push_back(
                AUEquation{GenVarKind::TermVar, y2,
                           group(eq.left.sym(), la, slice(la, ri.k, la.size())),
                           group(eq.right.sym(), ra, slice(ra, ri.l, ra.size()))});
            compose_term_binding(st.subst, eq.genvar,
                                 Term::app(eq.left.sym(), {Term::var(y1), Term::var(y2)}),
                                 *sig_);
            return st;
        }
        case Rule::DecC: {
            AUEquation eq = take_out(st, ri.eq_index);
            std::string y1 = gen_.fresh_term_var();
            std::string y2 = gen_.fresh_term_var();
            size_t i = static_cast<size_t>(ri.c_variant);
            st.problems.push_back(AUEquation{GenVarKind::TermVar, y1, eq.left.args()[0],
                                             eq.right.args()[i]});
            st.problems.push_back(AUEquation{GenVarKind::TermVar, y2, eq.left.args()[1],
                                             eq.right.args()[1 - i]});
            compose_term_binding(st.subst, eq.genvar,
                                 Term::app(eq.left.sym(), {Term::var(y1), Term::var(y2)}),
                                 *sig_);
            return st;
        }
        case Rule::DecAC: {
            AUEquation eq = take_out(st, ri.eq_index);
            std::string y1 = gen_.fresh_term_var();
            std::string y2 = gen_.fresh_term_var();
            const TermList& la = eq.left.args();
            const TermList& ra = eq.right.args();
            st.problems.push_back(AUEquation{GenVarKind::TermVar, y1,
                                             group(eq.left.sym(), la, ri.sel_l),
                                             group(eq.right.sym(), ra, ri.sel_r)});
            st.problems.push_back(
                AUEquation{GenVarKind::TermVar, y2,
                           group(eq.left.sym(), la, complement(la.size(), ri.sel_l)),
                           group(eq.right.sym(), ra, complement(ra.size(), ri.sel_r))});
            compose_term_binding(st.subst, eq.genvar,
                                 Term::app(eq.left.sym(), {Term::var(y1), Term::var(y2)}),
                                 *sig_);
            return st;
        }
        case Rule::Mer: {
            const AUEquation& keep = st0.store[ri.mer_keep];
            const AUEquation& drop = st0.store[ri.mer_drop];
            std::vector<EquivEquation> eqs{EquivEquation{keep.left, drop.left},
                                           EquivEquation{keep.right, drop.right}};
            auto mapping = eqvm(eqs, st0.gamma, *sig_, gen_, &cache_);
            if (!mapping || !mapping->verified) return std::nullopt;
            Permutation pi = mapping_to_permutation(*mapping);

            st.store.erase(st.store.begin() + ri.mer_drop);
            st.gamma.merge(mapping->support);
            Substitution upd;
            if (keep.kind == GenVarKind::AtomVar) {
                Suspension img = apply_perm(pi, Suspension::plain(keep.genvar));
                upd.bind_atom(drop.genvar, img);
                st.gamma = apply_substitution(st.gamma, upd, *sig_);
                compose_atom_binding(st.subst, drop.genvar, img, *sig_);
            } else {
                Term img = Term::var_susp(pi, keep.genvar);
                upd.bind_term(drop.genvar, img);
                st.gamma = apply_substitution(st.gamma, upd, *sig_);
                compose_term_binding(st.subst, drop.genvar, img, *sig_);
            }
            return st;
        }
    }
    return std::nullopt;
}

std::pair<size_t, size_t> EnauEngine::measure(const State& st) const {
    size_t p = 0;
    for (auto& eq : st.problems)
        p += term_size(eq.left, *sig_) + term_size(eq.right, *sig_);
    return {p, st.store.size()};
}

// --------------------------------------------------------------------------
// Canonical keys
// --------------------------------------------------------------------------

namespace {

void serialize_term(const Term& t, const Signature& sig,
                    const std::map<std::string, std::string>* ren, std::string& out);

std::string rename_of(const std::string& name, const std::map<std::string, std::string>* ren) {
    if (ren && NameGen::reserved(name)) {
        auto it = ren->find(name);
        if (it != ren->end()) return it->second;
    }
    return name;
}

void serialize_susp(const Suspension& u, const Signature& sig,
                    const std::map<std::string, std::string>* ren, std::string& out) {
    for (auto& sw : u.perm.swaps) {
        std::string a, b;
        serialize_susp(sw.lhs, sig, ren, a);
        serialize_susp(sw.rhs, sig, ren, b);
        if (b < a) std::swap(a, b);
        out += "(" + a + " " + b + ")";
    }
    out += rename_of(u.var, ren);
}

void serialize_term(const Term& t, const Signature& sig,
                    const std::map<std::string, std::string>* ren, std::string& out) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp:
            out += "a:";
            serialize_susp(t.susp(), sig, ren, out);
            return;
        case Term::Kind::VarSusp: {
            out += "v:";
            Suspension u{t.vperm(), t.vname()};
            serialize_susp(u, sig, ren, out);
            return;
        }
        case Term::Kind::App: {
            std::vector<std::string> parts;
            for (auto& a : t.args()) {
                std::string p;
                serialize_term(a, sig, ren, p);
                parts.push_back(std::move(p));
            }
            Theory th = sig.contains(t.sym()) ? sig.theory_of(t.sym()) : Theory::Free;
            if (th == Theory::AC || th == Theory::C) std::sort(parts.begin(), parts.end());
            out += t.sym() + "(";
            for (auto& p : parts) out += p + ",";
            out += ")";
            return;
        }
        case Term::Kind::Abs:
            out += "L";
            serialize_susp(t.binder(), sig, ren, out);
            out += ".";
            serialize_term(t.body(), sig, ren, out);
            return;
    }
}

void collect_reserved(const Term& t, std::vector<std::string>& order, std::set<std::string>& seen);

void collect_reserved_susp(const Suspension& u, std::vector<std::string>& order,
                           std::set<std::string>& seen) {
    for (auto& sw : u.perm.swaps) {
        collect_reserved_susp(sw.lhs, order, seen);
        collect_reserved_susp(sw.rhs, order, seen);
    }
    if (NameGen::reserved(u.var) && seen.insert(u.var).second) order.push_back(u.var);
}

void collect_reserved(const Term& t, std::vector<std::string>& order,
                      std::set<std::string>& seen) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp: collect_reserved_susp(t.susp(), order, seen); return;
        case Term::Kind::VarSusp:
            collect_reserved_susp(Suspension{t.vperm(), t.vname()}, order, seen);
            return;
        case Term::Kind::App:
            for (auto& a : t.args()) collect_reserved(a, order, seen);
            return;
        case Term::Kind::Abs:
            collect_reserved_susp(t.binder(), order, seen);
            collect_reserved(t.body(), order, seen);
            return;
    }
}

}  // namespace

std::string canonical_result_key(const TermInContext& tic, const std::vector<AUEquation>& store,
                                 const Signature& sig) {
    // first pass fixes a renaming by occurrence order, second serializes
    std::vector<std::string> order;
    std::set<std::string> seen;
    collect_reserved(tic.term, order, seen);
    std::vector<std::string> entries;
    for (auto& e : store) {
        std::string s;
        serialize_term(e.left, sig, nullptr, s);
        s += "=^=";
        serialize_term(e.right, sig, nullptr, s);
        entries.push_back(std::move(s));
    }
    std::sort(entries.begin(), entries.end());
    for (auto& e : store) {
        if (NameGen::reserved(e.genvar) && seen.insert(e.genvar).second) order.push_back(e.genvar);
        collect_reserved(e.left, order, seen);
        collect_reserved(e.right, order, seen);
    }
    for (auto& c : tic.context.constraints()) {
        if (NameGen::reserved(c.avar) && seen.insert(c.avar).second) order.push_back(c.avar);
        collect_reserved(c.target, order, seen);
    }
    std::map<std::string, std::string> ren;
    for (size_t i = 0; i < order.size(); ++i) ren[order[i]] = "g" + std::to_string(i + 1);

    std::string out = "t:";
    serialize_term(tic.term, sig, &ren, out);
    std::vector<std::string> ctx;
    for (auto& c : tic.context.constraints()) {
        std::string s = rename_of(c.avar, &ren) + "#";
        serialize_term(c.target, sig, &ren, s);
        ctx.push_back(std::move(s));
    }
    std::sort(ctx.begin(), ctx.end());
    out += "|G:";
    for (auto& c : ctx) out += c + ";";
    std::vector<std::string> st2;
    for (auto& e : store) {
        std::string s = rename_of(e.genvar, &ren) + ":";
        serialize_term(e.left, sig, &ren, s);
        s += "=^=";
        serialize_term(e.right, sig, &ren, s);
        st2.push_back(std::move(s));
    }
    std::sort(st2.begin(), st2.end());
    out += "|S:";
    for (auto& s : st2) out += s + ";";
    return out;
}

// --------------------------------------------------------------------------
// Search
// --------------------------------------------------------------------------

struct EnauSearch {
    EnauEngine& eng;
    const EnauLimits& limits;
    std::mutex mu;
    std::deque<State> frontier;
    std::set<std::string> visited;
    std::vector<GeneralizationResult> results;
    std::set<std::string> result_keys;
    size_t explored = 0;
    size_t violations = 0;
    bool capped = false;
    int active = 0;

    std::string state_key(const State& st) {
        TermInContext tic{st.gamma, eng.root_image(st)};
        std::string k = canonical_result_key(tic, st.store, eng.sig());
        k += "|P:";
        std::vector<std::string> ps;
        for (auto& e : st.problems) {
            TermInContext sub{FreshnessContext{}, e.left};
            ps.push_back(canonical_result_key(sub, {}, eng.sig()) + "=" +
                         canonical_result_key(TermInContext{FreshnessContext{}, e.right}, {},
                                              eng.sig()));
        }
        std::sort(ps.begin(), ps.end());
        for (auto& p : ps) k += p + ";";
        return k;
    }

    void harvest(const State& st) {
        GeneralizationResult r;
        r.result = TermInContext{st.gamma, eng.root_image(st)};
        r.store = st.store;
        r.subst = st.subst;
        r.trace = st.trace;
        std::string key = canonical_result_key(r.result, r.store, eng.sig());
        std::lock_guard<std::mutex> lock(mu);
        if (result_keys.insert(key).second) results.push_back(std::move(r));
    }

    void step(const State& st) {
        auto instances = eng.applicable_rules(st);
        bool final_state = st.problems.empty();
        auto before = eng.measure(st);
        std::vector<State> succs;
        for (auto& ri : instances) {
            auto nx = eng.apply_rule(st, ri);
            if (!nx) continue;  // Mer with no verified mapping
            final_state = false;
            auto after = eng.measure(*nx);
            if (!(after < before)) {
                std::lock_guard<std::mutex> lock(mu);
                ++violations;
            }
            succs.push_back(std::move(*nx));
        }
        if (final_state) {
            harvest(st);
            return;
        }
        std::lock_guard<std::mutex> lock(mu);
        for (auto& nx : succs) {
            if (explored + frontier.size() >= limits.max_states) {
                capped = true;
                return;
            }
            if (visited.insert(state_key(nx)).second) frontier.push_back(std::move(nx));
        }
    }

    void worker() {
        while (true) {
            State st;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (frontier.empty() || capped) {
                    if (frontier.empty()) return;
                    return;
                }
                st = std::move(frontier.front());
                frontier.pop_front();
                ++explored;
            }
            step(st);
        }
    }
};

EnauOutcome EnauEngine::run(const Term& s, const Term& t, const EnauLimits& limits) {
    State init = init_state(s, t);
    EnauSearch search{*this, limits};
    search.visited.insert(search.state_key(init));
    search.frontier.push_back(std::move(init));

    int jobs = std::max(1, limits.jobs);
    if (jobs == 1) {
        while (!search.frontier.empty() && !search.capped) {
            State st = std::move(search.frontier.front());
            search.frontier.pop_front();
            ++search.explored;
            search.step(st);
        }
    } else {
        // frontier can drain while peers are mid-step; rounds keep it simple
        while (true) {
            {
                std::lock_guard<std::mutex> lock(search.mu);
                if (search.frontier.empty() || search.capped) break;
            }
            std::vector<std::thread> pool;
            for (int i = 0; i < jobs; ++i) pool.emplace_back([&] { search.worker(); });
            for (auto& th : pool) th.join();
        }
    }

    EnauOutcome out;
    out.states_explored = search.explored;
    out.measure_violations = search.violations;
    out.complete = !search.capped;
    if (search.capped)
        out.limit_note = "state cap " + std::to_string(limits.max_states) + " reached";

    // semantic deduplication of syntactically distinct results
    TheoryConfig cfg{sig_};
    std::vector<GeneralizationResult> unique;
    for (auto& r : search.results) {
        bool dup = false;
        for (auto& u : unique) {
            if (tic_subset(r.result, u.result, cfg, &cache_) &&
                tic_subset(u.result, r.result, cfg, &cache_)) {
                dup = true;
                break;
            }
        }
        if (!dup) unique.push_back(std::move(r));
    }
    std::sort(unique.begin(), unique.end(), [&](const auto& a, const auto& b) {
        return canonical_result_key(a.result, a.store, *sig_) <
               canonical_result_key(b.result, b.store, *sig_);
    });
    out.results = std::move(unique);
    return out;
}

std::pair<Substitution, Substitution> reversal_substitutions(const GeneralizationResult& r) {
    Substitution s1, s2;
    for (auto& e : r.store) {
        if (e.kind == GenVarKind::AtomVar) {
            if (!e.left.is(Term::Kind::AtomSusp) || !e.right.is(Term::Kind::AtomSusp))
                throw std::logic_error("atom store entry without suspension sides");
            s1.bind_atom(e.genvar, e.left.susp());
            s2.bind_atom(e.genvar, e.right.susp());
        } else {
            s1.bind_term(e.genvar, e.left);
            s2.bind_term(e.genvar, e.right);
        }
    }
    return {std::move(s1), std::move(s2)};
}

}  // namespace naup
