#include "naup/minimize.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>

namespace naup {

// --------------------------------------------------------------------------
// E-matching: find sigma over the reference's variables with ref*sigma ~_E
// cand, treating the candidate's variables as constants. A bounded number
// of candidate matches is enumerated; the caller verifies each.
// --------------------------------------------------------------------------

namespace {

constexpr size_t kMaxMatches = 256;

// rigid equality: no variables are instantiated, AC argument order is free
bool rigid_eq(const Term& a, const Term& b, const TheoryConfig& cfg);

bool rigid_eq_multiset(const TermList& a, const TermList& b, const TheoryConfig& cfg, size_t i,
                       std::vector<bool>& used) {
    if (i == a.size()) return true;
    for (size_t j = 0; j < b.size(); ++j) {
        if (used[j] || !rigid_eq(a[i], b[j], cfg)) continue;
        used[j] = true;
        if (rigid_eq_multiset(a, b, cfg, i + 1, used)) return true;
        used[j] = false;
    }
    return false;
}

bool rigid_eq(const Term& a, const Term& b, const TheoryConfig& cfg) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Term::Kind::AtomSusp:
        case Term::Kind::VarSusp: return a == b;
        case Term::Kind::Abs:
            return a.binder() == b.binder() && rigid_eq(a.body(), b.body(), cfg);
        case Term::Kind::App: {
            if (a.sym() != b.sym() || a.args().size() != b.args().size()) return false;
            switch (cfg.theory_of(a.sym())) {
                case Theory::Free:
                case Theory::A: {
                    for (size_t i = 0; i < a.args().size(); ++i)
                        if (!rigid_eq(a.args()[i], b.args()[i], cfg)) return false;
                    return true;
                }
                case Theory::C:
                    if (rigid_eq(a.args()[0], b.args()[0], cfg) &&
                        rigid_eq(a.args()[1], b.args()[1], cfg))
                        return true;
                    return rigid_eq(a.args()[0], b.args()[1], cfg) &&
                           rigid_eq(a.args()[1], b.args()[0], cfg);
                case Theory::AC: {
                    std::vector<bool> used(b.args().size(), false);
                    return rigid_eq_multiset(a.args(), b.args(), cfg, 0, used);
                }
            }
            return false;
        }
    }
    return false;
}

struct Matcher {
    const TheoryConfig& cfg;
    const Signature& sig;
    std::vector<Substitution> found;

    void emit(const Substitution& s) {
        if (found.size() < kMaxMatches) found.push_back(s);
    }

    bool bind_term_var(Substitution& s, const std::string& x, const Term& value) {
        if (s.maps_term(x)) return rigid_eq(s.term_image(x), value, cfg);
        s.bind_term(x, value);
        return true;
    }

    bool bind_atom_var(Substitution& s, const std::string& a, const Suspension& value) {
        if (s.maps_atom(a)) return s.atom_image(a) == value;
        s.bind_atom(a, value);
        return true;
    }

    // ref is the flexible side
    void match(const Term& ref, const Term& cand, Substitution s,
               const std::function<void(Substitution)>& k) {
        if (found.size() >= kMaxMatches) return;
        switch (ref.kind()) {
            case Term::Kind::VarSusp: {
                Term value = apply_permutation_nla(ref.vperm().inverse(), cand);
                if (bind_term_var(s, ref.vname(), value)) k(std::move(s));
                return;
            }
            case Term::Kind::AtomSusp: {
                if (!cand.is(Term::Kind::AtomSusp)) return;
                Suspension value = apply_perm(ref.susp().perm.inverse(), cand.susp());
                if (bind_atom_var(s, ref.susp().var, value)) k(std::move(s));
                return;
            }
            case Term::Kind::Abs: {
                if (!cand.is(Term::Kind::Abs)) return;
                Suspension value = apply_perm(ref.binder().perm.inverse(), cand.binder());
                if (!bind_atom_var(s, ref.binder().var, value)) return;
                match(ref.body(), cand.body(), std::move(s), k);
                return;
            }
            case Term::Kind::App: {
                if (!cand.is(Term::Kind::App) || ref.sym() != cand.sym()) return;
                switch (cfg.theory_of(ref.sym())) {
                    case Theory::Free: {
                        if (ref.args().size() != cand.args().size()) return;
                        match_positional(ref.args(), cand.args(), 0, std::move(s), k);
                        return;
                    }
                    case Theory::C: {
                        if (cand.args().size() != 2 || ref.args().size() != 2) return;
                        match(ref.args()[0], cand.args()[0], s, [&](Substitution s2) {
                            match(ref.args()[1], cand.args()[1], std::move(s2), k);
                        });
                        match(ref.args()[0], cand.args()[1], s, [&](Substitution s2) {
                            match(ref.args()[1], cand.args()[0], std::move(s2), k);
                        });
                        return;
                    }
                    case Theory::A: {
                        match_assoc(ref, cand, 0, 0, std::move(s), k);
                        return;
                    }
                    case Theory::AC: {
                        std::vector<bool> used(cand.args().size(), false);
                        match_ac(ref, cand, 0, used, std::move(s), k);
                        return;
                    }
                }
                return;
            }
        }
    }

    void match_positional(const TermList& ra, const TermList& ca, size_t i, Substitution s,
                          const std::function<void(Substitution)>& k) {
        if (i == ra.size()) {
            k(std::move(s));
            return;
        }
        match(ra[i], ca[i], std::move(s), [&](Substitution s2) {
            match_positional(ra, ca, i + 1, std::move(s2), k);
        });
    }

    // consecutive nonempty groups of cand args are assigned to ref args
    void match_assoc(const Term& ref, const Term& cand, size_t ri, size_t cfrom, Substitution s,
                     const std::function<void(Substitution)>& k) {
        const TermList& ra = ref.args();
        const TermList& ca = cand.args();
        if (ri == ra.size()) {
            if (cfrom == ca.size()) k(std::move(s));
            return;
        }
        size_t remaining_ref = ra.size() - ri - 1;
        for (size_t len = 1; cfrom + len + remaining_ref <= ca.size(); ++len) {
            Term piece = len == 1 ? ca[cfrom]
                                  : Term::app(cand.sym(),
                                              TermList(ca.begin() + cfrom,
                                                       ca.begin() + cfrom + len));
            match(ra[ri], piece, s, [&](Substitution s2) {
                match_assoc(ref, cand, ri + 1, cfrom + len, std::move(s2), k);
            });
        }
    }

    // non-variable ref args take exactly one cand arg; variable args absorb
    // the leftovers as nonempty groups
    void match_ac(const Term& ref, const Term& cand, size_t ri, std::vector<bool>& used,
                  Substitution s, const std::function<void(Substitution)>& k) {
        const TermList& ra = ref.args();
        const TermList& ca = cand.args();
        if (ri == ra.size()) {
            for (bool u : used)
                if (!u) return;  // leftovers but no variable to take them
            k(std::move(s));
            return;
        }
        if (ra[ri].is(Term::Kind::VarSusp)) {
            // defer variables to the end
            size_t vars_left = 0;
            for (size_t i = ri; i < ra.size(); ++i)
                if (ra[i].is(Term::Kind::VarSusp)) ++vars_left;
            if (vars_left == ra.size() - ri) {
                distribute_vars(ref, cand, ri, used, std::move(s), k);
                return;
            }
            // rotate: handle a non-variable first
            for (size_t j = ri + 1; j < ra.size(); ++j) {
                if (ra[j].is(Term::Kind::VarSusp)) continue;
                TermList reordered = ra;
                std::swap(reordered[ri], reordered[j]);
                Term ref2 = Term::app(ref.sym(), std::move(reordered));
                match_ac(ref2, cand, ri, used, std::move(s), k);
                return;
            }
            return;
        }
        for (size_t j = 0; j < ca.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            match(ra[ri], ca[j], s, [&](Substitution s2) {
                match_ac(ref, cand, ri + 1, used, std::move(s2), k);
            });
            used[j] = false;
        }
    }

    void distribute_vars(const Term& ref, const Term& cand, size_t ri, std::vector<bool>& used,
                         Substitution s, const std::function<void(Substitution)>& k) {
        const TermList& ra = ref.args();
        const TermList& ca = cand.args();
        std::vector<size_t> left;
        for (size_t j = 0; j < ca.size(); ++j)
            if (!used[j]) left.push_back(j);
        size_t nvars = ra.size() - ri;
        if (left.size() < nvars) return;
        // assign each leftover arg to one of the variables, all nonempty
        std::vector<std::vector<size_t>> groups(nvars);
        std::function<void(size_t)> assign = [&](size_t li) {
            if (found.size() >= kMaxMatches) return;
            if (li == left.size()) {
                Substitution s2 = s;
                bool ok = true;
                for (size_t v = 0; v < nvars && ok; ++v) {
                    if (groups[v].empty()) {
                        ok = false;
                        break;
                    }
                    TermList picked;
                    for (size_t j : groups[v]) picked.push_back(ca[j]);
                    Term piece = picked.size() == 1 ? picked[0]
                                                    : Term::app(cand.sym(), std::move(picked));
                    const Term& rv = ra[ri + v];
                    Term value = apply_permutation_nla(rv.vperm().inverse(), piece);
                    ok = bind_term_var(s2, rv.vname(), value);
                }
                if (ok) k(std::move(s2));
                return;
            }
            for (size_t v = 0; v < nvars; ++v) {
                groups[v].push_back(left[li]);
                assign(li + 1);
                groups[v].pop_back();
            }
        };
        assign(0);
    }
};

Substitution rename_apart(const TermInContext& tic, TermInContext& out, const Signature& sig) {
    Substitution ren;
    for (auto& a : atom_vars(tic.term)) ren.bind_atom(a, Suspension::plain(a + "~"));
    for (auto& a : atom_vars(tic.context)) ren.bind_atom(a, Suspension::plain(a + "~"));
    std::set<std::string> tvs = term_vars(tic.term);
    collect_term_vars(tic.context, tvs);
    for (auto& x : tvs) ren.bind_term(x, Term::var(x + "~"));
    out.term = apply_substitution(tic.term, ren, sig);
    out.context = apply_substitution(tic.context, ren, sig);
    return ren;
}

}  // namespace

bool tic_subset(const TermInContext& cand, const TermInContext& ref, const TheoryConfig& cfg,
                JudgementCache* cache) {
    if (!cfg.sig) throw std::invalid_argument("tic_subset: signature required");
    TermInContext c2;
    rename_apart(cand, c2, *cfg.sig);

    Matcher m{cfg, *cfg.sig, {}};
    m.match(ref.term, c2.term, Substitution{}, [&](Substitution s) { m.emit(s); });

    for (auto& sigma : m.found) {
        // the match is a candidate; the judgement engine is the arbiter
        Term instantiated = apply_substitution(ref.term, sigma, *cfg.sig);
        if (!holds_eq(c2.context, instantiated, c2.term, cfg, cache)) continue;
        FreshnessContext oblig = apply_substitution(ref.context, sigma, *cfg.sig);

        // reference variables the match never bound may take any value;
        // commit them to completely fresh choices relative to each
        // obligation and check under that strengthened context
        std::set<std::string> bound;
        for (auto& [v, _] : sigma.term_map()) bound.insert(v);
        for (auto& [v, _] : sigma.atom_map()) bound.insert(v);
        std::set<std::string> refvars = atom_vars(ref.term);
        collect_atom_vars(ref.context, refvars);
        std::set<std::string> reftvars = term_vars(ref.term);
        collect_term_vars(ref.context, reftvars);
        auto unbound_avar = [&](const std::string& v) {
            return refvars.count(v) && !bound.count(v);
        };
        auto unbound_tvar = [&](const std::string& v) {
            return reftvars.count(v) && !bound.count(v);
        };

        bool ok = true;
        for (auto& c : oblig.constraints()) {
            std::set<std::string> cav;
            cav.insert(c.avar);
            collect_atom_vars(c.target, cav);
            std::set<std::string> ctv;
            collect_term_vars(c.target, ctv);
            FreshnessContext strengthened = c2.context;
            for (auto& u : cav) {
                if (!unbound_avar(u)) continue;
                for (auto& v : cav)
                    if (v != u) strengthened.add(FreshnessConstraint{u, Term::atom_var(v)});
                for (auto& x : ctv)
                    if (!unbound_tvar(x)) strengthened.add(FreshnessConstraint{u, Term::var(x)});
            }
            for (auto& w : ctv) {
                if (!unbound_tvar(w)) continue;
                for (auto& v : cav) strengthened.add(FreshnessConstraint{v, Term::var(w)});
            }
            if (!entails_constraint(strengthened, c)) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

// --------------------------------------------------------------------------
// Constraint entailment by finite enumeration
// --------------------------------------------------------------------------

namespace {

// free atoms of a term under an assignment of atoms to atom-variables and
// atom subsets to term-variables
std::set<std::string> fat(const Term& t, const std::map<std::string, std::string>& pa,
                          const std::map<std::string, std::set<std::string>>& pt) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp: {
            Interpretation rho;
            for (auto& [v, a] : pa) rho.atom_map[v] = a;
            return {interpret(Term::atom_susp(t.susp()), rho).name()};
        }
        case Term::Kind::VarSusp: {
            Interpretation rho;
            for (auto& [v, a] : pa) rho.atom_map[v] = a;
            GroundPerm gp = interpret(t.vperm(), rho);
            std::set<std::string> out;
            for (auto& a : pt.at(t.vname())) out.insert(apply_ground_perm(gp, a));
            return out;
        }
        case Term::Kind::App: {
            std::set<std::string> out;
            for (auto& a : t.args()) {
                auto sub = fat(a, pa, pt);
                out.insert(sub.begin(), sub.end());
            }
            return out;
        }
        case Term::Kind::Abs: {
            Interpretation rho;
            for (auto& [v, a] : pa) rho.atom_map[v] = a;
            std::string b =
                apply_ground_perm(interpret(t.binder().perm, rho), pa.at(t.binder().var));
            auto out = fat(t.body(), pa, pt);
            out.erase(b);
            return out;
        }
    }
    return {};
}

bool constraint_holds(const FreshnessConstraint& c, const std::map<std::string, std::string>& pa,
                      const std::map<std::string, std::set<std::string>>& pt) {
    return fat(c.target, pa, pt).count(pa.at(c.avar)) == 0;
}

}  // namespace

namespace {

struct EntailsCache {
    std::mutex mu;
    std::map<std::string, bool> hits;
};

EntailsCache& entails_cache() {
    static EntailsCache cache;
    return cache;
}

}  // namespace

bool entails_constraint(const FreshnessContext& ctx, const FreshnessConstraint& c) {
    std::string key = to_string(ctx) + " |- " + to_string(c);
    {
        std::lock_guard<std::mutex> lock(entails_cache().mu);
        auto it = entails_cache().hits.find(key);
        if (it != entails_cache().hits.end()) return it->second;
    }
    bool result = [&] {
    // restrict to constraints connected to the query through shared variables
    std::set<std::string> avs;
    avs.insert(c.avar);
    collect_atom_vars(c.target, avs);
    std::set<std::string> tvs;
    collect_term_vars(c.target, tvs);
    std::vector<FreshnessConstraint> related, rest = ctx.constraints();
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = rest.begin(); it != rest.end();) {
            std::set<std::string> ca;
            ca.insert(it->avar);
            collect_atom_vars(it->target, ca);
            std::set<std::string> ct;
            collect_term_vars(it->target, ct);
            bool touches =
                std::any_of(ca.begin(), ca.end(),
                            [&](const std::string& v) { return avs.count(v) > 0; }) ||
                std::any_of(ct.begin(), ct.end(),
                            [&](const std::string& v) { return tvs.count(v) > 0; });
            if (touches) {
                avs.insert(ca.begin(), ca.end());
                tvs.insert(ct.begin(), ct.end());
                related.push_back(*it);
                it = rest.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    if (!consistent(FreshnessContext(std::move(rest)))) return true;

    std::vector<std::string> av(avs.begin(), avs.end());
    std::vector<std::string> tv(tvs.begin(), tvs.end());
    size_t n = std::max<size_t>(1, av.size());
    std::vector<std::string> pool;
    for (size_t i = 0; i < n; ++i) pool.push_back("_e" + std::to_string(i));

    std::vector<size_t> ai(av.size(), 0);
    std::vector<uint32_t> ti(tv.size(), 0);
    uint32_t subset_count = 1u << n;
    while (true) {
        std::map<std::string, std::string> pa;
        for (size_t i = 0; i < av.size(); ++i) pa[av[i]] = pool[ai[i]];
        std::map<std::string, std::set<std::string>> pt;
        for (size_t i = 0; i < tv.size(); ++i) {
            std::set<std::string> sub;
            for (size_t b = 0; b < n; ++b)
                if (ti[i] & (1u << b)) sub.insert(pool[b]);
            pt[tv[i]] = std::move(sub);
        }
        bool premises = true;
        for (auto& rc : related)
            if (!constraint_holds(rc, pa, pt)) {
                premises = false;
                break;
            }
        if (premises && !constraint_holds(c, pa, pt)) return false;

        size_t i = 0;
        for (; i < av.size(); ++i) {
            if (++ai[i] < pool.size()) break;
            ai[i] = 0;
        }
        if (i < av.size()) continue;
        size_t j = 0;
        for (; j < tv.size(); ++j) {
            if (++ti[j] < subset_count) break;
            ti[j] = 0;
        }
        if (j == tv.size()) break;
    }
    return true;
    }();
    std::lock_guard<std::mutex> lock(entails_cache().mu);
    entails_cache().hits.emplace(key, result);
    return result;
}

// --------------------------------------------------------------------------
// Post-processing
// --------------------------------------------------------------------------

PostProcessOutcome post_process(const TermInContext& result, const TermInContext& input1,
                                const TermInContext& input2, const std::set<std::string>& M,
                                const TheoryConfig& cfg, const PostProcessBudget& budget,
                                JudgementCache* cache) {
    PostProcessOutcome out;
    out.strengthened = result;
    if (M.size() > budget.max_avars) {
        out.budget_exceeded = true;
        return out;
    }
    std::vector<std::string> avars(M.begin(), M.end());
    std::sort(avars.begin(), avars.end(), name_less);
    std::set<std::string> tvset = term_vars(result.term);
    collect_term_vars(result.context, tvset);
    std::vector<std::string> tvars(tvset.begin(), tvset.end());
    std::sort(tvars.begin(), tvars.end(), name_less);

    std::vector<FreshnessConstraint> catalog;
    for (auto& a : avars)
        for (auto& b : avars)
            if (a != b && name_less(a, b)) catalog.push_back({a, Term::atom_var(b)});
    for (auto& a : avars)
        for (auto& x : tvars) catalog.push_back({a, Term::var(x)});
    for (auto& a : avars)
        for (auto& b : avars)
            if (a != b)
                catalog.push_back({a, Term::abs(Suspension::plain(b), Term::atom_var(a))});
    for (auto& a : avars)
        for (auto& b : avars)
            for (auto& x : tvars)
                if (a != b) catalog.push_back({a, Term::abs(Suspension::plain(b), Term::var(x))});

    // duplicate candidates (equal EQR form over M) are tested once
    std::set<std::string> seen_eqr;
    for (auto& c : catalog) {
        std::set<std::string> m2 = M;
        m2.insert(c.avar);
        collect_atom_vars(c.target, m2);
        std::string ek;
        for (auto& e : to_eqr(FreshnessContext({c}), m2).constraints) {
            for (auto& cls : e.partition) {
                ek += "{";
                for (auto& v : cls) ek += v + ",";
                ek += "}";
            }
            ek += e.is_false ? "F" : "";
            for (auto& [a, x] : e.facts) ek += a + "#" + x + ";";
            ek += "|";
        }
        if (!seen_eqr.insert(ek).second) continue;
        if (entails_constraint(result.context, c)) continue;  // no information

        TermInContext strengthened = result;
        strengthened.context.add(c);
        if (tic_subset(input1, strengthened, cfg, cache) &&
            tic_subset(input2, strengthened, cfg, cache))
            out.added.push_back(c);
    }
    for (auto& c : out.added) out.strengthened.context.add(c);
    return out;
}

std::vector<size_t> minimize_indices(const std::vector<TermInContext>& results,
                                     const std::vector<std::string>& keys,
                                     const TheoryConfig& cfg, JudgementCache* cache) {
    size_t n = results.size();
    std::vector<std::vector<int>> sub(n, std::vector<int>(n, -1));
    auto subset = [&](size_t i, size_t j) {
        if (sub[i][j] < 0) sub[i][j] = tic_subset(results[i], results[j], cfg, cache) ? 1 : 0;
        return sub[i][j] == 1;
    };
    std::vector<size_t> kept;
    for (size_t i = 0; i < n; ++i) {
        bool redundant = false;
        for (size_t j = 0; j < n && !redundant; ++j) {
            if (i == j) continue;
            if (!subset(j, i)) continue;  // [[j]] subseteq [[i]]: i is at least as general
            bool equal = subset(i, j);
            if (!equal || keys[j] < keys[i]) redundant = true;
        }
        if (!redundant) kept.push_back(i);
    }
    return kept;
}

// --------------------------------------------------------------------------
// Unique-lgg criteria
// --------------------------------------------------------------------------

namespace {

void check_constants_only(const GTerm& t, const std::string& f, const Signature& sig,
                          const char* who) {
    switch (t.kind()) {
        case GTerm::Kind::App: {
            if (t.args().empty()) {
                if (!sig.contains(t.sym()) || sig.at(t.sym()).arity != 0)
                    throw std::invalid_argument(std::string(who) + ": undeclared constant " +
                                                t.sym());
                return;
            }
            if (t.sym() != f)
                throw std::invalid_argument(std::string(who) + ": foreign symbol " + t.sym());
            for (auto& a : t.args()) check_constants_only(a, f, sig, who);
            return;
        }
        default:
            throw std::invalid_argument(std::string(who) +
                                        ": expressions must be built from one symbol and constants");
    }
}

Term ground_to_term(const GTerm& t) {
    switch (t.kind()) {
        case GTerm::Kind::App: {
            TermList args;
            for (auto& a : t.args()) args.push_back(ground_to_term(a));
            return Term::app(t.sym(), std::move(args));
        }
        default: throw std::invalid_argument("ground_to_term: constants expected");
    }
}

std::multiset<std::string> arg_names(const GTerm& t) {
    std::multiset<std::string> out;
    for (auto& a : t.args()) out.insert(a.sym());
    return out;
}

bool duplicate_free(const std::multiset<std::string>& m) {
    for (auto it = m.begin(); it != m.end(); ++it)
        if (m.count(*it) > 1) return false;
    return true;
}

}  // namespace

DepthMultiset depth_multiset(const GTerm& s, const Signature& sig) {
    DepthMultiset out;
    std::function<void(const GTerm&, size_t)> walk = [&](const GTerm& t, size_t d) {
        if (t.is(GTerm::Kind::App) && t.args().empty()) {
            out.emplace(t.sym(), d);
            return;
        }
        if (!t.is(GTerm::Kind::App))
            throw std::invalid_argument("depth_multiset: constants and applications expected");
        for (auto& a : t.args()) walk(a, d + 1);
    };
    (void)sig;
    walk(s, 0);
    return out;
}

std::optional<Term> unique_lgg_ac(const GTerm& s, const GTerm& t, const Signature& sig,
                                  NameGen& gen) {
    GTerm fs = flatten(s, sig), ft = flatten(t, sig);
    if (!fs.is(GTerm::Kind::App) || !ft.is(GTerm::Kind::App) || fs.sym() != ft.sym() ||
        sig.theory_of(fs.sym()) != Theory::AC || fs.args().size() < 2 || ft.args().size() < 2)
        throw std::invalid_argument("unique_lgg_ac: flattened applications of one AC symbol expected");
    for (auto& a : fs.args()) check_constants_only(a, fs.sym(), sig, "unique_lgg_ac");
    for (auto& a : ft.args()) check_constants_only(a, ft.sym(), sig, "unique_lgg_ac");

    std::multiset<std::string> ms = arg_names(fs), mt = arg_names(ft);
    if (ms == mt) return ground_to_term(fs);

    std::multiset<std::string> m1;
    std::set_intersection(ms.begin(), ms.end(), mt.begin(), mt.end(),
                          std::inserter(m1, m1.begin()));
    std::multiset<std::string> m2, m3;
    std::set_difference(ms.begin(), ms.end(), m1.begin(), m1.end(), std::inserter(m2, m2.begin()));
    std::set_difference(mt.begin(), mt.end(), m1.begin(), m1.end(), std::inserter(m3, m3.begin()));

    if (m2.empty() || m3.empty()) return std::nullopt;
    if (!duplicate_free(m1) || !duplicate_free(m2) || !duplicate_free(m3)) return std::nullopt;
    for (auto& c : m1)
        if (m2.count(c) || m3.count(c)) return std::nullopt;

    TermList args;
    for (auto& a : fs.args())
        if (m1.count(a.sym())) args.push_back(Term::app(a.sym(), {}));
    size_t l = std::min(m2.size(), m3.size());
    for (size_t i = 0; i < l; ++i) args.push_back(Term::var(gen.fresh_term_var()));
    if (args.size() == 1) return args[0];
    return Term::app(fs.sym(), std::move(args));
}

std::optional<Term> unique_lgg_c(const GTerm& s, const GTerm& t, const Signature& sig,
                                 NameGen& gen) {
    if (!s.is(GTerm::Kind::App) || !t.is(GTerm::Kind::App) || s.sym() != t.sym() ||
        sig.theory_of(s.sym()) != Theory::C)
        throw std::invalid_argument("unique_lgg_c: applications of one C symbol expected");
    check_constants_only(s, s.sym(), sig, "unique_lgg_c");
    check_constants_only(t, t.sym(), sig, "unique_lgg_c");

    TheoryConfig cfg{&sig};
    if (canonical_ground(s, cfg) == canonical_ground(t, cfg)) return ground_to_term(s);

    DepthMultiset msd = depth_multiset(s, sig), mtd = depth_multiset(t, sig);
    auto dupfree = [](const DepthMultiset& m) {
        for (auto it = m.begin(); it != m.end(); ++it)
            if (m.count(*it) > 1) return false;
        return true;
    };
    if (!dupfree(msd) || !dupfree(mtd)) return std::nullopt;
    DepthMultiset mst;
    std::set_intersection(msd.begin(), msd.end(), mtd.begin(), mtd.end(),
                          std::inserter(mst, mst.begin()));

    // star out maximal subexpressions free of M_st occurrences
    std::function<std::pair<GTerm, bool>(const GTerm&, size_t)> star =
        [&](const GTerm& u, size_t d) -> std::pair<GTerm, bool> {
        if (u.args().empty()) {
            bool keep = mst.count({u.sym(), d}) > 0;
            return {keep ? u : GTerm::app("*", {}), keep};
        }
        std::vector<GTerm> args;
        bool any = false;
        for (auto& a : u.args()) {
            auto [sub, kept] = star(a, d + 1);
            any = any || kept;
            args.push_back(std::move(sub));
        }
        if (!any) return {GTerm::app("*", {}), false};
        return {GTerm::app(u.sym(), std::move(args)), true};
    };
    GTerm ss = star(s, 0).first;
    GTerm ts = star(t, 0).first;
    if (canonical_ground(ss, cfg) != canonical_ground(ts, cfg)) return std::nullopt;

    std::function<Term(const GTerm&)> rebuild = [&](const GTerm& u) -> Term {
        if (u.args().empty()) {
            if (u.sym() == "*") return Term::var(gen.fresh_term_var());
            return Term::app(u.sym(), {});
        }
        TermList args;
        for (auto& a : u.args()) args.push_back(rebuild(a));
        return Term::app(u.sym(), std::move(args));
    };
    return rebuild(ss);
}

std::optional<Term> unique_lgg_a(const GTerm& s, const GTerm& t, const Signature& sig,
                                 NameGen& gen) {
    GTerm fs = flatten(s, sig), ft = flatten(t, sig);
    if (!fs.is(GTerm::Kind::App) || !ft.is(GTerm::Kind::App) || fs.sym() != ft.sym() ||
        sig.theory_of(fs.sym()) != Theory::A)
        throw std::invalid_argument("unique_lgg_a: flattened applications of one A symbol expected");
    std::vector<std::string> a, b;
    for (auto& x : fs.args()) {
        check_constants_only(x, fs.sym(), sig, "unique_lgg_a");
        a.push_back(x.sym());
    }
    for (auto& x : ft.args()) {
        check_constants_only(x, ft.sym(), sig, "unique_lgg_a");
        b.push_back(x.sym());
    }
    if (a == b) return ground_to_term(fs);

    // every symbol occurs at most once per string
    auto linear = [](const std::vector<std::string>& v) {
        std::set<std::string> seen;
        for (auto& x : v)
            if (!seen.insert(x).second) return false;
        return true;
    };
    if (!linear(a) || !linear(b)) return std::nullopt;

    std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::vector<std::string> qa, qb;
    for (auto& x : a)
        if (sb.count(x)) qa.push_back(x);
    for (auto& x : b)
        if (sa.count(x)) qb.push_back(x);
    if (qa != qb) return std::nullopt;  // common parts must agree in order

    // gap j holds the private symbols between common symbol j-1 and j
    auto gaps = [&](const std::vector<std::string>& v,
                    const std::vector<std::string>& q) {
        std::vector<std::vector<std::string>> out(q.size() + 1);
        size_t qi = 0;
        for (auto& x : v) {
            if (qi < q.size() && x == q[qi]) ++qi;
            else out[qi].push_back(x);
        }
        return out;
    };
    auto ga = gaps(a, qa), gb = gaps(b, qa);
    for (size_t j = 0; j < ga.size(); ++j)
        if (ga[j].empty() != gb[j].empty()) return std::nullopt;

    TermList args;
    for (size_t j = 0; j < ga.size(); ++j) {
        size_t k = std::min(ga[j].size(), gb[j].size());
        for (size_t i = 0; i < k; ++i) args.push_back(Term::var(gen.fresh_term_var()));
        if (j < qa.size()) args.push_back(Term::app(qa[j], {}));
    }
    if (args.size() == 1) return args[0];
    return Term::app(fs.sym(), std::move(args));
}

}  // namespace naup
