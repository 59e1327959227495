#include "naup/eqvm.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace naup {

std::string AtomMapping::key() const {
    std::string k;
    for (auto& [a, r] : entries) k += a + ">" + to_string(r) + ";";
    k += "|" + disjunct.key();
    return k;
}

// --------------------------------------------------------------------------
// Decomposition
// --------------------------------------------------------------------------

namespace {

bool is_susp(const Term& t) {
    return t.is(Term::Kind::AtomSusp) || t.is(Term::Kind::VarSusp);
}

struct Work {
    std::vector<EquivEquation> todo;
    DecompBranch out;
};

}  // namespace

std::vector<DecompBranch> decompose(const std::vector<EquivEquation>& psi,
                                    const SimpleContext& ctx, const Signature& sig,
                                    NameGen& gen, const std::set<std::string>& all_avars,
                                    const std::set<std::string>& all_tvars) {
    std::vector<DecompBranch> done;
    std::vector<Work> stack;
    stack.push_back(Work{psi, DecompBranch{{}, ctx, {}}});

    while (!stack.empty()) {
        Work w = std::move(stack.back());
        stack.pop_back();
        if (w.todo.empty()) {
            done.push_back(std::move(w.out));
            continue;
        }
        EquivEquation eq = std::move(w.todo.back());
        w.todo.pop_back();
        const Term& l = eq.left;
        const Term& r = eq.right;

        if (is_susp(l) && is_susp(r)) {
            if (l.kind() != r.kind()) continue;  // atom vs term suspension: no solution
            w.out.leaves.push_back(std::move(eq));
            stack.push_back(std::move(w));
            continue;
        }
        if (l.kind() != r.kind()) continue;

        if (l.is(Term::Kind::Abs)) {
            // EqAbs: rename both binders to a fresh atom-variable
            std::string d = gen.fresh_atom_var();
            std::set<std::string> avars = all_avars;
            for (auto& [v, _] : w.out.fresh) avars.insert(v);
            FreshnessContext fc;
            for (auto& v : avars) fc.add(FreshnessConstraint{d, Term::atom_var(v)});
            for (auto& x : all_tvars) fc.add(FreshnessConstraint{d, Term::var(x)});
            w.out.ctx.add_fresh_var(d, all_tvars);
            w.out.fresh.emplace_back(d, std::move(fc));

            Permutation swl{{make_swap(l.binder(), Suspension::plain(d))}};
            Permutation swr{{make_swap(r.binder(), Suspension::plain(d))}};
            w.todo.push_back(EquivEquation{apply_permutation_nla(swl, l.body()),
                                           apply_permutation_nla(swr, r.body())});
            w.todo.push_back(EquivEquation{Term::atom_var(d), Term::atom_var(d)});
            stack.push_back(std::move(w));
            continue;
        }

        // applications
        if (l.sym() != r.sym()) continue;
        Theory th = sig.contains(l.sym()) ? sig.theory_of(l.sym()) : Theory::Free;
        const TermList& la = l.args();
        const TermList& ra = r.args();
        switch (th) {
            case Theory::Free:
            case Theory::A: {
                if (la.size() != ra.size()) break;  // Eqf needs equal flattened lengths
                for (size_t i = 0; i < la.size(); ++i)
                    w.todo.push_back(EquivEquation{la[i], ra[i]});
                stack.push_back(std::move(w));
                break;
            }
            case Theory::C: {
                // pushed in reverse so the straight alignment pops first
                for (int variant = 1; variant >= 0; --variant) {
                    Work branch = w;
                    branch.todo.push_back(EquivEquation{la[0], ra[variant]});
                    branch.todo.push_back(EquivEquation{la[1], ra[1 - variant]});
                    stack.push_back(std::move(branch));
                }
                break;
            }
            case Theory::AC: {
                if (la.size() != ra.size()) break;
                for (size_t k = ra.size(); k-- > 0;) {
                    Work branch = w;
                    branch.todo.push_back(EquivEquation{la[0], ra[k]});
                    TermList lrest(la.begin() + 1, la.end());
                    TermList rrest = ra;
                    rrest.erase(rrest.begin() + k);
                    Term lr = lrest.size() == 1 ? lrest[0] : Term::app(l.sym(), std::move(lrest));
                    Term rr = rrest.size() == 1 ? rrest[0] : Term::app(r.sym(), std::move(rrest));
                    branch.todo.push_back(EquivEquation{std::move(lr), std::move(rr)});
                    stack.push_back(std::move(branch));
                }
                break;
            }
        }
    }
    return done;
}

// --------------------------------------------------------------------------
// Mapping construction (Algorithm steps 4-17)
// --------------------------------------------------------------------------

namespace {

std::string pool_atom(int cls) { return "_q" + std::to_string(cls); }

struct Builder {
    const DecompBranch* branch;
    const TheoryConfig* cfg;
    std::vector<std::pair<int, int>> atom_eqs;           // resolved classes
    std::vector<std::pair<Term, Term>> tvar_eqs;         // pi1*X <~ pi2*X
    std::vector<AtomMapping> results;
    std::set<std::string> seen;

    GroundPerm resolve_ground(const Permutation& p) const {
        GroundPerm out;
        for (auto& sw : p.swaps)
            out.push_back(GroundSwap{pool_atom(branch->ctx.resolve(sw.lhs)),
                                     pool_atom(branch->ctx.resolve(sw.rhs))});
        return out;
    }

    bool tvar_checks(const std::map<int, int>& m) const {
        FreshFacts facts;
        for (auto& [rep, x] : branch->ctx.facts())
            facts.emplace(pool_atom(branch->ctx.class_of(rep)), x);
        for (auto& [lt, rt] : tvar_eqs) {
            // test ctx |= P(pi1)*X ~_E pi2*X via the disagreement set
            GroundPerm g1 = resolve_ground(lt.vperm());
            for (auto& sw : g1) {
                for (std::string* a : {&sw.lhs, &sw.rhs}) {
                    int cls = std::stoi(a->substr(2));
                    auto it = m.find(cls);
                    if (it != m.end()) *a = pool_atom(it->second);
                }
            }
            GroundPerm g2 = resolve_ground(rt.vperm());
            GTerm xl = GTerm::var(g1, lt.vname());
            GTerm xr = GTerm::var(g2, rt.vname());
            if (!eq_modulo_symbolic(xl, xr, *cfg, facts)) return false;
        }
        return true;
    }

    // moved classes must go to pairwise distinct classes; identity pins are
    // excluded (see the D<~D handling in the AC abstraction example)
    static bool injective(const std::map<int, int>& m) {
        std::set<int> targets;
        for (auto& [from, to] : m) {
            if (from == to) continue;
            if (!targets.insert(to).second) return false;
        }
        return true;
    }

    void emit(const std::map<int, int>& m) {
        AtomMapping am;
        for (auto& [from, to] : m) {
            if (from == to) continue;
            am.entries.emplace_back(branch->ctx.rep(from),
                                    Suspension::plain(branch->ctx.rep(to)));
        }
        std::sort(am.entries.begin(), am.entries.end(),
                  [](const auto& a, const auto& b) { return name_less(a.first, b.first); });
        am.disjunct = branch->ctx;
        // attach support constraints for the fresh variables mentioned
        std::set<std::string> mentioned;
        for (auto& [a, r] : am.entries) {
            mentioned.insert(a);
            collect_atom_vars(r, mentioned);
        }
        for (auto& [v, fc] : branch->fresh)
            if (mentioned.count(v)) am.support.merge(fc);
        if (seen.insert(am.key()).second) results.push_back(std::move(am));
    }

    void guess(std::vector<int> unmapped, const std::vector<int>& candidates,
               std::map<int, int> m) {
        if (unmapped.empty()) {
            if (tvar_checks(m) && injective(m)) emit(m);
            return;
        }
        int var = unmapped.back();
        unmapped.pop_back();
        guess(unmapped, candidates, m);  // leave unmapped
        for (int c : candidates) {
            if (c == var) continue;
            std::map<int, int> m2 = m;
            m2[var] = c;
            if (!injective(m2)) continue;
            guess(unmapped, candidates, m2);
        }
    }
};

}  // namespace

std::vector<AtomMapping> build_mapping(const DecompBranch& branch, const TheoryConfig& cfg) {
    Builder b;
    b.branch = &branch;
    b.cfg = &cfg;

    for (auto& eq : branch.leaves) {
        if (eq.left.is(Term::Kind::VarSusp)) {
            if (eq.left.vname() != eq.right.vname()) return {};  // step 4: fail
            b.tvar_eqs.emplace_back(eq.left, eq.right);
        } else {
            b.atom_eqs.emplace_back(branch.ctx.resolve(eq.left.susp()),
                                    branch.ctx.resolve(eq.right.susp()));
        }
    }

    std::map<int, int> m;
    for (auto& [cl, cr] : b.atom_eqs) {
        auto it = m.find(cl);
        if (it != m.end()) {
            if (it->second != cr) return {};  // conflicting requirement
        } else {
            m[cl] = cr;  // cl == cr acts as an identity pin
        }
    }

    // guessing phase: unmapped classes inside term-variable suspension
    // permutations may need images; candidates are the classes of the
    // right-hand sides (plus staying unmapped)
    std::set<int> unmapped_set;
    for (auto& [lt, rt] : b.tvar_eqs) {
        std::set<std::string> vs;
        collect_atom_vars(lt.vperm(), vs);
        for (auto& v : vs) {
            int c = branch.ctx.class_of(v);
            if (c >= 0 && !m.count(c)) unmapped_set.insert(c);
        }
        (void)rt;
    }
    std::vector<int> candidates;
    {
        std::set<int> cand_set;
        for (auto& eq : branch.leaves) {
            std::set<std::string> vs;
            if (eq.right.is(Term::Kind::AtomSusp)) collect_atom_vars(eq.right.susp(), vs);
            else collect_atom_vars(eq.right.vperm(), vs);
            for (auto& v : vs) {
                int c = branch.ctx.class_of(v);
                if (c >= 0) cand_set.insert(c);
            }
        }
        candidates.assign(cand_set.begin(), cand_set.end());
    }
    std::vector<int> unmapped(unmapped_set.begin(), unmapped_set.end());
    std::reverse(unmapped.begin(), unmapped.end());  // guess in ascending class order

    if (!Builder::injective(m)) return {};
    b.guess(std::move(unmapped), candidates, std::move(m));
    return std::move(b.results);
}

// --------------------------------------------------------------------------
// Full solver
// --------------------------------------------------------------------------

Permutation mapping_to_permutation(const AtomMapping& m) {
    Permutation pi;
    for (auto& [a, r] : m.entries) {
        Suspension cur = apply_perm(pi, Suspension::plain(a));
        int ccur = m.disjunct.covers(a) ? m.disjunct.resolve(cur) : -1;
        int ctgt = m.disjunct.covers(r.var) ? m.disjunct.resolve(r) : -2;
        Suspension curs = ccur >= 0 ? Suspension::plain(m.disjunct.rep(ccur)) : cur;
        Suspension tgts = ctgt >= 0 ? Suspension::plain(m.disjunct.rep(ctgt)) : r;
        if (ccur >= 0 && ccur == ctgt) continue;
        if (curs == tgts) continue;
        Permutation sw{{make_swap(curs, tgts)}};
        pi = sw.compose(pi);
    }
    return pi;
}

namespace {

struct EqvmRun {
    const std::vector<EquivEquation>* psi;
    const FreshnessContext* ctx;
    const Signature* sig;
    NameGen* gen;
    JudgementCache* cache;
    TheoryConfig cfg;
    std::set<std::string> avars, tvars;

    bool verify(AtomMapping& m) const {
        Permutation pi = mapping_to_permutation(m);
        FreshnessContext full = *ctx;
        full.merge(m.support);
        for (auto& eq : *psi) {
            Term moved = apply_permutation_nla(pi, eq.left);
            if (!holds_eq(full, moved, eq.right, cfg, cache)) return false;
        }
        return true;
    }

    void run_pass(const SimpleContext& sc, std::vector<AtomMapping>& out,
                  std::set<std::string>& seen) const {
        auto branches = decompose(*psi, sc, *sig, *gen, avars, tvars);
        for (auto& br : branches) {
            for (auto& m : build_mapping(br, cfg)) {
                if (!seen.insert(m.key()).second) continue;
                m.verified = verify(m);
                out.push_back(std::move(m));
            }
        }
    }
};

}  // namespace

static std::vector<AtomMapping> eqvm_impl(const std::vector<EquivEquation>& psi,
                                          const FreshnessContext& ctx, const Signature& sig,
                                          NameGen& gen, JudgementCache* cache, bool all) {
    EqvmRun run;
    run.psi = &psi;
    run.ctx = &ctx;
    run.sig = &sig;
    run.gen = &gen;
    run.cache = cache;
    run.cfg = TheoryConfig{&sig};
    for (auto& eq : psi) {
        collect_atom_vars(eq.left, run.avars);
        collect_atom_vars(eq.right, run.avars);
        collect_term_vars(eq.left, run.tvars);
        collect_term_vars(eq.right, run.tvars);
    }
    collect_atom_vars(ctx, run.avars);
    collect_term_vars(ctx, run.tvars);

    std::vector<AtomMapping> found;
    std::set<std::string> seen;

    // generic pass: the discrete equality pattern with whatever facts the
    // context yields under it (violated constraints contribute nothing)
    {
        std::vector<std::vector<std::string>> classes;
        for (auto& v : run.avars) classes.push_back({v});
        SimpleContext discrete(std::move(classes), {});
        std::set<std::pair<std::string, std::string>> facts;
        for (auto& c : ctx.constraints()) eval_constraint_under(discrete, c, facts);
        SimpleContext generic(discrete.classes(), std::move(facts));
        run.run_pass(generic, found, seen);
        if (!all) {
            for (auto& m : found)
                if (m.verified) return {m};
        }
    }

    for (auto& d : simplify_context(ctx, run.avars)) {
        size_t before = found.size();
        run.run_pass(d, found, seen);
        if (!all) {
            for (size_t i = before; i < found.size(); ++i)
                if (found[i].verified) return {found[i]};
        }
    }
    if (!all && found.size() > 1) found.resize(1);
    return found;
}

std::optional<AtomMapping> eqvm(const std::vector<EquivEquation>& psi,
                                const FreshnessContext& ctx, const Signature& sig, NameGen& gen,
                                JudgementCache* cache) {
    auto r = eqvm_impl(psi, ctx, sig, gen, cache, false);
    if (r.empty()) return std::nullopt;
    return r.front();
}

std::vector<AtomMapping> eqvm_all(const std::vector<EquivEquation>& psi,
                                  const FreshnessContext& ctx, const Signature& sig, NameGen& gen,
                                  JudgementCache* cache) {
    return eqvm_impl(psi, ctx, sig, gen, cache, true);
}

}  // namespace naup
