#include "support.hpp"

#include <algorithm>
#include <functional>

namespace naup::test {

Signature basic_sig() {
    Signature sig;
    sig.declare("f", 2, Theory::AC);
    sig.declare("fc", 2, Theory::C);
    sig.declare("fa", 2, Theory::A);
    sig.declare("g", 1, Theory::Free);
    sig.declare("h", 2, Theory::Free);
    sig.declare("c1", 0, Theory::Free);
    sig.declare("c2", 0, Theory::Free);
    sig.declare("c3", 0, Theory::Free);
    return sig;
}

GTerm random_ground(Rng& rng, const Signature& sig, const std::vector<std::string>& pool,
                    size_t depth) {
    if (depth == 0 || rng.below(4) == 0) {
        if (rng.coin()) return GTerm::atom(pool[rng.below(pool.size())]);
        std::vector<FunSymbol> consts;
        for (auto& f : sig.symbols())
            if (f.arity == 0) consts.push_back(f);
        if (consts.empty()) return GTerm::atom(pool[rng.below(pool.size())]);
        return GTerm::app(consts[rng.below(consts.size())].name, {});
    }
    switch (rng.below(3)) {
        case 0: return GTerm::abs(pool[rng.below(pool.size())],
                                  random_ground(rng, sig, pool, depth - 1));
        default: {
            std::vector<FunSymbol> fs;
            for (auto& f : sig.symbols())
                if (f.arity > 0) fs.push_back(f);
            const FunSymbol& f = fs[rng.below(fs.size())];
            std::vector<GTerm> args;
            size_t n = static_cast<size_t>(f.arity);
            if (is_assoc(f.theory) && rng.coin()) n += rng.below(2);  // wider flattened apps
            for (size_t i = 0; i < n; ++i)
                args.push_back(random_ground(rng, sig, pool, depth - 1));
            return flatten(GTerm::app(f.name, std::move(args)), sig);
        }
    }
}

namespace {

Suspension random_susp(Rng& rng, const std::vector<std::string>& avars) {
    Permutation p;
    size_t swaps = rng.below(3) == 0 ? 1 + rng.below(2) : 0;
    for (size_t i = 0; i < swaps; ++i) {
        std::string a = avars[rng.below(avars.size())];
        std::string b = avars[rng.below(avars.size())];
        if (a == b) continue;
        p.swaps.push_back(make_swap(a, b));
    }
    return apply_perm(normalize_perm(p), Suspension::plain(avars[rng.below(avars.size())]));
}

Permutation random_perm(Rng& rng, const std::vector<std::string>& avars) {
    Permutation p;
    size_t swaps = rng.below(3);
    for (size_t i = 0; i < swaps; ++i) {
        std::string a = avars[rng.below(avars.size())];
        std::string b = avars[rng.below(avars.size())];
        if (a == b) continue;
        p.swaps.push_back(make_swap(a, b));
    }
    return normalize_perm(p);
}

}  // namespace

Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& avars,
                 const std::vector<std::string>& tvars, size_t budget) {
    if (budget <= 1) {
        if (!tvars.empty() && rng.below(3) == 0)
            return Term::var_susp(random_perm(rng, avars), tvars[rng.below(tvars.size())]);
        if (avars.empty()) return Term::app("c1", {});
        return Term::atom_susp(random_susp(rng, avars));
    }
    switch (rng.below(6)) {
        case 0:
            if (avars.empty()) break;
            return Term::abs(Suspension::plain(avars[rng.below(avars.size())]),
                             random_term(rng, sig, avars, tvars, budget - 1));
        case 1:
            if (tvars.empty() || avars.empty()) break;
            return Term::var_susp(random_perm(rng, avars), tvars[rng.below(tvars.size())]);
        default: break;
    }
    std::vector<FunSymbol> fs;
    for (auto& f : sig.symbols())
        if (f.arity > 0) fs.push_back(f);
    const FunSymbol& f = fs[rng.below(fs.size())];
    size_t n = static_cast<size_t>(f.arity);
    if (is_assoc(f.theory) && budget > 4 && rng.coin()) ++n;
    TermList args;
    size_t share = std::max<size_t>(1, (budget - 1) / n);
    for (size_t i = 0; i < n; ++i) args.push_back(random_term(rng, sig, avars, tvars, share));
    return flatten(Term::app(f.name, std::move(args)), sig);
}

FreshnessContext random_context(Rng& rng, const Signature& sig,
                                const std::vector<std::string>& avars,
                                const std::vector<std::string>& tvars, size_t max_constraints) {
    FreshnessContext ctx;
    if (avars.empty()) return ctx;
    size_t n = rng.below(max_constraints + 1);
    for (size_t i = 0; i < n; ++i) {
        std::string a = avars[rng.below(avars.size())];
        switch (rng.below(3)) {
            case 0: {
                std::string b = avars[rng.below(avars.size())];
                if (b == a) break;
                ctx.add(FreshnessConstraint{a, Term::atom_var(b)});
                break;
            }
            case 1:
                if (tvars.empty()) break;
                ctx.add(FreshnessConstraint{a, Term::var(tvars[rng.below(tvars.size())])});
                break;
            default:
                ctx.add(FreshnessConstraint{a, random_term(rng, sig, avars, tvars, 3)});
                break;
        }
    }
    return ctx;
}

// --------------------------------------------------------------------------
// Equality oracle: the rules as written
// --------------------------------------------------------------------------

namespace {

bool oracle_rec(const GTerm& s, const GTerm& t, const TheoryConfig& cfg) {
    if (s.kind() != t.kind()) return false;
    switch (s.kind()) {
        case GTerm::Kind::Atom: return s.name() == t.name();
        case GTerm::Kind::Var: return false;  // oracle runs on ground terms only
        case GTerm::Kind::Abs: {
            if (s.name() == t.name()) return oracle_rec(s.body(), t.body(), cfg);
            if (!fresh_ground(s.name(), t.body())) return false;
            return oracle_rec(s.body(),
                              apply_permutation_ground({GroundSwap{s.name(), t.name()}}, t.body()),
                              cfg);
        }
        case GTerm::Kind::App: {
            if (s.sym() != t.sym() || s.args().size() != t.args().size()) return false;
            Theory th = cfg.theory_of(s.sym());
            if (th == Theory::C) {
                if (oracle_rec(s.args()[0], t.args()[0], cfg) &&
                    oracle_rec(s.args()[1], t.args()[1], cfg))
                    return true;
                return oracle_rec(s.args()[0], t.args()[1], cfg) &&
                       oracle_rec(s.args()[1], t.args()[0], cfg);
            }
            if (th == Theory::AC) {
                std::vector<size_t> idx(t.args().size());
                for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
                do {  // rule (AC): some permutation of the arguments
                    bool all = true;
                    for (size_t i = 0; i < idx.size() && all; ++i)
                        all = oracle_rec(s.args()[i], t.args()[idx[i]], cfg);
                    if (all) return true;
                } while (std::next_permutation(idx.begin(), idx.end()));
                return false;
            }
            for (size_t i = 0; i < s.args().size(); ++i)
                if (!oracle_rec(s.args()[i], t.args()[i], cfg)) return false;
            return true;
        }
    }
    return false;
}

}  // namespace

bool eq_oracle(const GTerm& s, const GTerm& t, const TheoryConfig& cfg) {
    GTerm fs = cfg.sig ? flatten(s, *cfg.sig) : s;
    GTerm ft = cfg.sig ? flatten(t, *cfg.sig) : t;
    return oracle_rec(fs, ft, cfg);
}

// --------------------------------------------------------------------------
// Judgement oracle
// --------------------------------------------------------------------------

OracleOutcome judgement_oracle(const FreshnessContext& ctx, JudgementKind kind,
                               const std::string& subject, const Term& lhs, const Term& rhs,
                               const TheoryConfig& cfg, size_t depth) {
    std::set<std::string> avs = atom_vars(ctx);
    std::set<std::string> tvs;
    collect_term_vars(ctx, tvs);
    if (kind == JudgementKind::Freshness) {
        avs.insert(subject);
    } else {
        collect_atom_vars(lhs, avs);
        collect_term_vars(lhs, tvs);
    }
    collect_atom_vars(rhs, avs);
    collect_term_vars(rhs, tvs);

    std::vector<std::string> av(avs.begin(), avs.end()), tv(tvs.begin(), tvs.end());
    std::vector<std::string> pool;
    for (size_t i = 0; i <= av.size(); ++i) pool.push_back("o" + std::to_string(i));

    std::vector<GTerm> terms;
    if (!tv.empty()) terms = enumerate_ground_terms(pool, *cfg.sig, depth);

    OracleOutcome out;
    out.exhausted_atom_only = tv.empty();

    std::vector<size_t> ai(av.size(), 0), ti(tv.size(), 0);
    while (true) {
        Interpretation rho;
        for (size_t i = 0; i < av.size(); ++i) rho.atom_map[av[i]] = pool[ai[i]];
        for (size_t i = 0; i < tv.size(); ++i) rho.term_map[tv[i]] = terms[ti[i]];
        bool respects = true;
        for (auto& c : ctx.constraints())
            if (!fresh_ground(rho.atom_map.at(c.avar), interpret(c.target, rho))) {
                respects = false;
                break;
            }
        if (respects) {
            bool ok;
            if (kind == JudgementKind::Freshness)
                ok = fresh_ground(rho.atom_map.at(subject), interpret(rhs, rho));
            else
                ok = eq_oracle(interpret(lhs, rho), interpret(rhs, rho), cfg);
            if (!ok) {
                out.counterexample_found = true;
                return out;
            }
        }
        size_t i = 0;
        for (; i < av.size(); ++i) {
            if (++ai[i] < pool.size()) break;
            ai[i] = 0;
        }
        if (i < av.size()) continue;
        size_t j = 0;
        for (; j < tv.size(); ++j) {
            if (++ti[j] < terms.size()) break;
            ti[j] = 0;
        }
        if (j == tv.size()) break;
    }
    return out;
}

// --------------------------------------------------------------------------
// Semantic inclusion
// --------------------------------------------------------------------------

namespace {

size_t interpretation_count(const TermInContext& tc, size_t pool, size_t nterms) {
    std::set<std::string> avs = atom_vars(tc.term);
    collect_atom_vars(tc.context, avs);
    std::set<std::string> tvs = term_vars(tc.term);
    collect_term_vars(tc.context, tvs);
    double total = 1;
    for (size_t i = 0; i < avs.size(); ++i) total *= static_cast<double>(pool);
    for (size_t i = 0; i < tvs.size(); ++i) total *= static_cast<double>(nterms);
    return total > 2e5 ? static_cast<size_t>(-1) : static_cast<size_t>(total);
}

}  // namespace

bool sem_included(const TermInContext& sub, const TermInContext& sup,
                  const std::vector<std::string>& pool, size_t depth, const TheoryConfig& cfg,
                  const Substitution* reversal_hint) {
    size_t nterms = enumerate_ground_terms(pool, *cfg.sig, depth).size();
    if (interpretation_count(sup, pool.size(), nterms) != static_cast<size_t>(-1)) {
        std::set<GTerm> ssub = sem_representatives(sub, pool, depth, cfg);
        std::set<GTerm> ssup = sem_representatives(sup, pool, depth, cfg);
        return std::includes(ssup.begin(), ssup.end(), ssub.begin(), ssub.end());
    }
    if (!reversal_hint) return false;

    // enumerate the subset side and exhibit each class in the superset via
    // the reversal substitution
    std::set<std::string> avs = atom_vars(sub.term);
    collect_atom_vars(sub.context, avs);
    std::set<std::string> tvs = term_vars(sub.term);
    collect_term_vars(sub.context, tvs);
    std::vector<std::string> av(avs.begin(), avs.end()), tv(tvs.begin(), tvs.end());
    std::vector<GTerm> terms = enumerate_ground_terms(pool, *cfg.sig, depth);

    std::vector<size_t> ai(av.size(), 0), ti(tv.size(), 0);
    while (true) {
        Interpretation rho;
        for (size_t i = 0; i < av.size(); ++i) rho.atom_map[av[i]] = pool[ai[i]];
        for (size_t i = 0; i < tv.size(); ++i) rho.term_map[tv[i]] = terms[ti[i]];
        bool respects = true;
        for (auto& c : sub.context.constraints())
            if (!fresh_ground(rho.atom_map.at(c.avar), interpret(c.target, rho))) {
                respects = false;
                break;
            }
        if (respects) {
            // extend rho to the superset's variables through the hint;
            // variables covered by neither are searched existentially
            Interpretation rho2 = rho;
            for (auto& [v, t] : reversal_hint->term_map()) rho2.term_map[v] = interpret(t, rho);
            for (auto& [v, s] : reversal_hint->atom_map())
                rho2.atom_map[v] = interpret(Term::atom_susp(s), rho).name();
            std::set<std::string> sup_avs = atom_vars(sup.term);
            collect_atom_vars(sup.context, sup_avs);
            std::vector<std::string> extra;
            for (auto& v : sup_avs)
                if (!rho2.atom_map.count(v)) extra.push_back(v);
            GTerm want = canonical_ground(interpret(sub.term, rho), cfg);

            bool member = false;
            std::vector<size_t> ei(extra.size(), 0);
            while (!member) {
                for (size_t i = 0; i < extra.size(); ++i) rho2.atom_map[extra[i]] = pool[ei[i]];
                bool ok = true;
                for (auto& c : sup.context.constraints()) {
                    if (!fresh_ground(rho2.atom_map.at(c.avar), interpret(c.target, rho2))) {
                        ok = false;
                        break;
                    }
                }
                if (ok && canonical_ground(interpret(sup.term, rho2), cfg) == want) member = true;
                size_t i = 0;
                for (; i < extra.size(); ++i) {
                    if (++ei[i] < pool.size()) break;
                    ei[i] = 0;
                }
                if (i == extra.size()) break;
            }
            if (!member) return false;
        }
        size_t i = 0;
        for (; i < av.size(); ++i) {
            if (++ai[i] < pool.size()) break;
            ai[i] = 0;
        }
        if (i < av.size()) continue;
        size_t j = 0;
        for (; j < tv.size(); ++j) {
            if (++ti[j] < terms.size()) break;
            ti[j] = 0;
        }
        if (j == tv.size()) break;
    }
    return true;
}

bool equal_mod_genvars(const Term& a, const Term& b, const Signature& sig) {
    TermInContext ta{FreshnessContext{}, a};
    TermInContext tb{FreshnessContext{}, b};
    return canonical_result_key(ta, {}, sig) == canonical_result_key(tb, {}, sig);
}

}  // namespace naup::test
