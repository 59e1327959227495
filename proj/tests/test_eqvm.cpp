#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "naup/eqvm.hpp"
#include "support.hpp"

using namespace naup;
using naup::test::Rng;

namespace {

Term av(const std::string& n) { return Term::atom_var(n); }

Term susp(const std::string& a, const std::string& b, const std::string& v) {
    return Term::atom_susp(Suspension{Permutation{{make_swap(a, b)}}, v});
}

FreshnessConstraint fc(const std::string& a, Term t) { return FreshnessConstraint{a, std::move(t)}; }

SimpleContext discrete(const std::set<std::string>& vars) {
    std::vector<std::vector<std::string>> classes;
    for (auto& v : vars) classes.push_back({v});
    return SimpleContext(std::move(classes), {});
}

}  // namespace

TEST_CASE("decompose: Eqf splits positionally") {
    Signature sig = test::basic_sig();
    NameGen gen;
    std::vector<EquivEquation> psi{
        EquivEquation{Term::app("h", {av("A"), Term::var("X")}),
                      Term::app("h", {av("B"), Term::var("X")})}};
    auto branches = decompose(psi, discrete({"A", "B"}), sig, gen, {"A", "B"}, {"X"});
    REQUIRE(branches.size() == 1);
    REQUIRE(branches[0].leaves.size() == 2);
}

TEST_CASE("decompose: EqfC branches over both orders") {
    Signature sig = test::basic_sig();
    NameGen gen;
    std::vector<EquivEquation> psi{
        EquivEquation{Term::app("fc", {av("A"), av("B")}), Term::app("fc", {av("C"), av("D")})}};
    auto branches = decompose(psi, discrete({"A", "B", "C", "D"}), sig, gen,
                              {"A", "B", "C", "D"}, {});
    REQUIRE(branches.size() == 2);
    for (auto& b : branches) CHECK(b.leaves.size() == 2);
}

TEST_CASE("decompose: EqAbs introduces a globally fresh variable") {
    // lam C. f(A,B,C) <~ lam A. f(A,B,A) under the discrete pattern gives
    // the branch {A <~ D, B <~ B, D <~ D} plus the D <~ D guard
    Signature sig = test::basic_sig();
    NameGen gen;
    Term l = Term::abs(Suspension::plain("C"), Term::app("f", {av("A"), av("B"), av("C")}));
    Term r = Term::abs(Suspension::plain("A"), Term::app("f", {av("A"), av("B"), av("A")}));
    auto branches =
        decompose({EquivEquation{l, r}}, discrete({"A", "B", "C"}), sig, gen, {"A", "B", "C"}, {});
    REQUIRE(!branches.empty());
    std::string d = branches[0].fresh.at(0).first;

    bool found = false;
    for (auto& b : branches) {
        std::multiset<std::pair<int, int>> resolved;
        for (auto& eq : b.leaves)
            resolved.insert({b.ctx.resolve(eq.left.susp()), b.ctx.resolve(eq.right.susp())});
        std::multiset<std::pair<int, int>> want{
            {b.ctx.class_of("A"), b.ctx.class_of(d)},
            {b.ctx.class_of("B"), b.ctx.class_of("B")},
            {b.ctx.class_of(d), b.ctx.class_of(d)},
            {b.ctx.class_of(d), b.ctx.class_of(d)}};
        if (resolved == want) found = true;
    }
    CHECK(found);

    // the fresh variable is constrained apart from everything in the input
    const FreshnessContext& support = branches[0].fresh.at(0).second;
    std::set<std::string> targets;
    for (auto& c : support.constraints()) {
        CHECK(c.avar == d);
        targets.insert(to_string(c.target));
    }
    CHECK(targets.count("A"));
    CHECK(targets.count("B"));
    CHECK(targets.count("C"));
}

TEST_CASE("eqvm golden: suspension chain") {
    // eqvm({C <~ (A C)*B, (B C)*A <~ C}, {A#B, A#C, C#B}) = {A->C, C->B}
    Signature sig = test::basic_sig();
    NameGen gen;
    FreshnessContext g2({fc("A", av("B")), fc("A", av("C")), fc("C", av("B"))});
    std::vector<EquivEquation> psi{EquivEquation{av("C"), susp("A", "C", "B")},
                                   EquivEquation{susp("B", "C", "A"), av("C")}};
    auto m = eqvm(psi, g2, sig, gen);
    REQUIRE(m.has_value());
    CHECK(m->verified);
    REQUIRE(m->entries.size() == 2);
    CHECK(m->entries[0].first == "A");
    CHECK(m->entries[0].second == Suspension::plain("C"));
    CHECK(m->entries[1].first == "C");
    CHECK(m->entries[1].second == Suspension::plain("B"));

    // the realized permutation maps A to C and C to B under the context
    TheoryConfig cfg{&sig};
    Permutation pi = mapping_to_permutation(*m);
    CHECK(holds_eq(g2, Term::atom_susp(apply_perm(pi, Suspension::plain("A"))), av("C"), cfg));
    CHECK(holds_eq(g2, Term::atom_susp(apply_perm(pi, Suspension::plain("C"))), av("B"), cfg));
}

TEST_CASE("eqvm golden: abstraction over an AC symbol") {
    // eqvm({lam C. f(A,B,C) <~ lam A. f(A,B,A)}, {C # lam A. lam B. C})
    // returns {A -> D} for the fresh D
    Signature sig = test::basic_sig();
    NameGen gen;
    FreshnessContext nabla({fc(
        "C", Term::abs(Suspension::plain("A"), Term::abs(Suspension::plain("B"), av("C"))))});
    Term l = Term::abs(Suspension::plain("C"), Term::app("f", {av("A"), av("B"), av("C")}));
    Term r = Term::abs(Suspension::plain("A"), Term::app("f", {av("A"), av("B"), av("A")}));
    auto m = eqvm({EquivEquation{l, r}}, nabla, sig, gen);
    REQUIRE(m.has_value());
    REQUIRE(m->entries.size() == 1);
    CHECK(m->entries[0].first == "A");
    CHECK(NameGen::reserved(m->entries[0].second.var));  // the EqAbs-fresh variable
    CHECK(m->entries[0].second.is_plain());
    // the support pins the fresh variable apart from the input variables
    CHECK(!m->support.empty());
}

TEST_CASE("eqvm fails on distinct term-variables") {
    Signature sig = test::basic_sig();
    NameGen gen;
    auto m = eqvm({EquivEquation{Term::var("X"), Term::var("Y")}}, FreshnessContext{}, sig, gen);
    CHECK(!m.has_value());
}

TEST_CASE("eqvm on identical ground sides yields the identity") {
    Signature sig = test::basic_sig();
    NameGen gen;
    Term t = Term::app("h", {Term::app("c1", {}), Term::app("c2", {})});
    auto m = eqvm({EquivEquation{t, t}}, FreshnessContext{}, sig, gen);
    REQUIRE(m.has_value());
    CHECK(m->is_identity());
    CHECK(m->verified);
    CHECK(mapping_to_permutation(*m).is_identity());
}

TEST_CASE("eqvm golden: AC equation with an equality constraint") {
    // f((B C)*A, C, B) <~ f(C,A,A) under {A # lam B. A}: solution realizes (A C)
    Signature sig = test::basic_sig();
    NameGen gen;
    TheoryConfig cfg{&sig};
    FreshnessContext nabla({fc("A", Term::abs(Suspension::plain("B"), av("A")))});
    Term l = Term::app("f", {susp("B", "C", "A"), av("C"), av("B")});
    Term r = Term::app("f", {av("C"), av("A"), av("A")});
    auto m = eqvm({EquivEquation{l, r}}, nabla, sig, gen);
    REQUIRE(m.has_value());
    CHECK(m->verified);
    Permutation pi = mapping_to_permutation(*m);
    Permutation ac{{make_swap("A", "C")}};
    CHECK(perm_equiv(nabla, pi, ac, cfg));

    // verification mode: every verified mapping realizes the same function
    NameGen gen2;
    auto all = eqvm_all({EquivEquation{l, r}}, nabla, sig, gen2);
    size_t verified = 0;
    for (auto& one : all) {
        if (!one.verified) continue;
        ++verified;
        CHECK(perm_equiv(nabla, mapping_to_permutation(one), ac, cfg));
    }
    CHECK(verified >= 1);
}

TEST_CASE("mapping_to_permutation on a written mapping") {
    SimpleContext ctx = discrete({"A", "C", "D"});
    AtomMapping m;
    m.entries = {{"A", Suspension::plain("D")}};
    m.disjunct = ctx;
    Permutation pi = mapping_to_permutation(m);
    CHECK(apply_perm(pi, Suspension::plain("A")) == Suspension::plain("D"));

    AtomMapping chain;
    chain.entries = {{"A", Suspension::plain("C")}, {"C", Suspension::plain("D")}};
    chain.disjunct = ctx;
    Permutation pc = mapping_to_permutation(chain);
    CHECK(ctx.resolve(apply_perm(pc, Suspension::plain("A"))) == ctx.class_of("C"));
    CHECK(ctx.resolve(apply_perm(pc, Suspension::plain("C"))) == ctx.class_of("D"));
}

TEST_CASE("ground-style completeness against brute force") {
    // with an all-distinct context, eqvm finds a solution exactly when some
    // permutation of the occurring variables satisfies the judgement
    Signature sig = test::basic_sig();
    TheoryConfig cfg{&sig};
    Rng rng(59);
    std::vector<std::string> vars{"A", "B", "C"};
    FreshnessContext ctx({fc("A", av("B")), fc("A", av("C")), fc("C", av("B"))});
    JudgementCache cache;

    auto brute = [&](const Term& l, const Term& r) {
        std::vector<std::string> perm = vars;
        std::sort(perm.begin(), perm.end());
        do {
            Permutation pi;
            // build the permutation sending vars[i] to perm[i]
            std::map<std::string, std::string> target;
            for (size_t i = 0; i < vars.size(); ++i) target[vars[i]] = perm[i];
            std::map<std::string, std::string> cur;
            for (auto& v : vars) cur[v] = v;
            for (auto& v : vars) {
                std::string have;
                for (auto& [k, w] : cur)
                    if (w == target[v]) have = k;
                if (cur[v] == target[v]) continue;
                pi.swaps.insert(pi.swaps.begin(), make_swap(cur[v], target[v]));
                std::swap(cur[v], cur[have]);
            }
            if (holds_eq(ctx, apply_permutation_nla(pi, l), r, cfg, &cache)) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };

    for (int i = 0; i < 40; ++i) {
        Term l = test::random_term(rng, sig, vars, {}, 5);
        Term r = rng.coin() ? test::random_term(rng, sig, vars, {}, 5)
                            : apply_permutation_nla(Permutation{{make_swap("A", "C")}}, l);
        NameGen gen;
        auto m = eqvm({EquivEquation{flatten(l, sig), flatten(r, sig)}}, ctx, sig, gen, &cache);
        bool solvable = brute(flatten(l, sig), flatten(r, sig));
        bool got = m.has_value() && m->verified;
        CHECK(got == solvable);
    }
}
