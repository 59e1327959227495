#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "naup/minimize.hpp"
#include "support.hpp"

using namespace naup;

namespace {

Term av(const std::string& n) { return Term::atom_var(n); }

FreshnessConstraint fc(const std::string& a, Term t) { return FreshnessConstraint{a, std::move(t)}; }

Term c(const std::string& n) { return Term::app(n, {}); }

Signature tuple_sig() {
    Signature sig;
    sig.declare("t3", 3, Theory::Free);
    sig.declare("h", 2, Theory::Free);
    sig.declare("g", 1, Theory::Free);
    sig.declare("cc", 0, Theory::Free);
    return sig;
}

}  // namespace

TEST_CASE("tic_subset on the worked subsumption examples") {
    Signature sig = tuple_sig();
    TheoryConfig cfg{&sig};

    TermInContext strong{FreshnessContext({fc("A", Term::var("X"))}),
                         Term::app("h", {av("A"), Term::var("X")})};
    TermInContext weak{FreshnessContext{}, Term::app("h", {av("A"), Term::var("X")})};
    CHECK(tic_subset(strong, weak, cfg));
    CHECK(!tic_subset(weak, strong, cfg));

    TermInContext renamed{FreshnessContext({fc("B", Term::var("Y"))}),
                          Term::app("h", {av("B"), Term::var("Y")})};
    CHECK(tic_subset(strong, renamed, cfg));
    CHECK(tic_subset(renamed, strong, cfg));

    TermInContext deeper{FreshnessContext({fc("B", Term::var("Y"))}),
                         Term::app("h", {av("A"), Term::app("g", {Term::var("Y")})})};
    CHECK(!tic_subset(deeper, strong, cfg));

    TermInContext lhs{FreshnessContext({fc("A", Term::var("Y"))}),
                      Term::app("h", {av("A"), Term::app("g", {Term::var("Y")})})};
    TermInContext rhs{FreshnessContext({fc("A", Term::var("X")), fc("B", Term::var("Y"))}),
                      Term::app("h", {av("A"), Term::var("X")})};
    CHECK(tic_subset(lhs, rhs, cfg));
    CHECK(!tic_subset(rhs, lhs, cfg));

    TermInContext abs1{FreshnessContext{},
                       Term::abs(Suspension::plain("A"), Term::app("h", {av("A"), Term::var("X")}))};
    TermInContext abs2{FreshnessContext{},
                       Term::abs(Suspension::plain("B"), Term::app("h", {av("B"), Term::var("Y")}))};
    CHECK(tic_subset(abs1, abs2, cfg));
    CHECK(tic_subset(abs2, abs1, cfg));
}

TEST_CASE("tic_subset cross-checked against bounded semantics") {
    // candidate side kept variable-free so the finite enumeration of the
    // reference side covers every witness the inclusion needs
    Signature sig;
    sig.declare("h", 2, Theory::Free);
    sig.declare("g", 1, Theory::Free);
    sig.declare("cc", 0, Theory::Free);
    TheoryConfig cfg{&sig};
    test::Rng rng(83);
    std::vector<std::string> pool{"a", "b"};
    int informative = 0;
    for (int i = 0; i < 40; ++i) {
        Term t1 = test::random_term(rng, sig, {"A", "B"}, {}, 3);
        Term t2 = test::random_term(rng, sig, {"A"}, {"X"}, 4);
        FreshnessContext c1 = test::random_context(rng, sig, {"A", "B"}, {}, 1);
        FreshnessContext c2 = test::random_context(rng, sig, {"A"}, {"X"}, 1);
        TermInContext a{c1, t1}, b{c2, t2};
        bool decided = tic_subset(a, b, cfg);
        bool sem = test::sem_included(a, b, pool, 2, cfg);
        if (decided) {
            CHECK(sem);
            ++informative;
        }
    }
    CHECK(informative > 0);
}

TEST_CASE("entails_constraint") {
    FreshnessContext ab({fc("A", av("B"))});
    CHECK(entails_constraint(ab, fc("A", av("B"))));
    CHECK(!entails_constraint(FreshnessContext{}, fc("A", av("B"))));

    // guarded constraint: {A # lam B. Y, A # B} |- A # Y but not without A#B
    FreshnessContext guard({fc("A", Term::abs(Suspension::plain("B"), Term::var("Y"))),
                            fc("A", av("B"))});
    CHECK(entails_constraint(guard, fc("A", Term::var("Y"))));
    FreshnessContext weak({fc("A", Term::abs(Suspension::plain("B"), Term::var("Y")))});
    CHECK(!entails_constraint(weak, fc("A", Term::var("Y"))));

    // freshness against a constant always holds
    Signature sig = tuple_sig();
    CHECK(entails_constraint(FreshnessContext{}, fc("A", c("cc"))));
}

TEST_CASE("post_process repairs the weak-completeness example") {
    Signature sig;
    sig.declare("h", 2, Theory::Free);
    sig.declare("c1", 0, Theory::Free);
    sig.declare("c2", 0, Theory::Free);
    TheoryConfig cfg{&sig};

    TermInContext in1{FreshnessContext{}, Term::app("h", {c("c1"), av("A")})};
    TermInContext in2{FreshnessContext{}, Term::app("h", {c("c2"), av("A")})};
    TermInContext result{FreshnessContext{}, Term::app("h", {Term::var("Y1"), av("A")})};
    auto out = post_process(result, in1, in2, {"A"}, cfg);
    CHECK(!out.budget_exceeded);
    REQUIRE(out.added.size() == 1);
    CHECK(out.added[0] == fc("A", Term::var("Y1")));
    CHECK(tic_subset(in1, out.strengthened, cfg));
    CHECK(tic_subset(in2, out.strengthened, cfg));
}

TEST_CASE("post_process finds guarded constraints on the tuple example") {
    // inputs (t3(f(B),A,B), t3(cc,A,B)) strengthen (0,(Y,A,B)) to {A # lam B. Y}
    Signature sig = tuple_sig();
    TheoryConfig cfg{&sig};
    TermInContext in1{FreshnessContext{},
                      Term::app("t3", {Term::app("g", {av("B")}), av("A"), av("B")})};
    TermInContext in2{FreshnessContext{}, Term::app("t3", {c("cc"), av("A"), av("B")})};
    TermInContext result{FreshnessContext{},
                         Term::app("t3", {Term::var("Y"), av("A"), av("B")})};
    auto out = post_process(result, in1, in2, {"A", "B"}, cfg);
    FreshnessConstraint guarded = fc("A", Term::abs(Suspension::plain("B"), Term::var("Y")));
    bool has_guarded = false;
    for (auto& cc2 : out.added) {
        if (cc2 == guarded) has_guarded = true;
        // everything added must preserve the generalization property
    }
    CHECK(has_guarded);
    CHECK(tic_subset(in1, out.strengthened, cfg));
    CHECK(tic_subset(in2, out.strengthened, cfg));

    // the paper's printed orientation: inputs with f(A) in the first slot
    // admit B # lam A. Y instead
    TermInContext in1b{FreshnessContext{},
                       Term::app("t3", {Term::app("g", {av("A")}), av("A"), av("B")})};
    auto outb = post_process(result, in1b, in2, {"A", "B"}, cfg);
    FreshnessConstraint guarded_b = fc("B", Term::abs(Suspension::plain("A"), Term::var("Y")));
    bool has_b = false, has_wrong = false;
    for (auto& cc2 : outb.added) {
        if (cc2 == guarded_b) has_b = true;
        if (cc2 == guarded) has_wrong = true;
    }
    CHECK(has_b);
    CHECK(!has_wrong);
}

TEST_CASE("post_process leaves a maximal generalization unchanged") {
    Signature sig;
    sig.declare("h", 2, Theory::Free);
    sig.declare("c1", 0, Theory::Free);
    sig.declare("c2", 0, Theory::Free);
    TheoryConfig cfg{&sig};
    TermInContext in1{FreshnessContext{}, Term::app("h", {c("c1"), av("A")})};
    TermInContext in2{FreshnessContext{}, Term::app("h", {c("c2"), av("A")})};
    TermInContext result{FreshnessContext({fc("A", Term::var("Y1"))}),
                         Term::app("h", {Term::var("Y1"), av("A")})};
    auto out = post_process(result, in1, in2, {"A"}, cfg);
    CHECK(out.added.empty());
    CHECK(out.strengthened.context == result.context);
}

TEST_CASE("minimize_indices keeps the specific survivor") {
    Signature sig;
    sig.declare("fa", 2, Theory::A);
    sig.declare("g", 1, Theory::Free);
    sig.declare("c1", 0, Theory::Free);
    TheoryConfig cfg{&sig};
    TermInContext general{FreshnessContext{},
                          Term::app("fa", {Term::var("X1"), Term::var("X2")})};
    TermInContext specific{FreshnessContext{},
                           Term::app("fa", {Term::var("X1"), Term::app("g", {Term::var("Y1")})})};
    std::vector<TermInContext> results{general, specific};
    std::vector<std::string> keys{"a", "b"};
    auto kept = minimize_indices(results, keys, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == 1);

    std::vector<TermInContext> single{specific};
    CHECK(minimize_indices(single, {"a"}, cfg).size() == 1);
}

TEST_CASE("depth multisets") {
    Signature sig;
    sig.declare("fc", 2, Theory::C);
    sig.declare("a", 0, Theory::Free);
    sig.declare("b", 0, Theory::Free);
    sig.declare("cc", 0, Theory::Free);
    GTerm a = GTerm::app("a", {}), b = GTerm::app("b", {}), cc = GTerm::app("cc", {});

    GTerm s = GTerm::app("fc", {a, GTerm::app("fc", {a, b})});
    DepthMultiset ms = depth_multiset(s, sig);
    DepthMultiset want{{"a", 1}, {"a", 2}, {"b", 2}};
    CHECK(ms == want);

    CHECK(depth_multiset(cc, sig) == DepthMultiset{{"cc", 0}});

    GTerm deep = GTerm::app("fc", {GTerm::app("fc", {a, b}),
                                   GTerm::app("fc", {cc, GTerm::app("fc", {a, cc})})});
    DepthMultiset wd{{"a", 2}, {"b", 2}, {"cc", 2}, {"a", 3}, {"cc", 3}};
    CHECK(depth_multiset(deep, sig) == wd);
}

TEST_CASE("unique lgg for AC") {
    Signature sig;
    sig.declare("f", 2, Theory::AC);
    for (int i = 1; i <= 8; ++i) sig.declare("s" + std::to_string(i), 0, Theory::Free);
    NameGen gen;
    auto cst = [](const std::string& n) { return GTerm::app(n, {}); };

    GTerm l = GTerm::app("f", {cst("s1"), cst("s2"), cst("s3"), cst("s4")});
    GTerm r = GTerm::app("f", {cst("s5"), cst("s6"), cst("s1"), cst("s2")});
    auto lgg = unique_lgg_ac(l, r, sig, gen);
    REQUIRE(lgg.has_value());
    REQUIRE(lgg->is(Term::Kind::App));
    REQUIRE(lgg->args().size() == 4);
    CHECK(lgg->args()[0] == Term::app("s1", {}));
    CHECK(lgg->args()[1] == Term::app("s2", {}));
    CHECK(lgg->args()[2].is(Term::Kind::VarSusp));
    CHECK(lgg->args()[3].is(Term::Kind::VarSusp));

    GTerm r2 = GTerm::app("f", {cst("s5"), cst("s6"), cst("s1"), cst("s2"), cst("s7"), cst("s8")});
    auto lgg2 = unique_lgg_ac(l, r2, sig, gen);
    REQUIRE(lgg2.has_value());
    REQUIRE(lgg2->args().size() == 4);  // two shared constants and min(2,4) variables

    // one side contained in the other: criterion refuses (three incomparable lggs)
    GTerm l3 = GTerm::app("f", {cst("s1"), cst("s2"), cst("s3")});
    GTerm r3 = GTerm::app("f", {cst("s1"), cst("s2"), cst("s3"), cst("s4")});
    CHECK(!unique_lgg_ac(l3, r3, sig, gen).has_value());

    // duplicates block the criterion
    GTerm l4 = GTerm::app("f", {cst("s1"), cst("s1"), cst("s2")});
    GTerm r4 = GTerm::app("f", {cst("s1"), cst("s1"), cst("s3")});
    CHECK(!unique_lgg_ac(l4, r4, sig, gen).has_value());

    // equal modulo AC: the term itself
    GTerm r5 = GTerm::app("f", {cst("s2"), cst("s1"), cst("s3"), cst("s4")});
    auto lgg5 = unique_lgg_ac(l, r5, sig, gen);
    REQUIRE(lgg5.has_value());
    CHECK(term_vars(*lgg5).empty());
}

TEST_CASE("unique lgg for C") {
    Signature sig;
    sig.declare("fc", 2, Theory::C);
    sig.declare("a", 0, Theory::Free);
    sig.declare("b", 0, Theory::Free);
    sig.declare("cc", 0, Theory::Free);
    sig.declare("d", 0, Theory::Free);
    NameGen gen;
    auto cst = [](const std::string& n) { return GTerm::app(n, {}); };
    GTerm a = cst("a"), b = cst("b"), d = cst("d");

    GTerm s = GTerm::app("fc", {a, GTerm::app("fc", {a, b})});
    GTerm t = GTerm::app("fc", {b, GTerm::app("fc", {a, d})});
    auto lgg = unique_lgg_c(s, t, sig, gen);
    REQUIRE(lgg.has_value());
    REQUIRE(lgg->is(Term::Kind::App));
    CHECK(lgg->args()[0].is(Term::Kind::VarSusp));
    REQUIRE(lgg->args()[1].is(Term::Kind::App));
    CHECK(lgg->args()[1].args()[0] == Term::app("a", {}));
    CHECK(lgg->args()[1].args()[1].is(Term::Kind::VarSusp));

    GTerm t2 = GTerm::app("fc", {a, GTerm::app("fc", {a, d})});
    auto lgg2 = unique_lgg_c(s, t2, sig, gen);
    REQUIRE(lgg2.has_value());
    CHECK(lgg2->args()[0] == Term::app("a", {}));
    REQUIRE(lgg2->args()[1].is(Term::Kind::App));
    CHECK(lgg2->args()[1].args()[0] == Term::app("a", {}));
    CHECK(lgg2->args()[1].args()[1].is(Term::Kind::VarSusp));

    // the appendix example where the starred terms differ
    GTerm cc = cst("cc");
    GTerm s3 = GTerm::app("fc", {GTerm::app("fc", {a, b}),
                                 GTerm::app("fc", {cc, GTerm::app("fc", {a, cc})})});
    GTerm t3 = GTerm::app("fc", {a, GTerm::app("fc", {GTerm::app("fc", {cc, GTerm::app("fc", {a, cc})}), b})});
    CHECK(!unique_lgg_c(s3, t3, sig, gen).has_value());
}

TEST_CASE("unique lgg for A") {
    Signature sig;
    sig.declare("fa", 2, Theory::A);
    for (auto& n : {"a", "b", "d", "c1", "c2", "c3", "c4", "c5"})
        sig.declare(n, 0, Theory::Free);
    NameGen gen;
    auto cst = [](const std::string& n) { return GTerm::app(n, {}); };

    GTerm s = GTerm::app("fa", {cst("a"), cst("b"), cst("c1"), cst("c2"), cst("c3"), cst("d")});
    GTerm t = GTerm::app("fa", {cst("a"), cst("b"), cst("c4"), cst("c5"), cst("d")});
    auto lgg = unique_lgg_a(s, t, sig, gen);
    REQUIRE(lgg.has_value());
    REQUIRE(lgg->args().size() == 5);
    CHECK(lgg->args()[0] == Term::app("a", {}));
    CHECK(lgg->args()[1] == Term::app("b", {}));
    CHECK(lgg->args()[2].is(Term::Kind::VarSusp));
    CHECK(lgg->args()[3].is(Term::Kind::VarSusp));
    CHECK(lgg->args()[4] == Term::app("d", {}));

    auto same = unique_lgg_a(s, s, sig, gen);
    REQUIRE(same.has_value());
    CHECK(term_vars(*same).empty());

    // non-linear common part: inapplicable
    GTerm nl = GTerm::app("fa", {cst("a"), cst("c1"), cst("a")});
    GTerm nr = GTerm::app("fa", {cst("a"), cst("c4"), cst("a")});
    CHECK(!unique_lgg_a(nl, nr, sig, gen).has_value());
}

TEST_CASE("unique lggs generalize both inputs") {
    Signature sig;
    sig.declare("f", 2, Theory::AC);
    sig.declare("fa", 2, Theory::A);
    for (int i = 1; i <= 6; ++i) sig.declare("s" + std::to_string(i), 0, Theory::Free);
    TheoryConfig cfg{&sig};
    NameGen gen;
    auto cst = [](const std::string& n) { return GTerm::app(n, {}); };

    GTerm l = GTerm::app("f", {cst("s1"), cst("s2"), cst("s3"), cst("s4")});
    GTerm r = GTerm::app("f", {cst("s5"), cst("s6"), cst("s1"), cst("s2")});
    auto lgg = unique_lgg_ac(l, r, sig, gen);
    REQUIRE(lgg.has_value());

    auto to_term = [](const GTerm& g) {
        std::function<Term(const GTerm&)> rec = [&](const GTerm& u) -> Term {
            TermList args;
            for (auto& x : u.args()) args.push_back(rec(x));
            return Term::app(u.sym(), std::move(args));
        };
        return rec(g);
    };
    TermInContext li{FreshnessContext{}, to_term(l)};
    TermInContext ri{FreshnessContext{}, to_term(r)};
    TermInContext gi{FreshnessContext{}, *lgg};
    CHECK(tic_subset(li, gi, cfg));
    CHECK(tic_subset(ri, gi, cfg));
}
