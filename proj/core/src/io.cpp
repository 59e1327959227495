#include "naup/io.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace naup {

// --------------------------------------------------------------------------
// Lexer
// --------------------------------------------------------------------------

namespace {

enum class Tok {
    Ident, Number, Colon, Semi, Comma, LPar, RPar, Hash, Star, Dot, Slash, Pipe,
    GenEq,   // =?=
    Tilde,   // ~
    MatchOp, // <~
    LessEq,  // <=
    End
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;
    std::vector<Token> toks;

    explicit Lexer(const std::string& s) : src(s) { run(); }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, col, msg); }

    void advance(size_t n) {
        for (size_t i = 0; i < n; ++i) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void push(Tok k, size_t len) {
        toks.push_back(Token{k, src.substr(pos, len), line, col});
        advance(len);
    }

    void run() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance(1);
                continue;
            }
            if (c == '%') {  // comment to end of line
                while (pos < src.size() && src[pos] != '\n') advance(1);
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t len = 1;
                while (pos + len < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(src[pos + len])) ||
                        src[pos + len] == '_' || src[pos + len] == '\''))
                    ++len;
                push(Tok::Ident, len);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t len = 1;
                while (pos + len < src.size() &&
                       std::isdigit(static_cast<unsigned char>(src[pos + len])))
                    ++len;
                push(Tok::Number, len);
                continue;
            }
            if (src.compare(pos, 3, "=?=") == 0) {
                push(Tok::GenEq, 3);
                continue;
            }
            if (src.compare(pos, 2, "<~") == 0) {
                push(Tok::MatchOp, 2);
                continue;
            }
            if (src.compare(pos, 2, "<=") == 0) {
                push(Tok::LessEq, 2);
                continue;
            }
            switch (c) {
                case ':': push(Tok::Colon, 1); break;
                case ';': push(Tok::Semi, 1); break;
                case ',': push(Tok::Comma, 1); break;
                case '(': push(Tok::LPar, 1); break;
                case ')': push(Tok::RPar, 1); break;
                case '#': push(Tok::Hash, 1); break;
                case '*': push(Tok::Star, 1); break;
                case '.': push(Tok::Dot, 1); break;
                case '/': push(Tok::Slash, 1); break;
                case '|': push(Tok::Pipe, 1); break;
                case '~': push(Tok::Tilde, 1); break;
                default: fail(std::string("unexpected character '") + c + "'");
            }
        }
        toks.push_back(Token{Tok::End, "", line, col});
    }
};

// --------------------------------------------------------------------------
// Neutral syntax tree, elaborated per command
// --------------------------------------------------------------------------

struct PSusp;

struct PPerm {
    std::vector<std::pair<PSusp, PSusp>> swaps;
};

struct PSusp {
    PPerm perm;
    std::string var;
    int line = 0, col = 0;
};

struct PTerm {
    enum class K { Leaf, App, Lam, Permed } k = K::Leaf;
    PSusp leaf;                   // Leaf; Lam binder
    std::string sym;              // App
    std::vector<PTerm> args;      // App args; Lam/Permed body at [0]
    PPerm perm;                   // Permed
    int line = 0, col = 0;
};

struct Parser {
    std::vector<Token> toks;
    size_t at = 0;
    bool allow_reserved = false;

    const Token& peek(size_t off = 0) const { return toks[std::min(at + off, toks.size() - 1)]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(peek().line, peek().col, msg);
    }

    Token expect(Tok k, const std::string& what) {
        if (peek().kind != k) fail("expected " + what);
        return toks[at++];
    }

    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++at;
        return true;
    }

    bool at_keyword(const std::string& kw) const {
        return peek().kind == Tok::Ident && peek().text == kw;
    }

    std::string ident() {
        Token t = expect(Tok::Ident, "identifier");
        if (!allow_reserved && NameGen::reserved(t.text))
            throw ParseError(t.line, t.col, "identifier '" + t.text + "' uses the reserved prefix '_'");
        return t.text;
    }

    // ( W W ) ( W W ) ...
    PPerm parse_perm() {
        PPerm p;
        while (peek().kind == Tok::LPar) {
            ++at;
            PSusp a = parse_swap_elem();
            PSusp b = parse_swap_elem();
            expect(Tok::RPar, "')'");
            p.swaps.emplace_back(std::move(a), std::move(b));
        }
        return p;
    }

    PSusp parse_swap_elem() {
        PSusp s;
        s.line = peek().line;
        s.col = peek().col;
        if (peek().kind == Tok::LPar) {
            s.perm = parse_perm();
            expect(Tok::Star, "'*' after permutation");
        }
        Token t = expect(Tok::Ident, "atom-variable");
        if (!allow_reserved && NameGen::reserved(t.text))
            throw ParseError(t.line, t.col, "identifier '" + t.text + "' uses the reserved prefix '_'");
        s.var = t.text;
        return s;
    }

    PTerm parse_term() {
        PTerm t;
        t.line = peek().line;
        t.col = peek().col;
        if (at_keyword("lam")) {
            ++at;
            t.k = PTerm::K::Lam;
            if (peek().kind == Tok::LPar) {
                t.leaf.perm = parse_perm();
                expect(Tok::Star, "'*' after binder permutation");
                t.leaf.var = ident();
            } else {
                t.leaf.var = ident();
            }
            expect(Tok::Dot, "'.' after binder");
            t.args.push_back(parse_term());
            return t;
        }
        if (peek().kind == Tok::LPar) {
            // permutation applied to what follows: (A B)*t
            t.k = PTerm::K::Permed;
            t.perm = parse_perm();
            expect(Tok::Star, "'*' after permutation");
            t.args.push_back(parse_term());
            return t;
        }
        std::string name = ident();
        if (peek().kind == Tok::LPar) {
            ++at;
            t.k = PTerm::K::App;
            t.sym = name;
            if (peek().kind != Tok::RPar) {
                t.args.push_back(parse_term());
                while (accept(Tok::Comma)) t.args.push_back(parse_term());
            }
            expect(Tok::RPar, "')'");
            return t;
        }
        t.k = PTerm::K::Leaf;
        t.leaf.var = name;
        return t;
    }
};

struct Elab {
    const Signature& sig;
    const std::set<std::string>& atomvars;
    const std::set<std::string>& termvars;

    [[noreturn]] static void fail(int line, int col, const std::string& msg) {
        throw ParseError(line, col, msg);
    }

    Suspension susp(const PSusp& s) const {
        if (!atomvars.count(s.var)) fail(s.line, s.col, "'" + s.var + "' is not a declared atom-variable");
        // swaps that syntactically hit the core fire at construction
        return apply_perm(perm(s.perm), Suspension::plain(s.var));
    }

    Permutation perm(const PPerm& p) const {
        Permutation out;
        for (auto& [a, b] : p.swaps) out.swaps.push_back(make_swap(susp(a), susp(b)));
        return normalize_perm(out);
    }

    Term term(const PTerm& t) const {
        switch (t.k) {
            case PTerm::K::Leaf: {
                const std::string& n = t.leaf.var;
                if (atomvars.count(n)) return Term::atom_var(n);
                if (termvars.count(n)) return Term::var(n);
                if (sig.contains(n)) {
                    if (sig.at(n).arity != 0)
                        fail(t.line, t.col, "symbol '" + n + "' expects arguments");
                    return Term::app(n, {});
                }
                fail(t.line, t.col, "undeclared identifier '" + n + "'");
            }
            case PTerm::K::App: {
                if (!sig.contains(t.sym)) {
                    if (atomvars.count(t.sym) || termvars.count(t.sym))
                        fail(t.line, t.col, "variable '" + t.sym + "' cannot be applied");
                    fail(t.line, t.col, "undeclared symbol '" + t.sym + "'");
                }
                const FunSymbol& f = sig.at(t.sym);
                bool assoc = is_assoc(f.theory);
                if (assoc ? t.args.size() < 2 : t.args.size() != static_cast<size_t>(f.arity))
                    fail(t.line, t.col, "symbol '" + t.sym + "' applied to " +
                                            std::to_string(t.args.size()) + " arguments");
                TermList args;
                for (auto& a : t.args) args.push_back(term(a));
                return flatten(Term::app(t.sym, std::move(args)), sig);
            }
            case PTerm::K::Lam: return Term::abs(susp(t.leaf), term(t.args[0]));
            case PTerm::K::Permed:
                return apply_permutation_nla(perm(t.perm), term(t.args[0]));
        }
        fail(t.line, t.col, "bad term");
    }

    // ground elaboration: leaves resolve to atoms or constants
    std::string ground_atom(const PSusp& s) const {
        if (!s.perm.swaps.empty()) {
            GroundPerm p = ground_perm(s.perm);
            return apply_ground_perm(p, ground_leaf_atom(s));
        }
        return ground_leaf_atom(s);
    }

    std::string ground_leaf_atom(const PSusp& s) const {
        if (atomvars.count(s.var) || termvars.count(s.var))
            fail(s.line, s.col, "variable '" + s.var + "' in a ground position");
        if (sig.contains(s.var)) fail(s.line, s.col, "'" + s.var + "' is a symbol, not an atom");
        if (std::isupper(static_cast<unsigned char>(s.var[0])))
            fail(s.line, s.col, "atoms are lowercase identifiers; '" + s.var + "' is undeclared");
        return s.var;
    }

    GroundPerm ground_perm(const PPerm& p) const {
        GroundPerm out;
        for (auto& [a, b] : p.swaps) out.push_back(GroundSwap{ground_atom(a), ground_atom(b)});
        return out;
    }

    GTerm gterm(const PTerm& t) const {
        switch (t.k) {
            case PTerm::K::Leaf: {
                const std::string& n = t.leaf.var;
                if (sig.contains(n)) {
                    if (sig.at(n).arity != 0)
                        fail(t.line, t.col, "symbol '" + n + "' expects arguments");
                    return GTerm::app(n, {});
                }
                if (atomvars.count(n) || termvars.count(n))
                    fail(t.line, t.col, "variable '" + n + "' in a ground term");
                if (std::isupper(static_cast<unsigned char>(n[0])))
                    fail(t.line, t.col, "undeclared identifier '" + n + "'");
                return GTerm::atom(n);
            }
            case PTerm::K::App: {
                if (!sig.contains(t.sym)) fail(t.line, t.col, "undeclared symbol '" + t.sym + "'");
                const FunSymbol& f = sig.at(t.sym);
                bool assoc = is_assoc(f.theory);
                if (assoc ? t.args.size() < 2 : t.args.size() != static_cast<size_t>(f.arity))
                    fail(t.line, t.col, "symbol '" + t.sym + "' applied to " +
                                            std::to_string(t.args.size()) + " arguments");
                std::vector<GTerm> args;
                for (auto& a : t.args) args.push_back(gterm(a));
                return flatten(GTerm::app(t.sym, std::move(args)), sig);
            }
            case PTerm::K::Lam: {
                if (!t.leaf.perm.swaps.empty())
                    fail(t.line, t.col, "suspended binders need atom-variables");
                return GTerm::abs(ground_leaf_atom(t.leaf), gterm(t.args[0]));
            }
            case PTerm::K::Permed:
                return apply_permutation_ground(ground_perm(t.perm), gterm(t.args[0]));
        }
        fail(t.line, t.col, "bad term");
    }

    // true when every leaf resolves without declared variables
    bool is_ground(const PTerm& t) const {
        switch (t.k) {
            case PTerm::K::Leaf:
                return !atomvars.count(t.leaf.var) && !termvars.count(t.leaf.var) &&
                       t.leaf.perm.swaps.empty();
            case PTerm::K::App:
            case PTerm::K::Lam:
            case PTerm::K::Permed: {
                if (t.k == PTerm::K::Lam &&
                    (atomvars.count(t.leaf.var) || !t.leaf.perm.swaps.empty()))
                    return false;
                if (t.k == PTerm::K::Permed)
                    for (auto& [a, b] : t.perm.swaps)
                        if (atomvars.count(a.var) || atomvars.count(b.var)) return false;
                for (auto& a : t.args)
                    if (!is_ground(a)) return false;
                return true;
            }
        }
        return false;
    }
};

Theory parse_theory(const std::string& s, int line, int col) {
    if (s.empty() || s == "0") return Theory::Free;
    if (s == "A") return Theory::A;
    if (s == "C") return Theory::C;
    if (s == "AC") return Theory::AC;
    throw ParseError(line, col, "unknown theory '" + s + "' (expected A, C, AC or 0)");
}

}  // namespace

// --------------------------------------------------------------------------
// parse_problem
// --------------------------------------------------------------------------

ProblemFile parse_problem(const std::string& text) {
    Lexer lex(text);
    Parser p{std::move(lex.toks)};
    ProblemFile pf;

    auto parse_constraint = [&](Elab& el) {
        std::string a = p.ident();
        if (!pf.atomvars.count(a))
            p.fail("freshness subject '" + a + "' is not a declared atom-variable");
        p.expect(Tok::Hash, "'#'");
        PTerm t = p.parse_term();
        return FreshnessConstraint{a, el.term(t)};
    };

    while (true) {
        if (p.at_keyword("sig")) {
            ++p.at;
            p.expect(Tok::Colon, "':'");
            while (true) {
                Token name = p.expect(Tok::Ident, "symbol name");
                if (NameGen::reserved(name.text))
                    throw ParseError(name.line, name.col, "reserved name '" + name.text + "'");
                p.expect(Tok::Colon, "':' in symbol declaration");
                std::string th;
                if (p.peek().kind == Tok::Ident || p.peek().kind == Tok::Number) {
                    th = p.peek().text;
                    ++p.at;
                }
                p.expect(Tok::Slash, "'/' before arity");
                Token ar = p.expect(Tok::Number, "arity");
                pf.sig.declare(name.text, std::stoi(ar.text), parse_theory(th, name.line, name.col));
                if (!p.accept(Tok::Comma)) break;
            }
            p.expect(Tok::Semi, "';'");
            continue;
        }
        if (p.at_keyword("atomvars") || p.at_keyword("termvars")) {
            bool atoms = p.at_keyword("atomvars");
            ++p.at;
            p.expect(Tok::Colon, "':'");
            while (p.peek().kind == Tok::Ident) {
                std::string v = p.ident();
                if (pf.sig.contains(v) || pf.atomvars.count(v) || pf.termvars.count(v))
                    p.fail("'" + v + "' is already declared");
                (atoms ? pf.atomvars : pf.termvars).insert(v);
            }
            p.expect(Tok::Semi, "';'");
            continue;
        }
        if (p.at_keyword("fresh")) {
            ++p.at;
            p.expect(Tok::Colon, "':'");
            Elab el{pf.sig, pf.atomvars, pf.termvars};
            if (p.peek().kind != Tok::Semi) {
                pf.fresh.add(parse_constraint(el));
                while (p.accept(Tok::Comma)) pf.fresh.add(parse_constraint(el));
            }
            p.expect(Tok::Semi, "';'");
            continue;
        }
        break;
    }

    Elab el{pf.sig, pf.atomvars, pf.termvars};
    if (p.at_keyword("generalize") || p.at_keyword("unique")) {
        bool uniq = p.at_keyword("unique");
        ++p.at;
        PTerm a = p.parse_term();
        p.expect(Tok::GenEq, "'=?='");
        PTerm b = p.parse_term();
        pf.command = uniq ? Command::Unique : Command::Generalize;
        if (uniq) {
            pf.glhs = el.gterm(a);
            pf.grhs = el.gterm(b);
        } else {
            pf.lhs = el.term(a);
            pf.rhs = el.term(b);
        }
    } else if (p.at_keyword("check")) {
        ++p.at;
        PTerm a = p.parse_term();
        p.expect(Tok::Tilde, "'~'");
        PTerm b = p.parse_term();
        pf.command = Command::Check;
        if (el.is_ground(a) && el.is_ground(b)) {
            pf.ground_mode = true;
            pf.glhs = el.gterm(a);
            pf.grhs = el.gterm(b);
        } else {
            pf.lhs = el.term(a);
            pf.rhs = el.term(b);
        }
    } else if (p.at_keyword("checkfresh")) {
        ++p.at;
        Token subj = p.expect(Tok::Ident, "atom or atom-variable");
        p.expect(Tok::Hash, "'#'");
        PTerm b = p.parse_term();
        pf.command = Command::CheckFresh;
        pf.fresh_subject = subj.text;
        if (pf.atomvars.count(subj.text)) {
            pf.rhs = el.term(b);
        } else if (el.is_ground(b) && !std::isupper(static_cast<unsigned char>(subj.text[0])) &&
                   !pf.sig.contains(subj.text)) {
            pf.ground_mode = true;
            pf.grhs = el.gterm(b);
        } else {
            throw ParseError(subj.line, subj.col, "'" + subj.text + "' is neither a declared atom-variable nor an atom with a ground term");
        }
    } else if (p.at_keyword("equiv")) {
        ++p.at;
        pf.command = Command::Equiv;
        while (true) {
            PTerm a = p.parse_term();
            p.expect(Tok::MatchOp, "'<~'");
            PTerm b = p.parse_term();
            pf.equations.push_back(EquivEquation{el.term(a), el.term(b)});
            if (!p.accept(Tok::Comma)) break;
        }
    } else if (p.at_keyword("subsumes")) {
        ++p.at;
        pf.command = Command::Subsumes;
        auto side = [&](FreshnessContext& ctx, Term& t) {
            p.expect(Tok::LPar, "'('");
            if (p.peek().kind != Tok::Pipe) {
                ctx.add(parse_constraint(el));
                while (p.accept(Tok::Comma)) ctx.add(parse_constraint(el));
            }
            p.expect(Tok::Pipe, "'|'");
            t = el.term(p.parse_term());
            p.expect(Tok::RPar, "')'");
        };
        side(pf.ctx1, pf.t1);
        p.expect(Tok::LessEq, "'<='");
        side(pf.ctx2, pf.t2);
    } else {
        p.fail("expected a command (generalize, check, checkfresh, equiv, subsumes, unique)");
    }
    p.expect(Tok::End, "end of input");
    return pf;
}

Term parse_term(const std::string& text, const Signature& sig,
                const std::set<std::string>& atomvars, const std::set<std::string>& termvars,
                bool allow_reserved) {
    Lexer lex(text);
    Parser p{std::move(lex.toks)};
    p.allow_reserved = allow_reserved;
    PTerm t = p.parse_term();
    p.expect(Tok::End, "end of input");
    std::set<std::string> avs = atomvars, tvs = termvars;
    if (allow_reserved) {  // generated names follow their prefix convention
        std::function<void(const PTerm&)> scan = [&](const PTerm& q) {
            if (q.k == PTerm::K::Leaf && NameGen::reserved(q.leaf.var)) {
                if (q.leaf.var.size() > 1 && q.leaf.var[1] == 'X') tvs.insert(q.leaf.var);
                else avs.insert(q.leaf.var);
            }
            if ((q.k == PTerm::K::Lam) && NameGen::reserved(q.leaf.var)) avs.insert(q.leaf.var);
            for (auto& a : q.args) scan(a);
        };
        scan(t);
        std::function<void(const PPerm&)> scanp = [&](const PPerm& pp) {
            for (auto& [x, y] : pp.swaps) {
                for (auto* s : {&x, &y}) {
                    if (NameGen::reserved(s->var)) avs.insert(s->var);
                    scanp(s->perm);
                }
            }
        };
        std::function<void(const PTerm&)> scan2 = [&](const PTerm& q) {
            scanp(q.leaf.perm);
            scanp(q.perm);
            for (auto& a : q.args) scan2(a);
        };
        scan2(t);
    }
    Elab el{sig, avs, tvs};
    return el.term(t);
}

GTerm parse_ground_term(const std::string& text, const Signature& sig) {
    Lexer lex(text);
    Parser p{std::move(lex.toks)};
    PTerm t = p.parse_term();
    p.expect(Tok::End, "end of input");
    std::set<std::string> none;
    Elab el{sig, none, none};
    return el.gterm(t);
}

// --------------------------------------------------------------------------
// run_command
// --------------------------------------------------------------------------

int ResultDocument::exit_code() const {
    if (limits_hit) return 3;
    switch (command) {
        case Command::Generalize: return results.empty() ? 1 : 0;
        case Command::Check:
        case Command::CheckFresh:
        case Command::Subsumes: return holds ? 0 : 1;
        case Command::Equiv: return solved ? 0 : 1;
        case Command::Unique: return unique_applicable ? 0 : 1;
    }
    return 0;
}

ResultDocument run_command(const ProblemFile& pf0, const Options& opts) {
    ProblemFile pf = pf0;
    for (auto& [sym, th] : opts.theory_overrides) pf.sig.override_theory(sym, th);
    TheoryConfig cfg{&pf.sig};

    ResultDocument doc;
    doc.command = pf.command;

    switch (pf.command) {
        case Command::Generalize: {
            EnauEngine eng(pf.sig, pf.fresh);
            EnauLimits limits;
            limits.max_states = opts.max_states;
            limits.jobs = opts.jobs;
            EnauOutcome out = eng.run(pf.lhs, pf.rhs, limits);
            doc.limits_hit = !out.complete;
            doc.limit_note = out.limit_note;

            std::vector<GeneralizationResult> results = std::move(out.results);
            if (opts.post_process) {
                doc.post_processed = true;
                TermInContext in1{pf.fresh, flatten(pf.lhs, pf.sig)};
                TermInContext in2{pf.fresh, flatten(pf.rhs, pf.sig)};
                for (auto& r : results) {
                    std::set<std::string> m = atom_vars(r.result.term);
                    collect_atom_vars(r.result.context, m);
                    auto pp = post_process(r.result, in1, in2, m, cfg, {}, &eng.cache());
                    if (pp.budget_exceeded) doc.limits_hit = true;
                    r.result = pp.strengthened;
                }
            }
            if (opts.minimize) {
                doc.minimized = true;
                std::vector<TermInContext> tics;
                std::vector<std::string> keys;
                for (auto& r : results) {
                    tics.push_back(r.result);
                    keys.push_back(canonical_result_key(r.result, r.store, pf.sig));
                }
                std::vector<GeneralizationResult> kept;
                for (size_t i : minimize_indices(tics, keys, cfg, &eng.cache()))
                    kept.push_back(std::move(results[i]));
                results = std::move(kept);
            }
            for (auto& r : results)
                doc.results.push_back(ResultEntry{r.result.context, r.result.term, r.store,
                                                  r.subst, r.trace});
            break;
        }
        case Command::Check: {
            doc.has_bool = true;
            if (pf.ground_mode) {
                doc.holds = eq_modulo(pf.glhs, pf.grhs, cfg);
            } else {
                JudgementCache cache;
                doc.vacuous = !consistent(pf.fresh, &cache);
                doc.holds = holds_eq(pf.fresh, flatten(pf.lhs, pf.sig), flatten(pf.rhs, pf.sig),
                                     cfg, &cache);
            }
            break;
        }
        case Command::CheckFresh: {
            doc.has_bool = true;
            if (pf.ground_mode) {
                doc.holds = fresh_ground(pf.fresh_subject, pf.grhs);
            } else {
                JudgementCache cache;
                doc.vacuous = !consistent(pf.fresh, &cache);
                doc.holds = holds_freshness(
                    pf.fresh, FreshnessConstraint{pf.fresh_subject, flatten(pf.rhs, pf.sig)}, cfg,
                    &cache);
            }
            break;
        }
        case Command::Equiv: {
            NameGen gen;
            JudgementCache cache;
            std::vector<EquivEquation> eqs;
            for (auto& e : pf.equations)
                eqs.push_back(EquivEquation{flatten(e.left, pf.sig), flatten(e.right, pf.sig)});
            if (opts.all_mappings) {
                doc.mappings = eqvm_all(eqs, pf.fresh, pf.sig, gen, &cache);
                doc.solved = !doc.mappings.empty();
                if (doc.solved) doc.mapping = doc.mappings.front();
            } else {
                doc.mapping = eqvm(eqs, pf.fresh, pf.sig, gen, &cache);
                doc.solved = doc.mapping.has_value();
            }
            break;
        }
        case Command::Subsumes: {
            doc.has_bool = true;
            JudgementCache cache;
            doc.holds = tic_subset(TermInContext{pf.ctx1, flatten(pf.t1, pf.sig)},
                                   TermInContext{pf.ctx2, flatten(pf.t2, pf.sig)}, cfg, &cache);
            break;
        }
        case Command::Unique: {
            NameGen gen;
            GTerm l = flatten(pf.glhs, pf.sig), r = flatten(pf.grhs, pf.sig);
            if (!l.is(GTerm::Kind::App) || l.args().empty())
                throw std::invalid_argument("unique: expressions must be applications");
            std::optional<Term> res;
            switch (pf.sig.theory_of(l.sym())) {
                case Theory::AC: res = unique_lgg_ac(l, r, pf.sig, gen); break;
                case Theory::C: res = unique_lgg_c(l, r, pf.sig, gen); break;
                case Theory::A: res = unique_lgg_a(l, r, pf.sig, gen); break;
                case Theory::Free:
                    throw std::invalid_argument("unique: head symbol must be A, C or AC");
            }
            doc.unique = res;
            doc.unique_applicable = res.has_value();
            break;
        }
    }
    return doc;
}

// --------------------------------------------------------------------------
// Rendering
// --------------------------------------------------------------------------

namespace {

const char* command_name(Command c) {
    switch (c) {
        case Command::Generalize: return "generalize";
        case Command::Check: return "check";
        case Command::CheckFresh: return "checkfresh";
        case Command::Equiv: return "equiv";
        case Command::Subsumes: return "subsumes";
        case Command::Unique: return "unique";
    }
    return "?";
}

std::string store_entry_text(const AUEquation& e) {
    return e.genvar + ": " + to_string(e.left) + " =^= " + to_string(e.right);
}

std::string render_text(const ResultDocument& doc) {
    std::ostringstream os;
    switch (doc.command) {
        case Command::Generalize: {
            if (doc.results.empty()) {
                os << "no-results";
                if (doc.limits_hit) os << " (" << doc.limit_note << ")";
                os << "\n";
                break;
            }
            for (size_t i = 0; i < doc.results.size(); ++i) {
                const ResultEntry& r = doc.results[i];
                os << "result " << i + 1 << ":\n";
                os << "  context: " << (r.context.empty() ? "(empty)" : to_string(r.context))
                   << "\n";
                os << "  term: " << to_string(r.term) << "\n";
                if (!r.store.empty()) {
                    os << "  store:\n";
                    for (auto& e : r.store) os << "    " << store_entry_text(e) << "\n";
                }
                if (!r.trace.empty()) {
                    os << "  trace:";
                    for (auto& t : r.trace) os << " " << t;
                    os << "\n";
                }
            }
            if (doc.limits_hit) os << "incomplete: " << doc.limit_note << "\n";
            if (doc.minimized) os << "minimized: yes\n";
            if (doc.post_processed) os << "post-processed: yes\n";
            break;
        }
        case Command::Check:
        case Command::CheckFresh:
        case Command::Subsumes:
            os << (doc.holds ? "holds" : "does-not-hold");
            if (doc.vacuous) os << " (vacuously: inconsistent context)";
            os << "\n";
            break;
        case Command::Equiv: {
            if (!doc.solved) {
                os << "no-mapping\n";
                break;
            }
            auto show = [&](const AtomMapping& m) {
                os << "mapping:";
                if (m.entries.empty()) os << " identity";
                for (auto& [a, r] : m.entries) os << " " << a << " -> " << to_string(r) << ";";
                os << "\n";
                os << "permutation: ";
                Permutation pi = mapping_to_permutation(m);
                os << (pi.is_identity() ? "Id" : to_string(pi)) << "\n";
                if (!m.verified) os << "note: holds under the reported pattern, not the full context\n";
                if (!m.support.empty()) os << "support: " << to_string(m.support) << "\n";
            };
            if (doc.mappings.empty()) {
                show(*doc.mapping);
            } else {
                for (auto& m : doc.mappings) show(m);
            }
            break;
        }
        case Command::Unique:
            if (doc.unique_applicable) os << "unique-lgg: " << to_string(*doc.unique) << "\n";
            else os << "criterion-inapplicable\n";
            break;
    }
    return os.str();
}

using nlohmann::json;

json susp_json(const Suspension& s);

json perm_json(const Permutation& p) {
    json out = json::array();
    for (auto& sw : p.swaps) out.push_back(json::array({susp_json(sw.lhs), susp_json(sw.rhs)}));
    return out;
}

json susp_json(const Suspension& s) {
    if (s.is_plain()) return s.var;
    return json{{"p", perm_json(s.perm)}, {"v", s.var}};
}

json term_json(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::AtomSusp:
            return json{{"k", "avar"}, {"p", perm_json(t.susp().perm)}, {"v", t.susp().var}};
        case Term::Kind::VarSusp:
            return json{{"k", "tvar"}, {"p", perm_json(t.vperm())}, {"v", t.vname()}};
        case Term::Kind::App: {
            json args = json::array();
            for (auto& a : t.args()) args.push_back(term_json(a));
            return json{{"k", "app"}, {"f", t.sym()}, {"a", std::move(args)}};
        }
        case Term::Kind::Abs:
            return json{{"k", "abs"}, {"b", susp_json(t.binder())}, {"t", term_json(t.body())}};
    }
    return {};
}

Suspension susp_from(const json& j);

Permutation perm_from(const json& j) {
    Permutation p;
    for (auto& sw : j) p.swaps.push_back(Swap{susp_from(sw[0]), susp_from(sw[1])});
    return p;
}

Suspension susp_from(const json& j) {
    if (j.is_string()) return Suspension::plain(j.get<std::string>());
    return Suspension{perm_from(j.at("p")), j.at("v").get<std::string>()};
}

Term term_from(const json& j) {
    std::string k = j.at("k").get<std::string>();
    if (k == "avar") return Term::atom_susp(Suspension{perm_from(j.at("p")), j.at("v")});
    if (k == "tvar") return Term::var_susp(perm_from(j.at("p")), j.at("v"));
    if (k == "app") {
        TermList args;
        for (auto& a : j.at("a")) args.push_back(term_from(a));
        return Term::app(j.at("f").get<std::string>(), std::move(args));
    }
    if (k == "abs") return Term::abs(susp_from(j.at("b")), term_from(j.at("t")));
    throw std::invalid_argument("unknown term node kind '" + k + "'");
}

json context_json(const FreshnessContext& c) {
    json out = json::array();
    for (auto& fc : c.constraints())
        out.push_back(json{{"avar", fc.avar}, {"target", term_json(fc.target)}});
    return out;
}

json mapping_json(const AtomMapping& m) {
    json entries = json::array();
    for (auto& [a, r] : m.entries) entries.push_back(json{{"from", a}, {"to", susp_json(r)}});
    Permutation pi = mapping_to_permutation(m);
    return json{{"entries", std::move(entries)},
                {"permutation", perm_json(pi)},
                {"verified", m.verified},
                {"support", context_json(m.support)}};
}

std::string render_machine(const ResultDocument& doc) {
    json out;
    out["command"] = command_name(doc.command);
    out["flags"] = json{{"minimized", doc.minimized},
                        {"post_processed", doc.post_processed},
                        {"limits_hit", doc.limits_hit}};
    if (doc.limits_hit) out["limit_note"] = doc.limit_note;
    switch (doc.command) {
        case Command::Generalize: {
            json rs = json::array();
            for (auto& r : doc.results) {
                json store = json::array();
                for (auto& e : r.store)
                    store.push_back(json{{"var", e.genvar},
                                         {"kind", e.kind == GenVarKind::AtomVar ? "atom" : "term"},
                                         {"left", term_json(e.left)},
                                         {"right", term_json(e.right)}});
                json subst = json::array();
                for (auto& [v, t] : r.subst.term_map())
                    subst.push_back(json{{"var", v}, {"term", term_json(t)}});
                for (auto& [v, s] : r.subst.atom_map())
                    subst.push_back(json{{"var", v}, {"susp", susp_json(s)}});
                rs.push_back(json{{"context", context_json(r.context)},
                                  {"term", term_json(r.term)},
                                  {"store", std::move(store)},
                                  {"subst", std::move(subst)},
                                  {"trace", r.trace}});
            }
            out["results"] = std::move(rs);
            break;
        }
        case Command::Check:
        case Command::CheckFresh:
        case Command::Subsumes:
            out["holds"] = doc.holds;
            out["vacuous"] = doc.vacuous;
            break;
        case Command::Equiv:
            out["solved"] = doc.solved;
            if (doc.mapping) out["mapping"] = mapping_json(*doc.mapping);
            if (!doc.mappings.empty()) {
                json ms = json::array();
                for (auto& m : doc.mappings) ms.push_back(mapping_json(m));
                out["mappings"] = std::move(ms);
            }
            break;
        case Command::Unique:
            out["applicable"] = doc.unique_applicable;
            if (doc.unique) out["term"] = term_json(*doc.unique);
            break;
    }
    return out.dump(2) + "\n";
}

}  // namespace

std::string render(const ResultDocument& doc, Options::Format format) {
    return format == Options::Format::Machine ? render_machine(doc) : render_text(doc);
}

std::string render_problem(const ProblemFile& pf) {
    std::ostringstream os;
    auto syms = pf.sig.symbols();
    if (!syms.empty()) {
        os << "sig: ";
        for (size_t i = 0; i < syms.size(); ++i) {
            if (i) os << ", ";
            os << syms[i].name << ":";
            switch (syms[i].theory) {
                case Theory::Free: break;
                case Theory::A: os << "A"; break;
                case Theory::C: os << "C"; break;
                case Theory::AC: os << "AC"; break;
            }
            os << "/" << syms[i].arity;
        }
        os << ";\n";
    }
    if (!pf.atomvars.empty()) {
        os << "atomvars:";
        for (auto& v : pf.atomvars) os << " " << v;
        os << ";\n";
    }
    if (!pf.termvars.empty()) {
        os << "termvars:";
        for (auto& v : pf.termvars) os << " " << v;
        os << ";\n";
    }
    if (!pf.fresh.empty()) os << "fresh: " << to_string(pf.fresh) << ";\n";
    switch (pf.command) {
        case Command::Generalize:
            os << "generalize " << to_string(pf.lhs) << " =?= " << to_string(pf.rhs) << "\n";
            break;
        case Command::Unique:
            os << "unique " << to_string(pf.glhs) << " =?= " << to_string(pf.grhs) << "\n";
            break;
        case Command::Check:
            if (pf.ground_mode)
                os << "check " << to_string(pf.glhs) << " ~ " << to_string(pf.grhs) << "\n";
            else
                os << "check " << to_string(pf.lhs) << " ~ " << to_string(pf.rhs) << "\n";
            break;
        case Command::CheckFresh:
            os << "checkfresh " << pf.fresh_subject << " # "
               << (pf.ground_mode ? to_string(pf.grhs) : to_string(pf.rhs)) << "\n";
            break;
        case Command::Equiv: {
            os << "equiv ";
            for (size_t i = 0; i < pf.equations.size(); ++i) {
                if (i) os << ", ";
                os << to_string(pf.equations[i].left) << " <~ " << to_string(pf.equations[i].right);
            }
            os << "\n";
            break;
        }
        case Command::Subsumes:
            os << "subsumes (" << to_string(pf.ctx1) << " | " << to_string(pf.t1) << ") <= ("
               << to_string(pf.ctx2) << " | " << to_string(pf.t2) << ")\n";
            break;
    }
    return os.str();
}

std::string term_to_json(const Term& t) { return term_json(t).dump(); }

Term term_from_json(const std::string& s) { return term_from(json::parse(s)); }

}  // namespace naup
