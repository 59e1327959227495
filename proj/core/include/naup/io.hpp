#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "naup/enau.hpp"
#include "naup/eqvm.hpp"
#include "naup/minimize.hpp"
#include "naup/term.hpp"

// Problem files (.naup), result documents, and command dispatch. The
// concrete syntax:
//
//   sig: f:AC/2, g:0/2, c:/0;
//   atomvars: A B C;
//   termvars: X Y;
//   fresh: A#B, C # lam A. lam B. C;
//   generalize lam A. f(A,A,B) =?= lam B. f(A,B,A)
//
// Commands: generalize s =?= t | check s ~ t | checkfresh A # t |
// equiv s <~ t [, ...] | subsumes (ctx | t) <= (ctx | t) | unique s =?= t.
// Swap sequences are written left to right, outermost first; the rightmost
// swap acts first. Identifiers starting with '_' are reserved.

namespace naup {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
};

enum class Command { Generalize, Check, CheckFresh, Equiv, Subsumes, Unique };

struct ProblemFile {
    Signature sig;
    std::set<std::string> atomvars, termvars;
    FreshnessContext fresh;
    Command command = Command::Generalize;

    Term lhs, rhs;                         // generalize / check / unique
    bool ground_mode = false;              // check/checkfresh over concrete atoms
    GTerm glhs, grhs;                      //   their ground payloads
    std::string fresh_subject;             // checkfresh
    std::vector<EquivEquation> equations;  // equiv
    FreshnessContext ctx1, ctx2;           // subsumes
    Term t1, t2;
};

ProblemFile parse_problem(const std::string& text);

// Term in the problem grammar, elaborated against declarations.
Term parse_term(const std::string& text, const Signature& sig,
                const std::set<std::string>& atomvars, const std::set<std::string>& termvars,
                bool allow_reserved = false);
GTerm parse_ground_term(const std::string& text, const Signature& sig);

struct Options {
    bool minimize = false;
    bool post_process = false;
    bool all_mappings = false;
    size_t max_states = 10000;
    size_t pool_size = 0;     // extra oracle pool size (0: derived from the problem)
    size_t oracle_depth = 2;  // oracle instantiation depth
    int jobs = 1;
    std::map<std::string, Theory> theory_overrides;
    enum class Format { Text, Machine } format = Format::Text;
};

struct ResultEntry {
    FreshnessContext context;
    Term term;
    std::vector<AUEquation> store;
    Substitution subst;
    std::vector<std::string> trace;
};

struct ResultDocument {
    Command command = Command::Generalize;
    std::vector<ResultEntry> results;

    bool has_bool = false;  // check / checkfresh / subsumes
    bool holds = false;
    bool vacuous = false;

    bool solved = false;  // equiv
    std::optional<AtomMapping> mapping;
    std::vector<AtomMapping> mappings;

    bool unique_applicable = false;  // unique
    std::optional<Term> unique;

    bool minimized = false, post_processed = false, limits_hit = false;
    std::string limit_note;

    // 0 ok, 1 negative/no result, 3 limit hit
    int exit_code() const;
};

ResultDocument run_command(const ProblemFile& pf, const Options& opts);

std::string render(const ResultDocument& doc, Options::Format format);
std::string render_problem(const ProblemFile& pf);

// machine format pieces (stable node kinds, round-trips)
std::string term_to_json(const Term& t);
Term term_from_json(const std::string& json);

}  // namespace naup
