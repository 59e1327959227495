#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "naup/io.hpp"

// naup: nominal anti-unification with atom-variables modulo A/C/AC.
// Reads a problem file (or stdin) and runs the command it contains.

int main(int argc, char** argv) {
    CLI::App app{"nominal anti-unification modulo equational theories"};

    std::string path;
    app.add_option("file", path, "problem file (.naup); '-' or omitted reads stdin");

    naup::Options opts;
    std::string format = "text";
    std::vector<std::string> overrides;
    app.add_flag("--minimize", opts.minimize, "keep only the least general results");
    app.add_flag("--post-process", opts.post_process,
                 "strengthen result contexts by generate-and-test");
    app.add_flag("--all-mappings", opts.all_mappings, "equiv: report every mapping found");
    app.add_option("--max-states", opts.max_states, "search state cap")->capture_default_str();
    app.add_option("--pool-size", opts.pool_size, "oracle atom pool size override");
    app.add_option("--oracle-depth", opts.oracle_depth, "oracle instantiation depth")
        ->capture_default_str();
    app.add_option("--jobs", opts.jobs, "worker threads for the search")->capture_default_str();
    app.add_option("--format", format, "output format: text|machine")->capture_default_str();
    app.add_option("--theory-override", overrides,
                   "reassign a symbol's theory, e.g. f=AC (repeatable)");

    CLI11_PARSE(app, argc, argv);

    if (format == "machine") {
        opts.format = naup::Options::Format::Machine;
    } else if (format != "text") {
        std::cerr << "unknown format '" << format << "'\n";
        return 2;
    }
    for (const std::string& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::cerr << "bad --theory-override '" << ov << "' (expected sym=THEORY)\n";
            return 2;
        }
        std::string th = ov.substr(eq + 1);
        naup::Theory t;
        if (th == "A") t = naup::Theory::A;
        else if (th == "C") t = naup::Theory::C;
        else if (th == "AC") t = naup::Theory::AC;
        else if (th == "0" || th.empty()) t = naup::Theory::Free;
        else {
            std::cerr << "unknown theory '" << th << "'\n";
            return 2;
        }
        opts.theory_overrides[ov.substr(0, eq)] = t;
    }

    std::string text;
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream f(path);
        if (!f) {
            std::cerr << "cannot open " << path << "\n";
            return 2;
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }

    try {
        naup::ProblemFile pf = naup::parse_problem(text);
        naup::ResultDocument doc = naup::run_command(pf, opts);
        std::cout << naup::render(doc, opts.format);
        return doc.exit_code();
    } catch (const naup::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
