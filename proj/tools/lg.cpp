// lg: check, normalize, analyze and format .lg programs.
//
// Exit codes: 0 ok, 1 internal failure, 2 parse or I/O error, 3 type error,
// 4 step budget exceeded, 5 an analysis check failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lambdag/lambdag.hpp"

namespace {

using namespace lambdag;
using nlohmann::json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum Exit { kOk = 0, kInternal = 1, kParse = 2, kType = 3, kBudget = 4, kAnalysis = 5 };

struct Options {
    std::string file;
    std::size_t max_steps = 1'000'000;
    std::string trace = "none";
    std::vector<std::string> checks{"subformula", "parallel", "normal", "subject-reduction"};
    bool parallel = false;
    bool json_report = false;
    bool to_stdout = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string show(const Term& t) { return pretty(canonical_fresh_names(t)); }

json path_json(const Path& p) { return json(std::vector<int>(p.begin(), p.end())); }

std::string path_text(const Path& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + "]";
}

struct Loaded {
    Program prog;
    Formula type;
};

Loaded load(const Options& o) {
    Loaded l{parse_program(read_file(o.file)), {}};
    l.type = infer(l.prog.env(), l.prog.main);
    return l;
}

NormalizeResult run_normalize(const Loaded& l, const Options& o, bool keep_trace) {
    StrategyConfig cfg;
    cfg.max_steps = o.max_steps;
    cfg.parallel_branches = o.parallel;
    cfg.keep_trace = keep_trace;
    if (o.trace == "text") {
        cfg.trace_sink = [](const ReductionStep& s, std::size_t i) {
            std::cout << "step " << i + 1 << ": " << rule_name(s.rule) << " " << path_text(s.path) << "  "
                      << show(s.after) << "\n";
        };
    } else if (o.trace == "jsonl") {
        cfg.trace_sink = [](const ReductionStep& s, std::size_t i) {
            json j{{"step", i + 1}, {"rule", std::string(rule_name(s.rule))}, {"path", path_json(s.path)},
                   {"term", show(s.after)}};
            std::cout << j.dump() << "\n";
        };
    }
    reset_fresh_names();
    return normalize_master(l.prog.main, cfg, l.prog.rules);
}

int cmd_check(const Options& o) {
    std::cout << pretty_formula(load(o).type) << "\n";
    return kOk;
}

int cmd_normalize(const Options& o) {
    Loaded l = load(o);
    NormalizeResult r = run_normalize(l, o, false);
    std::cout << show(r.term) << "\n";
    return kOk;
}

int cmd_analyze(const Options& o) {
    Loaded l = load(o);
    bool want_sr = std::find(o.checks.begin(), o.checks.end(), "subject-reduction") != o.checks.end();
    NormalizeResult r = run_normalize(l, o, want_sr);
    const TypeEnv env = l.prog.env();
    std::vector<CheckResult> results;
    for (const auto& c : o.checks) {
        if (c == "subformula") {
            auto rep = check_subformula_property(r.term, env);
            results.insert(results.end(), rep.checks.begin(), rep.checks.end());
        } else if (c == "parallel") {
            bool ok = check_parallel_form(r.term);
            results.push_back({"parallel", ok, ok ? std::nullopt : std::optional<Path>(Path{}),
                               ok ? "parallel form" : "a parallel composition sits under another constructor"});
        } else if (c == "normal") {
            auto redexes = find_redexes(r.term, l.prog.rules);
            bool ok = redexes.empty();
            results.push_back({"normal", ok, ok ? std::nullopt : std::optional<Path>(redexes.front().path),
                               ok ? "no redex" : std::string(rule_name(redexes.front().rule)) + " redex remains"});
        } else if (c == "subject-reduction") {
            auto rep = check_subject_reduction(r.trace, env, l.prog.rules);
            results.insert(results.end(), rep.checks.begin(), rep.checks.end());
        }
    }
    bool all = true;
    if (o.json_report) {
        json checks = json::array();
        for (const auto& c : results) {
            all = all && c.pass;
            json j{{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}};
            j["witness"] = c.witness ? path_json(*c.witness) : json(nullptr);
            checks.push_back(j);
        }
        json out{{"term", show(r.term)}, {"steps", r.steps}, {"checks", checks}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "normal form: " << show(r.term) << "\n";
        for (const auto& c : results) {
            all = all && c.pass;
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name;
            if (!c.pass) std::cout << " at " << path_text(*c.witness);
            std::cout << ": " << c.detail << "\n";
        }
    }
    return all ? kOk : kAnalysis;
}

int cmd_fmt(const Options& o) {
    Program p = parse_program(read_file(o.file));
    std::string text = pretty_program(p);
    if (o.to_stdout) {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(o.file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + o.file + "'");
    out << text;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Type checker and normalizer for a parallel lambda calculus of Goedel logic"};
    app.require_subcommand(1);
    Options o;

    auto add_file = [&](CLI::App* sub) { sub->add_option("file", o.file, "program (.lg)")->required(); };
    auto add_engine = [&](CLI::App* sub) {
        sub->add_option("--max-steps", o.max_steps, "step budget")->check(CLI::PositiveNumber);
        sub->add_flag("--parallel", o.parallel, "normalize independent branches concurrently");
    };

    auto* check = app.add_subcommand("check", "print the type of main");
    add_file(check);
    auto* norm = app.add_subcommand("normalize", "print the normal form of main");
    add_file(norm);
    add_engine(norm);
    norm->add_option("--trace", o.trace, "trace format")->check(CLI::IsMember({"none", "text", "jsonl"}));
    auto* analyze = app.add_subcommand("analyze", "normalize main and run metatheory checks");
    add_file(analyze);
    add_engine(analyze);
    analyze->add_option("--checks", o.checks, "comma separated checks")
        ->delimiter(',')
        ->check(CLI::IsMember({"subformula", "parallel", "normal", "subject-reduction"}));
    analyze->add_flag("--json", o.json_report, "machine-readable report");
    auto* fmt = app.add_subcommand("fmt", "rewrite the file in canonical form");
    add_file(fmt);
    fmt->add_flag("--stdout", o.to_stdout, "print instead of rewriting the file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(o);
        if (norm->parsed()) return cmd_normalize(o);
        if (analyze->parsed()) return cmd_analyze(o);
        return cmd_fmt(o);
    } catch (const ParseError& e) {
        std::cerr << o.file << ":" << e.what() << "\n";
        return kParse;
    } catch (const TypeError& e) {
        std::cerr << o.file << ": type error: " << e.what();
        if (e.expected) std::cerr << " (expected " << pretty_formula(*e.expected) << ")";
        if (e.actual) std::cerr << " (found " << pretty_formula(*e.actual) << ")";
        std::cerr << " at " << [&] {
            std::string s = "[";
            for (std::size_t i = 0; i < e.path.size(); ++i) s += (i ? "," : "") + std::to_string(e.path[i]);
            return s + "]";
        }() << "\n";
        return kType;
    } catch (const ScopeError& e) {
        std::cerr << o.file << ": type error: " << e.what() << "\n";
        return kType;
    } catch (const StepBudgetExceeded& e) {
        std::cerr << o.file << ": " << e.what() << "\n";
        return kBudget;
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << o.file << ": internal error: " << e.what() << "\n";
        return kInternal;
    }
}
