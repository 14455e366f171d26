// lpterm: termination analysis and bottom-up evaluation of logic programs
// with function symbols.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpterm/cycle_bounded.hpp"
#include "lpterm/evaluator.hpp"
#include "lpterm/graph.hpp"
#include "lpterm/parser.hpp"
#include "lpterm/report.hpp"
#include "lpterm/rule_bounded.hpp"

namespace fs = std::filesystem;
using namespace lpterm;

namespace {

constexpr int exit_bounded = 0;
constexpr int exit_not_bounded = 1;
constexpr int exit_unknown = 2;
constexpr int exit_input_error = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Program load_program(const std::string& path) {
    try {
        return parse_program(read_file(path));
    } catch (const ParseError& e) {
        throw InputError(path + ":" + e.what());
    }
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path.string() + ": cannot write file");
    out << text;
}

// Positive normal form, applying st() only when needed.
Program normalized(const Program& p, bool& transformed) {
    transformed = !p.is_positive_normal();
    return transformed ? st_transform(p) : p;
}

struct AnalyzeFlags {
    std::string path;
    std::string criterion = "both";
    std::string format = "json";
    std::string dump_dir;
    std::string dot_file;
    std::size_t max_choices = 4096;
    std::size_t max_paths = 10000;
    std::size_t max_linear_versions = 256;
    std::string vacuous = "fail";
    bool no_timings = false;
};

int verdict_exit(BoundStatus s) {
    switch (s) {
        case BoundStatus::bounded: return exit_bounded;
        case BoundStatus::unbounded: return exit_not_bounded;
        default: return exit_unknown;
    }
}

void print_text(const nlohmann::json& r) {
    std::cout << "program: " << r["program"].get<std::string>() << "\n";
    if (r["st_transform_applied"].get<bool>()) std::cout << "st-transform applied\n";
    const auto& c = r["criteria"];
    if (c.contains("rule_bounded")) {
        const auto& rb = c["rule_bounded"];
        std::cout << "rule-bounded: " << rb["verdict"].get<std::string>() << "\n";
        for (const auto& s : rb["sccs"]) {
            if (s["status"] == "SKIPPED_TRIVIAL") continue;
            std::cout << "  C" << s["component"] << " " << s["status"].get<std::string>();
            if (!s["alpha"].is_null()) std::cout << " alpha=" << s["alpha"].dump();
            if (s.contains("reason")) std::cout << " (" << s["reason"].get<std::string>() << ")";
            std::cout << "\n";
            for (const auto& g : s["grouped"]) std::cout << "    " << g.get<std::string>() << "\n";
        }
    }
    if (c.contains("cycle_bounded")) {
        const auto& cb = c["cycle_bounded"];
        std::cout << "cycle-bounded: " << cb["verdict"].get<std::string>() << " ("
                  << cb["linear_versions_checked"] << " linear versions, " << cb["paths_checked"]
                  << " paths)\n";
        if (!cb["reason"].get<std::string>().empty())
            std::cout << "  " << cb["reason"].get<std::string>() << "\n";
        if (!cb["failure"].is_null()) {
            const auto& f = cb["failure"];
            std::cout << "  failing path in version " << f["version"] << ": rules " << f["rules"].dump()
                      << "\n  w = " << f["w"].dump() << "\n  witness = " << f["witness"].dump() << "\n";
        }
    }
}

int cmd_analyze(const AnalyzeFlags& f) {
    Program source = load_program(f.path);
    bool transformed = false;
    Program p = normalized(source, transformed);
    auto a = analyze_structure(p);

    nlohmann::json report;
    report["schema_version"] = report_schema_version;
    report["program"] = f.path;
    report["st_transform_applied"] = transformed;
    std::vector<std::string> rules;
    for (const auto& r : p.rules()) rules.push_back("r" + std::to_string(r.id) + ": " + render_rule(r));
    report["rules"] = rules;
    report["criteria"] = nlohmann::json::object();
    nlohmann::json timings = nlohmann::json::object();

    if (!f.dot_file.empty()) write_file(f.dot_file, to_dot(p, a.graph, a.sccs));
    if (!f.dump_dir.empty()) fs::create_directories(f.dump_dir);

    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t) {
        return std::chrono::duration<double, std::milli>(clock::now() - t).count();
    };

    std::optional<BoundStatus> rule_status, cycle_status;
    if (f.criterion == "rule" || f.criterion == "both") {
        auto t0 = clock::now();
        RuleBoundedOptions opt;
        opt.max_choices = f.max_choices;
        auto v = check_program_rule_bounded(p, a, opt);
        timings["rule_bounded"] = ms_since(t0);
        rule_status = v.status;
        report["criteria"]["rule_bounded"] = rule_bounded_json(p, a, v);
        if (!f.dump_dir.empty())
            for (const auto& s : v.sccs) {
                if (s.status == BoundStatus::skipped_trivial) continue;
                std::string text;
                for (const auto& g : s.grouped) text += "# " + render_grouped(g) + "\n";
                text += dump_system({s.constraints}, "forall reduction for C" + std::to_string(s.component));
                write_file(fs::path(f.dump_dir) / ("scc" + std::to_string(s.component) + ".lp"), text);
            }
    }
    if (f.criterion == "cycle" || f.criterion == "both") {
        auto t0 = clock::now();
        CycleOptions opt;
        opt.max_paths = f.max_paths;
        opt.max_linear_versions = f.max_linear_versions;
        opt.vacuous_bounded = f.vacuous == "bounded";
        auto v = check_program_cycle_bounded(p, opt);
        timings["cycle_bounded"] = ms_since(t0);
        cycle_status = v.status;
        report["criteria"]["cycle_bounded"] = cycle_bounded_json(v, opt);
        if (!f.dump_dir.empty()) {
            for (std::size_t i = 0; i < v.paths.size(); ++i)
                write_file(fs::path(f.dump_dir) / ("path" + std::to_string(i) + ".lp"),
                           dump_path(v.paths[i].path, v.paths[i].verdict));
            if (v.failure)
                write_file(fs::path(f.dump_dir) / "failing_path.lp",
                           dump_path(v.failure->path, v.failure->verdict));
        }
    }
    if (!f.no_timings) report["timings_ms"] = timings;

    if (f.format == "json") std::cout << report.dump(2) << "\n";
    else print_text(report);

    // either criterion suffices for termination
    if (rule_status == BoundStatus::bounded || cycle_status == BoundStatus::bounded) return exit_bounded;
    if (rule_status == BoundStatus::unknown || cycle_status == BoundStatus::unknown) return exit_unknown;
    return verdict_exit(rule_status ? *rule_status : *cycle_status);
}

struct EvalFlags {
    std::string path;
    std::string facts;
    std::string format = "text";
    EvalBudget budget;
};

int cmd_eval(const EvalFlags& f) {
    Program source = load_program(f.path);
    bool transformed = false;
    Program p = normalized(source, transformed);
    FactStore facts;
    if (!f.facts.empty()) {
        try {
            facts = facts_from_program(load_program(f.facts));
        } catch (const std::invalid_argument& e) {
            throw InputError(f.facts + ": " + e.what());
        }
    }
    auto out = fixpoint(p, facts, f.budget);
    if (transformed) std::cerr << "note: st-transform applied before evaluation\n";
    if (f.format == "json") {
        std::cout << eval_json(out).dump(2) << "\n";
    } else if (out.status == EvalStatus::fixpoint) {
        for (const auto& a : out.model.sorted()) std::cout << render_atom(a) << ".\n";
    }
    if (out.status == EvalStatus::budget_exceeded) {
        std::cerr << "budget exceeded: " << to_string(out.exceeded) << " after " << out.iterations
                  << " iterations, " << out.model.size() << " atoms, max term size "
                  << out.max_term_size << "\n";
        return 1;
    }
    return 0;
}

int cmd_graph(const std::string& path, const std::string& out) {
    Program source = load_program(path);
    bool transformed = false;
    Program p = normalized(source, transformed);
    auto a = analyze_structure(p);
    std::string dot = to_dot(p, a.graph, a.sccs);
    if (out.empty() || out == "-") std::cout << dot;
    else write_file(out, dot);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Termination analysis for logic programs with function symbols"};
    app.require_subcommand(1);

    AnalyzeFlags af;
    auto* analyze = app.add_subcommand("analyze", "Check rule-boundedness and cycle-boundedness");
    analyze->add_option("program", af.path, "Program file (.lp)")->required();
    analyze->add_option("--criterion", af.criterion)->check(CLI::IsMember({"rule", "cycle", "both"}));
    analyze->add_option("--format", af.format)->check(CLI::IsMember({"json", "text"}));
    analyze->add_option("--dump-constraints", af.dump_dir, "Write constraint systems to DIR");
    analyze->add_option("--dot", af.dot_file, "Write the firing graph to FILE");
    analyze->add_option("--max-choices", af.max_choices)->check(CLI::PositiveNumber);
    analyze->add_option("--max-paths", af.max_paths)->check(CLI::PositiveNumber);
    analyze->add_option("--max-linear-versions", af.max_linear_versions)->check(CLI::PositiveNumber);
    analyze->add_option("--vacuous-cycles", af.vacuous)->check(CLI::IsMember({"fail", "bounded"}));
    analyze->add_flag("--no-timings", af.no_timings, "Omit timings for reproducible output");

    EvalFlags ef;
    std::int64_t timeout_ms = ef.budget.wall_clock_ms;
    auto* eval = app.add_subcommand("eval", "Compute the least model bottom-up");
    eval->add_option("program", ef.path, "Program file (.lp)")->required();
    eval->add_option("facts", ef.facts, "Ground facts file (.lp)");
    eval->add_option("--format", ef.format)->check(CLI::IsMember({"json", "text"}));
    eval->add_option("--max-iter", ef.budget.max_iterations)->check(CLI::PositiveNumber);
    eval->add_option("--max-atoms", ef.budget.max_derived_atoms)->check(CLI::PositiveNumber);
    eval->add_option("--max-term-size", ef.budget.max_ground_term_size)->check(CLI::PositiveNumber);
    eval->add_option("--timeout-ms", timeout_ms)->check(CLI::PositiveNumber);

    std::string graph_path, graph_out;
    auto* graph = app.add_subcommand("graph", "Print the firing graph as DOT");
    graph->add_option("program", graph_path, "Program file (.lp)")->required();
    graph->add_option("-o,--output", graph_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_input_error;
    }

    try {
        if (*analyze) return cmd_analyze(af);
        if (*eval) {
            ef.budget.wall_clock_ms = timeout_ms;
            return cmd_eval(ef);
        }
        if (*graph) return cmd_graph(graph_path, graph_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_input_error;
}
