#include "pgraph/cli.hpp"

#include "pgraph/compare.hpp"
#include "pgraph/detector.hpp"
#include "pgraph/oracle.hpp"
#include "pgraph/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace pgraph {

namespace {

namespace fs = std::filesystem;

struct AnalyzeArgs {
    std::string path;
    std::string report = "text";
    std::string svg;
    bool semantics = false;
    std::string oracle = "off";
    std::size_t max_states = default_state_budget;
    bool fail_on_deadlock = false;
};

struct Outcome {
    int code = kInputError;
    std::string out;
    std::string err;
    std::string json;  // report document, empty on error
};

int exit_code_for(const ReportDocument& doc, bool fail_on_deadlock)
{
    if (doc.deadlocks.empty())
        return kDeadlockFree;
    if (doc.reachable_deadlocks() > 0 || fail_on_deadlock)
        return kReachableDeadlock;
    return kUnreachableDeadlockOnly;
}

Outcome analyze_text(const std::string& label, const std::string& text, const AnalyzeArgs& args)
{
    Outcome res;
    std::ostringstream err;
    try {
        auto parsed = validate(parse_scenario(text));
        for (const auto& d : parsed.diagnostics)
            err << label << ':' << d.to_string() << '\n';
        if (!parsed.ok()) {
            res.err = err.str();
            return res;
        }
        const ProgressGraph g = build_graph(*parsed.value);

        std::optional<OracleResult> truth;
        if (args.oracle != "off")
            truth = explore(*parsed.value, args.max_states);

        AnalyzeOptions opts;
        if (args.oracle == "reachability")
            opts.exact_reachability = &*truth;
        const RegionReport regions = analyze(g, opts);

        std::optional<ComparisonReport> cmp;
        if (truth)
            cmp = compare_with_geometry(*truth, regions, g);

        const std::string svg = args.svg.empty() ? std::string() : render_svg(g, regions);
        const ReportDocument doc = make_report(g, regions, cmp);
        res.json = emit_json(doc);
        res.out = args.report == "json" ? res.json : emit_text(doc, args.semantics);

        if (!args.svg.empty()) {
            std::ofstream f(args.svg, std::ios::binary);
            if (!f || !(f << svg)) {
                err << "error: cannot write SVG to '" << args.svg << "'\n";
                res.err = err.str();
                return res;
            }
        }

        if (cmp && !cmp->pass) {
            err << label << ": error: geometric analysis disagrees with the interleaving oracle ("
                << cmp->agreement() << " states agree)\n";
            res.err = err.str();
            return res;
        }
        res.code = exit_code_for(doc, args.fail_on_deadlock);
    } catch (const ParseError& e) {
        err << label << ':' << e.diagnostic().to_string() << '\n';
    } catch (const BudgetExceeded& e) {
        err << label << ": error: " << e.what() << " (raise --max-states)\n";
    } catch (const DimensionError& e) {
        err << label << ": error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << label << ": internal error: " << e.what() << '\n';
    }
    res.err = err.str();
    return res;
}

std::optional<std::string> read_file(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    if (!f)
        return std::nullopt;
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome analyze_file(const fs::path& p, const AnalyzeArgs& args)
{
    const auto text = read_file(p);
    if (!text) {
        Outcome res;
        res.err = "error: cannot open '" + p.string() + "'\n";
        return res;
    }
    return analyze_text(p.string(), *text, args);
}

int worst(int a, int b)
{
    const auto rank = [](int c) {
        switch (c) {
        case kInputError: return 3;
        case kReachableDeadlock: return 2;
        case kUnreachableDeadlockOnly: return 1;
        default: return 0;
        }
    };
    return rank(a) >= rank(b) ? a : b;
}

int analyze_directory(const fs::path& dir, const AnalyzeArgs& args, std::ostream& out, std::ostream& err)
{
    if (!args.svg.empty()) {
        err << "error: --svg needs a single scenario file\n";
        return kInputError;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".msc")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<std::future<Outcome>> jobs;
    for (const auto& f : files)
        jobs.push_back(std::async(std::launch::async, [f, &args] { return analyze_file(f, args); }));

    int code = kDeadlockFree;
    nlohmann::ordered_json batch = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
        const Outcome res = jobs[i].get();
        code = worst(code, res.code);
        err << res.err;
        if (args.report == "json") {
            nlohmann::ordered_json entry;
            entry["file"] = files[i].string();
            entry["exit"] = res.code;
            entry["report"] = res.json.empty() ? nlohmann::ordered_json(nullptr)
                                               : nlohmann::ordered_json::parse(res.json);
            batch.push_back(std::move(entry));
        } else {
            out << "== " << files[i].string() << '\n' << res.out;
        }
    }
    if (args.report == "json")
        out << batch.dump(2) << '\n';
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deadlock detection for lock/unlock scenarios on progress graphs", "pgraph"};
    app.require_subcommand(1);

    AnalyzeArgs a;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a scenario file (or every *.msc in a directory)");
    analyze_cmd->add_option("file", a.path, "Scenario file or directory")->required();
    analyze_cmd->add_option("--report", a.report, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    analyze_cmd->add_option("--svg", a.svg, "Write the two-process progress graph as SVG");
    analyze_cmd->add_flag("--semantics", a.semantics, "Print per-process algebra expressions");
    analyze_cmd->add_option("--oracle", a.oracle, "Cross-check with exhaustive interleaving exploration")
        ->check(CLI::IsMember({"off", "check", "reachability"}))
        ->capture_default_str();
    analyze_cmd->add_option("--max-states", a.max_states, "State budget for the oracle")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    analyze_cmd->add_flag("--fail-on-deadlock", a.fail_on_deadlock,
                          "Exit 2 for any deadlock, including unreachable ones");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kInputError;
    }

    const fs::path path(a.path);
    std::error_code ec;
    if (fs::is_directory(path, ec))
        return analyze_directory(path, a, out, err);

    const Outcome res = analyze_file(path, a);
    out << res.out;
    err << res.err;
    return res.code;
}

}  // namespace pgraph
