#include "pgraph/report.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

namespace pgraph {

using ojson = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

std::string tuple_text(const IntVec& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

std::string box_text(const HyperRect& r)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < r.dims(); ++i)
        os << (i ? " x " : "") << ']' << r.lo[i] << ',' << r.hi[i] << '[';
    return os.str();
}

std::optional<std::size_t> holder_of(const ValidatedScenario& v, std::size_t resource, const IntVec& state,
                                     std::size_t except)
{
    for (std::size_t j = 0; j < v.process_count(); ++j)
        if (j != except && v.holds(j, resource, state[j]))
            return j;
    return std::nullopt;
}

std::vector<double> normalized(const IntVec& p, const IntVec& extents)
{
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        out[i] = static_cast<double>(p[i]) / extents[i];
    return out;
}

}  // namespace

std::vector<std::string> explain_deadlock(const DeadlockPoint& d, const ValidatedScenario& v)
{
    const auto& s = v.scenario();
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < s.processes.size(); ++i) {
        const auto& name = s.processes[i];
        if (d.blocking[i].is_wall()) {
            lines.push_back(name + ": finished");
            continue;
        }
        const int done = d.grid_state[i];
        std::vector<std::string> held;
        for (std::size_t r = 0; r < s.resources.size(); ++r)
            if (v.holds(i, r, done))
                held.push_back(s.resources[r]);

        std::string line = name + ": done " + std::to_string(done) + (done == 1 ? " event" : " events") + ", ";
        line += held.empty() ? "holds nothing" : "holds " + join(held, " and ");
        const Action& next = s.traces[i][static_cast<std::size_t>(d.point[i]) - 1];
        line += ", blocked at ";
        line += to_string(next.kind);
        line += ' ' + next.resource;
        if (const auto r = s.resource_index(next.resource)) {
            if (const auto h = holder_of(v, *r, d.grid_state, i))
                line += " (held by " + s.processes[*h] + ")";
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

std::size_t ReportDocument::reachable_deadlocks() const
{
    return static_cast<std::size_t>(
        std::count_if(deadlocks.begin(), deadlocks.end(), [](const DeadlockEntry& d) { return d.reachable; }));
}

ReportDocument make_report(const ProgressGraph& g, const RegionReport& r, std::optional<ComparisonReport> oracle)
{
    const auto& v = g.scenario();
    const auto& s = v.scenario();
    ReportDocument doc;
    doc.scenario = s.name;
    doc.resources = s.resources;
    for (std::size_t i = 0; i < s.processes.size(); ++i) {
        ProcessEntry p{s.processes[i], {}, process_semantics(v, s.processes[i])};
        for (const auto& a : s.traces[i])
            p.events.push_back(std::string(to_string(a.kind)) + " " + a.resource);
        doc.processes.push_back(std::move(p));
    }
    doc.extents = g.extents();
    doc.forbidden = g.forbidden();
    doc.unsafe = r.unsafe;
    doc.unreachable = r.unreachable;

    for (const auto& d : r.deadlocks) {
        DeadlockEntry e;
        e.point = d.point;
        e.normalized = normalized(d.point, g.extents());
        e.grid_state = d.grid_state;
        e.reachable = d.reachable;
        for (std::size_t i = 0; i < d.blocking.size(); ++i) {
            const auto& b = d.blocking[i];
            BlockingEntry be{s.processes[i], b.is_wall() ? "wall" : "forbidden", std::nullopt, std::nullopt};
            if (!b.is_wall() && b.rect.conflict) {
                const auto& c = *b.rect.conflict;
                be.resource = c.resource;
                be.holder = s.processes[c.process_a == i ? c.process_b : c.process_a];
            }
            e.blocking.push_back(std::move(be));
        }
        e.narrative = explain_deadlock(d, v);
        doc.deadlocks.push_back(std::move(e));
    }
    doc.oracle = std::move(oracle);
    return doc;
}

namespace {

ojson rect_json(const HyperRect& r, const ReportDocument& doc)
{
    ojson label;
    label["kind"] = std::string(to_string(r.kind));
    if (r.conflict) {
        const auto& c = *r.conflict;
        label["resource"] = c.resource;
        label["processes"] = {doc.processes[c.process_a].name, doc.processes[c.process_b].name};
        label["intervals"] = {{c.interval_a.lock_pos, c.interval_a.unlock_pos},
                              {c.interval_b.lock_pos, c.interval_b.unlock_pos}};
    }
    ojson j;
    j["lo"] = r.lo;
    j["hi"] = r.hi;
    j["label"] = std::move(label);
    j["normalized"] = {{"lo", normalized(r.lo, doc.extents)}, {"hi", normalized(r.hi, doc.extents)}};
    return j;
}

ojson rects_json(const std::vector<HyperRect>& rects, const ReportDocument& doc)
{
    ojson arr = ojson::array();
    for (const auto& r : rects)
        arr.push_back(rect_json(r, doc));
    return arr;
}

}  // namespace

std::string emit_json(const ReportDocument& doc)
{
    ojson j;
    j["scenario"] = doc.scenario;
    ojson procs = ojson::array();
    for (const auto& p : doc.processes)
        procs.push_back({{"name", p.name}, {"events", p.events}, {"semantics", p.semantics}});
    j["processes"] = std::move(procs);
    j["extents"] = doc.extents;
    j["forbidden"] = rects_json(doc.forbidden, doc);
    j["unsafe"] = rects_json(doc.unsafe, doc);
    j["unreachable"] = rects_json(doc.unreachable, doc);

    ojson dls = ojson::array();
    for (const auto& d : doc.deadlocks) {
        ojson blocking = ojson::array();
        for (const auto& b : d.blocking) {
            ojson bj;
            bj["process"] = b.process;
            bj["kind"] = b.kind;
            bj["resource"] = b.resource ? ojson(*b.resource) : ojson(nullptr);
            bj["holder"] = b.holder ? ojson(*b.holder) : ojson(nullptr);
            blocking.push_back(std::move(bj));
        }
        ojson dj;
        dj["point"] = d.point;
        dj["normalized"] = d.normalized;
        dj["grid_state"] = d.grid_state;
        dj["reachable"] = d.reachable;
        dj["blocking"] = std::move(blocking);
        dj["narrative"] = join(d.narrative, "; ");
        dls.push_back(std::move(dj));
    }
    j["deadlocks"] = std::move(dls);

    if (doc.oracle) {
        ojson mism = ojson::array();
        for (const auto& m : doc.oracle->mismatches)
            mism.push_back({{"state", m.state}, {"detail", m.detail}});
        j["oracle"] = {{"states_total", doc.oracle->states_total},
                       {"agreement", doc.oracle->agreement()},
                       {"mismatches", std::move(mism)}};
    } else {
        j["oracle"] = nullptr;
    }
    j["version"] = doc.version;
    return j.dump(2) + "\n";
}

std::string emit_text(const ReportDocument& doc, bool with_semantics)
{
    std::ostringstream os;
    os << "scenario " << doc.scenario << ": " << doc.processes.size() << " process"
       << (doc.processes.size() == 1 ? "" : "es") << ", " << doc.resources.size() << " resource"
       << (doc.resources.size() == 1 ? "" : "s") << ", extents ";
    for (std::size_t i = 0; i < doc.extents.size(); ++i)
        os << (i ? " x " : "") << doc.extents[i];
    os << '\n';

    if (with_semantics) {
        os << "semantics:\n";
        for (const auto& p : doc.processes)
            os << "  " << p.name << " = " << p.semantics << '\n';
    }

    const auto section = [&](const char* title, const std::vector<HyperRect>& rects) {
        os << title << ": " << rects.size() << '\n';
        for (const auto& r : rects) {
            os << "  " << box_text(r);
            if (r.conflict) {
                const auto& c = *r.conflict;
                os << "  " << c.resource << " held by " << doc.processes[c.process_a].name << " ["
                   << c.interval_a.lock_pos << ',' << c.interval_a.unlock_pos << ") and "
                   << doc.processes[c.process_b].name << " [" << c.interval_b.lock_pos << ','
                   << c.interval_b.unlock_pos << ')';
            }
            os << '\n';
        }
    };
    section("forbidden", doc.forbidden);
    section("unsafe", doc.unsafe);
    section("unreachable", doc.unreachable);

    os << "deadlocks: " << doc.deadlocks.size() << '\n';
    for (const auto& d : doc.deadlocks) {
        os << "  deadlock at " << tuple_text(d.point) << " (state " << tuple_text(d.grid_state) << "), "
           << (d.reachable ? "reachable" : "unreachable") << '\n';
        for (const auto& line : d.narrative)
            os << "    " << line << '\n';
    }

    if (doc.oracle) {
        os << "oracle: " << doc.oracle->agreement() << " states agree"
           << (doc.oracle->pass ? "" : ", MISMATCH") << '\n';
        for (const auto& m : doc.oracle->mismatches)
            os << "  " << m.detail << '\n';
    }

    const auto reachable = doc.reachable_deadlocks();
    os << "verdict: ";
    if (doc.deadlocks.empty())
        os << "deadlock-free\n";
    else if (reachable > 0)
        os << "DEADLOCK (" << reachable << " reachable of " << doc.deadlocks.size() << ")\n";
    else
        os << "only unreachable deadlocks (" << doc.deadlocks.size() << ")\n";
    return os.str();
}

namespace {

constexpr int kCell = 60;
constexpr int kMargin = 70;

// Escapes the characters that matter inside SVG text content.
std::string xml_escape(std::string_view s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const ProgressGraph& g, const RegionReport& r)
{
    if (g.n() != 2)
        throw DimensionError("SVG rendering needs exactly 2 processes, scenario has " + std::to_string(g.n()) +
                             "; use --report json or --oracle check instead");

    const int lx = g.extents()[0];
    const int ly = g.extents()[1];
    const int width = 2 * kMargin + lx * kCell;
    const int height = 2 * kMargin + ly * kCell;
    const auto px = [&](int x) { return kMargin + x * kCell; };
    const auto py = [&](int y) { return kMargin + (ly - y) * kCell; };  // y axis points up

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
       << "  <title>progress graph: " << xml_escape(g.scenario().scenario().name) << "</title>\n"
       << "  <defs>\n"
       << "    <pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"8\" height=\"8\">\n"
       << "      <rect width=\"8\" height=\"8\" fill=\"#d0d0d0\"/>\n"
       << "      <path d=\"M0,8 L8,0\" stroke=\"#808080\" stroke-width=\"1\"/>\n"
       << "    </pattern>\n"
       << "  </defs>\n"
       << "  <rect x=\"" << px(0) << "\" y=\"" << py(ly) << "\" width=\"" << lx * kCell << "\" height=\""
       << ly * kCell << "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";

    const auto box = [&](const HyperRect& rect, const char* cls, const char* fill) {
        os << "  <rect class=\"" << cls << "\" x=\"" << px(rect.lo[0]) << "\" y=\"" << py(rect.hi[1])
           << "\" width=\"" << (rect.hi[0] - rect.lo[0]) * kCell << "\" height=\""
           << (rect.hi[1] - rect.lo[1]) * kCell << "\" fill=\"" << fill << "\"/>\n";
    };
    for (const auto& rect : r.unreachable)
        box(rect, "unreachable", "url(#hatch)");
    for (const auto& rect : r.unsafe)
        box(rect, "unsafe", "#f6b8b8");
    for (const auto& rect : g.forbidden())
        box(rect, "forbidden", "#303030");

    const auto axes = g.axes();
    for (std::size_t j = 0; j < axes[0].labels.size(); ++j) {
        const int x = px(static_cast<int>(j) + 1);
        os << "  <line x1=\"" << x << "\" y1=\"" << py(0) << "\" x2=\"" << x << "\" y2=\"" << py(0) + 6
           << "\" stroke=\"black\"/>\n"
           << "  <text x=\"" << x << "\" y=\"" << py(0) + 22 << "\" text-anchor=\"middle\" font-size=\"14\">"
           << xml_escape(axes[0].labels[j]) << "</text>\n";
    }
    for (std::size_t j = 0; j < axes[1].labels.size(); ++j) {
        const int y = py(static_cast<int>(j) + 1);
        os << "  <line x1=\"" << px(0) - 6 << "\" y1=\"" << y << "\" x2=\"" << px(0) << "\" y2=\"" << y
           << "\" stroke=\"black\"/>\n"
           << "  <text x=\"" << px(0) - 10 << "\" y=\"" << y + 5 << "\" text-anchor=\"end\" font-size=\"14\">"
           << xml_escape(axes[1].labels[j]) << "</text>\n";
    }
    os << "  <text x=\"" << px(lx) / 2 + kMargin / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(axes[0].process) << "</text>\n"
       << "  <text x=\"18\" y=\"" << py(ly) + ly * kCell / 2 << "\" text-anchor=\"middle\" font-size=\"16\">"
       << xml_escape(axes[1].process) << "</text>\n"
       << "  <text x=\"" << px(0) - 8 << "\" y=\"" << py(0) + 40 << "\" text-anchor=\"end\" font-size=\"12\">"
       << "(0,0)</text>\n"
       << "  <text x=\"" << px(lx) + 8 << "\" y=\"" << py(ly) - 8 << "\" font-size=\"12\">(1,1)</text>\n";

    for (const auto& d : r.deadlocks) {
        os << "  <circle class=\"deadlock\" cx=\"" << px(d.point[0]) << "\" cy=\"" << py(d.point[1])
           << "\" r=\"6\" fill=\"" << (d.reachable ? "#d00000" : "#808080")
           << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace pgraph
