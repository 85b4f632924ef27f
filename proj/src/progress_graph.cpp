#include "pgraph/progress_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace pgraph {

std::string_view to_string(RegionKind k)
{
    switch (k) {
    case RegionKind::Forbidden: return "forbidden";
    case RegionKind::Unsafe: return "unsafe";
    case RegionKind::Unreachable: return "unreachable";
    }
    return "?";
}

bool HyperRect::covers_state(const IntVec& s) const
{
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (s[i] < lo[i] || s[i] >= hi[i])
            return false;
    return true;
}

bool HyperRect::contains_point(const IntVec& p) const
{
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (p[i] <= lo[i] || p[i] >= hi[i])
            return false;
    return true;
}

bool box_less(const HyperRect& a, const HyperRect& b) { return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi); }

bool same_box(const HyperRect& a, const HyperRect& b) { return a.lo == b.lo && a.hi == b.hi; }

ProgressGraph::ProgressGraph(ValidatedScenario v, std::vector<HyperRect> forbidden)
    : scenario_(std::move(v)), forbidden_(std::move(forbidden))
{
    for (const auto& trace : scenario_.scenario().traces)
        extents_.push_back(static_cast<int>(trace.size()) + 1);
}

IntVec ProgressGraph::final_state() const
{
    IntVec s = extents_;
    for (auto& x : s)
        --x;
    return s;
}

std::vector<AxisMap> ProgressGraph::axes() const
{
    const auto& s = scenario_.scenario();
    std::vector<AxisMap> out;
    for (std::size_t i = 0; i < s.processes.size(); ++i) {
        AxisMap axis{s.processes[i], {}};
        for (const auto& a : s.traces[i])
            axis.labels.push_back((a.kind == ActionKind::Lock ? "P" : "V") + a.resource);
        out.push_back(std::move(axis));
    }
    return out;
}

bool operator==(const ProgressGraph& a, const ProgressGraph& b)
{
    return structurally_equal(a.scenario_.scenario(), b.scenario_.scenario()) && a.extents_ == b.extents_ &&
           a.forbidden_ == b.forbidden_;
}

namespace {

std::vector<HyperRect> conflicts_of(const ValidatedScenario& v, std::size_t r)
{
    const std::size_t n = v.process_count();
    IntVec extents;
    for (const auto& t : v.scenario().traces)
        extents.push_back(static_cast<int>(t.size()) + 1);

    std::vector<HyperRect> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (const auto& a : v.intervals(i, r)) {
                for (const auto& b : v.intervals(j, r)) {
                    HyperRect rect;
                    rect.kind = RegionKind::Forbidden;
                    rect.lo.assign(n, 0);
                    rect.hi = extents;
                    rect.lo[i] = a.lock_pos;
                    rect.hi[i] = a.unlock_pos;
                    rect.lo[j] = b.lock_pos;
                    rect.hi[j] = b.unlock_pos;
                    rect.conflict = ConflictLabel{v.scenario().resources[r], i, a, j, b};
                    out.push_back(std::move(rect));
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<HyperRect> conflict_rects(const ValidatedScenario& v, std::string_view resource)
{
    const auto r = v.scenario().resource_index(resource);
    if (!r)
        throw UnknownIdentifier("unknown resource '" + std::string(resource) + "'");
    return conflicts_of(v, *r);
}

ProgressGraph build_graph(const ValidatedScenario& v)
{
    std::vector<HyperRect> forbidden;
    for (std::size_t r = 0; r < v.resource_count(); ++r) {
        auto rects = conflicts_of(v, r);
        forbidden.insert(forbidden.end(), std::make_move_iterator(rects.begin()),
                         std::make_move_iterator(rects.end()));
    }
    return ProgressGraph(v, std::move(forbidden));
}

HyperRect reflect_rect(const HyperRect& r, const IntVec& extents)
{
    HyperRect out = r;
    for (std::size_t i = 0; i < extents.size(); ++i) {
        out.lo[i] = extents[i] - r.hi[i];
        out.hi[i] = extents[i] - r.lo[i];
    }
    if (out.conflict) {
        const auto flip = [](HoldInterval h, int extent) { return HoldInterval{extent - h.unlock_pos, extent - h.lock_pos}; };
        out.conflict->interval_a = flip(r.conflict->interval_a, extents[r.conflict->process_a]);
        out.conflict->interval_b = flip(r.conflict->interval_b, extents[r.conflict->process_b]);
    }
    return out;
}

ProgressGraph reflect_graph(const ProgressGraph& g)
{
    std::vector<HyperRect> rects;
    rects.reserve(g.forbidden().size());
    for (const auto& r : g.forbidden())
        rects.push_back(reflect_rect(r, g.extents()));
    return ProgressGraph(reverse_scenario(g.scenario()), std::move(rects));
}

std::vector<double> normalize_point(const ProgressGraph& g, const IntVec& p)
{
    if (p.size() != g.n())
        throw std::out_of_range("point has wrong dimension");
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || p[i] > g.extents()[i])
            throw std::out_of_range("point lies outside the progress cube");
        out[i] = static_cast<double>(p[i]) / g.extents()[i];
    }
    return out;
}

}  // namespace pgraph
