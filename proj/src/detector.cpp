#include "pgraph/detector.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pgraph {

int Blocker::blocking_coordinate(std::size_t dir, const IntVec& extents) const
{
    return is_wall() ? extents[axis] : rect.lo[dir];
}

int Blocker::lower(std::size_t coord) const { return is_wall() ? 0 : rect.lo[coord]; }

std::string_view to_string(Region r)
{
    switch (r) {
    case Region::Forbidden: return "forbidden";
    case Region::Unreachable: return "unreachable";
    case Region::Doomed: return "doomed";
    case Region::Safe: return "safe";
    }
    return "?";
}

std::vector<Blocker> initial_blockers(const ProgressGraph& g)
{
    std::vector<Blocker> out;
    for (const auto& r : g.forbidden())
        out.push_back(Blocker::forbidden(r));
    for (std::size_t i = 0; i < g.n(); ++i)
        out.push_back(Blocker::wall(i));
    return out;
}

namespace {

// Advancing along `dir` from the cell below `c` enters b's box.
bool transverse_ok(const Blocker& b, std::size_t dir, std::size_t k, const IntVec& c, const DetectorOptions& opts)
{
    if (b.is_wall() || k == dir)
        return true;
    const bool above_lo = opts.weak_transverse_lower ? b.rect.lo[k] <= c[k] : b.rect.lo[k] < c[k];
    return above_lo && c[k] <= b.rect.hi[k];
}

// The cell just below c lies inside some forbidden box.
bool cell_forbidden(const ProgressGraph& g, const IntVec& c)
{
    for (const auto& r : g.forbidden()) {
        bool inside = true;
        for (std::size_t k = 0; k < c.size() && inside; ++k)
            inside = r.lo[k] < c[k] && c[k] <= r.hi[k];
        if (inside)
            return true;
    }
    return false;
}

bool usable(const Blocker& b, std::size_t dir, const std::vector<std::size_t>& chosen, std::size_t idx)
{
    if (b.is_wall())
        return b.axis == dir;
    return std::find(chosen.begin(), chosen.end(), idx) == chosen.end();
}

class Enumerator {
public:
    Enumerator(std::span<const Blocker> blockers, const ProgressGraph& g,
               const std::function<void(const Assignment&)>& visit, const DetectorOptions* prune)
        : blockers_(blockers), g_(g), visit_(visit), prune_(prune)
    {
        a_.blocker.reserve(g.n());
        a_.candidate.reserve(g.n());
    }

    void run() { step(0, true); }

private:
    void step(std::size_t dir, bool all_walls)
    {
        const std::size_t n = g_.n();
        if (dir == n) {
            if (all_walls)
                return;
            if (prune_ && (cell_forbidden(g_, a_.candidate) || a_.candidate == g_.final_point()))
                return;
            visit_(a_);
            return;
        }
        for (std::size_t idx = 0; idx < blockers_.size(); ++idx) {
            const Blocker& b = blockers_[idx];
            if (!usable(b, dir, a_.blocker, idx))
                continue;
            const int c = b.blocking_coordinate(dir, g_.extents());
            a_.blocker.push_back(idx);
            a_.candidate.push_back(c);
            if (!prune_ || consistent(dir))
                step(dir + 1, all_walls && b.is_wall());
            a_.blocker.pop_back();
            a_.candidate.pop_back();
        }
    }

    // Checks the constraints between the newest direction and earlier ones.
    bool consistent(std::size_t dir) const
    {
        const auto& c = a_.candidate;
        if (c[dir] < 1)
            return false;
        const Blocker& mine = blockers_[a_.blocker[dir]];
        for (std::size_t e = 0; e < dir; ++e) {
            if (!transverse_ok(blockers_[a_.blocker[e]], e, dir, c, *prune_))
                return false;
            if (!transverse_ok(mine, dir, e, c, *prune_))
                return false;
        }
        return true;
    }

    std::span<const Blocker> blockers_;
    const ProgressGraph& g_;
    const std::function<void(const Assignment&)>& visit_;
    const DetectorOptions* prune_;
    Assignment a_;
};

bool all_forbidden(const Assignment& a, std::span<const Blocker> blockers)
{
    return std::all_of(a.blocker.begin(), a.blocker.end(),
                       [&](std::size_t idx) { return blockers[idx].kind != Blocker::Kind::Unsafe; });
}

void sort_unique(std::vector<HyperRect>& boxes)
{
    std::sort(boxes.begin(), boxes.end(), box_less);
    boxes.erase(std::unique(boxes.begin(), boxes.end(), same_box), boxes.end());
}

bool box_within(const HyperRect& inner, const HyperRect& outer)
{
    for (std::size_t i = 0; i < inner.dims(); ++i)
        if (inner.lo[i] < outer.lo[i] || inner.hi[i] > outer.hi[i])
            return false;
    return true;
}

// Keeps only boxes not contained in another box of the (sorted, unique) list.
std::vector<HyperRect> drop_subsumed(const std::vector<HyperRect>& boxes)
{
    std::vector<HyperRect> out;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        bool inside = false;
        for (std::size_t j = 0; j < boxes.size() && !inside; ++j)
            inside = j != i && box_within(boxes[i], boxes[j]);
        if (!inside)
            out.push_back(boxes[i]);
    }
    return out;
}

}  // namespace

void for_each_candidate(std::span<const Blocker> blockers, const ProgressGraph& g,
                        const std::function<void(const Assignment&)>& visit)
{
    Enumerator(blockers, g, visit, nullptr).run();
}

std::vector<Assignment> enumerate_candidates(std::span<const Blocker> blockers, const ProgressGraph& g)
{
    std::vector<Assignment> out;
    for_each_candidate(blockers, g, [&](const Assignment& a) { out.push_back(a); });
    return out;
}

bool validate_candidate(const Assignment& a, std::span<const Blocker> blockers, const ProgressGraph& g,
                        const DetectorOptions& opts)
{
    const auto& c = a.candidate;
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] < 1)
            return false;
    for (std::size_t i = 0; i < a.blocker.size(); ++i)
        for (std::size_t k = 0; k < c.size(); ++k)
            if (!transverse_ok(blockers[a.blocker[i]], i, k, c, opts))
                return false;
    return !cell_forbidden(g, c) && c != g.final_point();
}

void for_each_valid_candidate(std::span<const Blocker> blockers, const ProgressGraph& g,
                              const std::function<void(const Assignment&)>& visit, const DetectorOptions& opts)
{
    Enumerator(blockers, g, visit, &opts).run();
}

HyperRect unsafe_box(const Assignment& a, std::span<const Blocker> blockers, const ProgressGraph& g)
{
    const std::size_t n = g.n();
    HyperRect box;
    box.kind = RegionKind::Unsafe;
    box.hi = a.candidate;
    box.lo.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                box.lo[i] = std::max(box.lo[i], blockers[a.blocker[j]].lower(i));
        if (box.lo[i] >= box.hi[i])
            throw std::logic_error("unsafe box is empty; assignment was not valid");
    }
    return box;
}

namespace {

bool box_nonempty(const Assignment& a, std::span<const Blocker> blockers, const ProgressGraph& g)
{
    try {
        unsafe_box(a, blockers, g);
        return true;
    } catch (const std::logic_error&) {
        return false;
    }
}

}  // namespace

UnsafeResult compute_unsafe_fixpoint(const ProgressGraph& g, const DetectorOptions& opts)
{
    UnsafeResult out;
    std::map<IntVec, DeadlockPoint> deadlocks;
    std::vector<HyperRect> known;  // sorted

    for (;;) {
        ++out.rounds;
        std::vector<Blocker> blockers;
        for (const auto& r : g.forbidden())
            blockers.push_back(Blocker::forbidden(r));
        for (const auto& box : known)
            blockers.push_back(Blocker::unsafe(box));
        for (std::size_t i = 0; i < g.n(); ++i)
            blockers.push_back(Blocker::wall(i));

        std::vector<HyperRect> fresh;
        for_each_valid_candidate(
            blockers, g,
            [&](const Assignment& a) {
                if (all_forbidden(a, blockers) && !deadlocks.contains(a.candidate)) {
                    DeadlockPoint d;
                    d.point = a.candidate;
                    for (const auto idx : a.blocker)
                        d.blocking.push_back(blockers[idx]);
                    d.grid_state = a.candidate;
                    for (auto& x : d.grid_state)
                        --x;
                    deadlocks.emplace(a.candidate, std::move(d));
                }
                // The weakened check admits candidates whose box is empty.
                if (opts.weak_transverse_lower && !box_nonempty(a, blockers, g))
                    return;
                HyperRect box = unsafe_box(a, blockers, g);
                if (!std::binary_search(known.begin(), known.end(), box, box_less))
                    fresh.push_back(std::move(box));
            },
            opts);

        sort_unique(fresh);
        if (fresh.empty())
            break;
        known.insert(known.end(), fresh.begin(), fresh.end());
        sort_unique(known);
    }

    for (auto& [point, d] : deadlocks)
        out.deadlocks.push_back(std::move(d));
    out.unsafe = drop_subsumed(known);
    return out;
}

std::vector<HyperRect> compute_unreachable(const ProgressGraph& g, const DetectorOptions& opts)
{
    const auto reversed = compute_unsafe_fixpoint(reflect_graph(g), opts);
    std::vector<HyperRect> out;
    for (const auto& box : reversed.unsafe) {
        HyperRect r = reflect_rect(box, g.extents());
        r.kind = RegionKind::Unreachable;
        out.push_back(std::move(r));
    }
    sort_unique(out);
    return drop_subsumed(out);
}

Region classify_midpoint(const ProgressGraph& g, const RegionReport& regions, const GridState& s)
{
    if (s.size() != g.n())
        throw std::out_of_range("grid state has wrong dimension");
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < 0 || s[i] >= g.extents()[i])
            throw std::out_of_range("grid state outside the progress graph");

    const auto any_covers = [&](const std::vector<HyperRect>& boxes) {
        return std::any_of(boxes.begin(), boxes.end(), [&](const HyperRect& r) { return r.covers_state(s); });
    };
    if (any_covers(g.forbidden()))
        return Region::Forbidden;
    if (any_covers(regions.unreachable))
        return Region::Unreachable;
    if (any_covers(regions.unsafe))
        return Region::Doomed;
    return Region::Safe;
}

RegionReport analyze(const ProgressGraph& g, const AnalyzeOptions& opts)
{
    auto fix = compute_unsafe_fixpoint(g, opts.detector);
    RegionReport report;
    report.deadlocks = std::move(fix.deadlocks);
    report.unsafe = std::move(fix.unsafe);
    report.rounds = fix.rounds;
    report.unreachable = compute_unreachable(g, opts.detector);

    for (auto& d : report.deadlocks) {
        if (opts.exact_reachability) {
            d.reachable = opts.exact_reachability->reachable(d.grid_state);
        } else {
            d.reachable = std::none_of(report.unreachable.begin(), report.unreachable.end(),
                                       [&](const HyperRect& r) { return r.covers_state(d.grid_state); });
        }
    }
    return report;
}

}  // namespace pgraph
