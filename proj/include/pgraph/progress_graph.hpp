#pragma once

// n-cube geometry of a scenario: one axis per process, event j of a process
// at integer coordinate j, and one open forbidden box per pair of
// overlapping holds of the same resource.

#include "pgraph/scenario.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pgraph {

using IntVec = std::vector<int>;

enum class RegionKind { Forbidden, Unsafe, Unreachable };

std::string_view to_string(RegionKind k);

// Which two holds of which resource a forbidden box comes from.
struct ConflictLabel {
    std::string resource;
    std::size_t process_a = 0;
    HoldInterval interval_a;
    std::size_t process_b = 0;
    HoldInterval interval_b;

    friend bool operator==(const ConflictLabel&, const ConflictLabel&) = default;
};

// Open box prod ]lo[i], hi[i][ with integer corners.
//
// A grid state s (s[i] = events completed by process i) is identified with
// the unit cell prod ]s[i], s[i]+1[, so the box covers exactly the states
// with lo[i] <= s[i] < hi[i].
struct HyperRect {
    IntVec lo;
    IntVec hi;
    RegionKind kind = RegionKind::Forbidden;
    std::optional<ConflictLabel> conflict;

    std::size_t dims() const noexcept { return lo.size(); }
    bool covers_state(const IntVec& s) const;
    // Open-box membership of a lattice point.
    bool contains_point(const IntVec& p) const;

    friend bool operator==(const HyperRect&, const HyperRect&) = default;
};

// Geometric order (lo, then hi); labels do not participate.
bool box_less(const HyperRect& a, const HyperRect& b);
bool same_box(const HyperRect& a, const HyperRect& b);

// Event labels along one axis: label[j-1] sits at coordinate j.
struct AxisMap {
    std::string process;
    std::vector<std::string> labels;  // "Pa", "Vb", ...
};

class ProgressGraph {
public:
    ProgressGraph(ValidatedScenario v, std::vector<HyperRect> forbidden);

    const ValidatedScenario& scenario() const noexcept { return scenario_; }
    std::size_t n() const noexcept { return extents_.size(); }
    // extents[i] = events of process i + 1
    const IntVec& extents() const noexcept { return extents_; }
    const std::vector<HyperRect>& forbidden() const noexcept { return forbidden_; }
    IntVec initial() const { return IntVec(n(), 0); }
    const IntVec& final_point() const noexcept { return extents_; }
    // Grid state of the final cell, (m_1, ..., m_n).
    IntVec final_state() const;

    std::vector<AxisMap> axes() const;

    friend bool operator==(const ProgressGraph& a, const ProgressGraph& b);

private:
    ValidatedScenario scenario_;
    IntVec extents_;
    std::vector<HyperRect> forbidden_;
};

ProgressGraph build_graph(const ValidatedScenario& v);

// Throws UnknownIdentifier.
std::vector<HyperRect> conflict_rects(const ValidatedScenario& v, std::string_view resource);

// Time reversal: x -> L - x on every axis. Carries the reversed scenario.
ProgressGraph reflect_graph(const ProgressGraph& g);
HyperRect reflect_rect(const HyperRect& r, const IntVec& extents);

// Display only. Throws std::out_of_range outside the cube.
std::vector<double> normalize_point(const ProgressGraph& g, const IntVec& p);

}  // namespace pgraph
