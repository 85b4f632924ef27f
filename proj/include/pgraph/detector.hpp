#pragma once

// Geometric deadlock detection on a progress graph.
//
// A candidate point is the upper corner of a grid cell; it is a deadlock
// corner when every direction of progress from the cell runs into the lower
// face of a distinct blocker (a forbidden box, or the wall x_i = L[i] of a
// finished process). Each valid candidate spans an unsafe box below it.
// Unsafe boxes are fed back as blockers until no new box appears; the
// unreachable region is the unsafe region of the time-reversed graph.

#include "pgraph/oracle.hpp"
#include "pgraph/progress_graph.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pgraph {

struct Blocker {
    enum class Kind { Forbidden, Unsafe, Wall };

    Kind kind = Kind::Forbidden;
    HyperRect rect;         // empty for walls
    std::size_t axis = 0;   // walls only

    static Blocker forbidden(HyperRect r) { return {Kind::Forbidden, std::move(r), 0}; }
    static Blocker unsafe(HyperRect r) { return {Kind::Unsafe, std::move(r), 0}; }
    static Blocker wall(std::size_t axis) { return {Kind::Wall, {}, axis}; }

    bool is_wall() const noexcept { return kind == Kind::Wall; }
    // Coordinate at which this blocker stops progress along `dir`.
    int blocking_coordinate(std::size_t dir, const IntVec& extents) const;
    // Lower bound it imposes on coordinate `coord` of the cells it traps.
    int lower(std::size_t coord) const;

    friend bool operator==(const Blocker&, const Blocker&) = default;
};

// One blocker per direction (indices into a blocker list) and the
// resulting candidate point.
struct Assignment {
    std::vector<std::size_t> blocker;
    IntVec candidate;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct DeadlockPoint {
    IntVec point;
    std::vector<Blocker> blocking;  // per direction
    IntVec grid_state;              // point - (1, ..., 1)
    bool reachable = true;
};

struct RegionReport {
    std::vector<DeadlockPoint> deadlocks;
    std::vector<HyperRect> unsafe;
    std::vector<HyperRect> unreachable;
    std::size_t rounds = 0;
};

// Knobs for mutation testing; defaults give the exact detector.
struct DetectorOptions {
    // Accept lo[k] == candidate[k] on transverse axes.
    bool weak_transverse_lower = false;
};

// Forbidden rects in graph order followed by the n walls.
std::vector<Blocker> initial_blockers(const ProgressGraph& g);

// Every assignment of pairwise distinct rect blockers (or the own-axis wall)
// to directions, direction 0 varying slowest, blockers in list order; the
// all-walls assignment is skipped.
void for_each_candidate(std::span<const Blocker> blockers, const ProgressGraph& g,
                        const std::function<void(const Assignment&)>& visit);
std::vector<Assignment> enumerate_candidates(std::span<const Blocker> blockers, const ProgressGraph& g);

bool validate_candidate(const Assignment& a, std::span<const Blocker> blockers, const ProgressGraph& g,
                        const DetectorOptions& opts = {});

// Same sequence as filtering enumerate_candidates through
// validate_candidate, with partial assignments pruned early.
void for_each_valid_candidate(std::span<const Blocker> blockers, const ProgressGraph& g,
                              const std::function<void(const Assignment&)>& visit,
                              const DetectorOptions& opts = {});

// Box of cells trapped below a valid candidate. Throws std::logic_error if
// the box is empty.
HyperRect unsafe_box(const Assignment& a, std::span<const Blocker> blockers, const ProgressGraph& g);

struct UnsafeResult {
    std::vector<DeadlockPoint> deadlocks;  // sorted by point
    std::vector<HyperRect> unsafe;         // sorted, deduplicated
    std::size_t rounds = 0;
};

UnsafeResult compute_unsafe_fixpoint(const ProgressGraph& g, const DetectorOptions& opts = {});

std::vector<HyperRect> compute_unreachable(const ProgressGraph& g, const DetectorOptions& opts = {});

enum class Region { Forbidden, Unreachable, Doomed, Safe };

std::string_view to_string(Region r);

// Classifies the cell of grid state s by its midpoint s + 1/2.
Region classify_midpoint(const ProgressGraph& g, const RegionReport& regions, const GridState& s);

struct AnalyzeOptions {
    // When set, deadlock reachability comes from the oracle instead of the
    // unreachable boxes.
    const OracleResult* exact_reachability = nullptr;
    DetectorOptions detector{};
};

RegionReport analyze(const ProgressGraph& g, const AnalyzeOptions& opts = {});

}  // namespace pgraph
