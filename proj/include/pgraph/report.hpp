#pragma once

// Text, JSON and SVG renderings of an analysis.

#include "pgraph/compare.hpp"
#include "pgraph/detector.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgraph {

inline constexpr const char* tool_version = "0.1.0";

// One line per process describing what it has done, what it holds and what
// it waits for at the deadlock.
std::vector<std::string> explain_deadlock(const DeadlockPoint& d, const ValidatedScenario& v);

struct BlockingEntry {
    std::string process;
    std::string kind;  // "forbidden" or "wall"
    std::optional<std::string> resource;
    std::optional<std::string> holder;
};

struct DeadlockEntry {
    IntVec point;
    std::vector<double> normalized;
    IntVec grid_state;
    bool reachable = true;
    std::vector<BlockingEntry> blocking;
    std::vector<std::string> narrative;
};

struct ProcessEntry {
    std::string name;
    std::vector<std::string> events;  // "lock a", ...
    std::string semantics;
};

struct ReportDocument {
    std::string scenario;
    std::vector<std::string> resources;
    std::vector<ProcessEntry> processes;
    IntVec extents;
    std::vector<HyperRect> forbidden;
    std::vector<HyperRect> unsafe;
    std::vector<HyperRect> unreachable;
    std::vector<DeadlockEntry> deadlocks;
    std::optional<ComparisonReport> oracle;
    std::string version = tool_version;

    std::size_t reachable_deadlocks() const;
};

ReportDocument make_report(const ProgressGraph& g, const RegionReport& r,
                           std::optional<ComparisonReport> oracle = std::nullopt);

// Canonical JSON: fixed key order, two-space indent, trailing newline.
std::string emit_json(const ReportDocument& doc);

std::string emit_text(const ReportDocument& doc, bool with_semantics);

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two-process progress graph as SVG 1.1. Throws DimensionError for n != 2.
std::string render_svg(const ProgressGraph& g, const RegionReport& r);

}  // namespace pgraph
