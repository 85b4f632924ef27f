#pragma once

// Cross-check of the geometric regions against the interleaving oracle.

#include "pgraph/detector.hpp"
#include "pgraph/oracle.hpp"

#include <string>
#include <vector>

namespace pgraph {

struct Mismatch {
    GridState state;
    std::string detail;
};

struct ComparisonReport {
    bool pass = true;
    std::size_t states_total = 0;
    std::size_t states_agreeing = 0;
    std::vector<Mismatch> mismatches;

    std::string agreement() const { return std::to_string(states_agreeing) + "/" + std::to_string(states_total); }
};

// Checks the deadlock bijection (grid_state = point - 1), per-state
// classification with Deadlock merged into Doomed, and deadlock
// reachability flags. Throws std::invalid_argument when the oracle was run
// on a different state space.
ComparisonReport compare_with_geometry(const OracleResult& o, const RegionReport& r, const ProgressGraph& g);

}  // namespace pgraph
