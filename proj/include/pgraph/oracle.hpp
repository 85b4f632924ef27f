#pragma once

// Exhaustive interleaving exploration of the event grid. Ground truth for
// the geometric detector on small instances.

#include "pgraph/progress_graph.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgraph {

using GridState = IntVec;

// Precedence order: Forbidden > Unreachable > Deadlock > Doomed > Safe.
enum class StateClass { Forbidden, Unreachable, Deadlock, Doomed, Safe };

std::string_view to_string(StateClass c);

inline constexpr std::size_t default_state_budget = 1'000'000;

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::size_t required, std::size_t allowed);
    std::size_t required() const noexcept { return required_; }
    std::size_t allowed() const noexcept { return allowed_; }

private:
    std::size_t required_;
    std::size_t allowed_;
};

// Mixed-radix enumeration of prod [0, m_i].
class StateSpace {
public:
    explicit StateSpace(IntVec maxima);

    std::size_t size() const noexcept { return size_; }
    std::size_t dims() const noexcept { return maxima_.size(); }
    const IntVec& maxima() const noexcept { return maxima_; }
    std::size_t index(const GridState& s) const;
    GridState state(std::size_t index) const;
    bool contains(const GridState& s) const;

private:
    IntVec maxima_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 1;
};

class OracleResult {
public:
    OracleResult(StateSpace space, std::vector<std::uint8_t> flags);

    const StateSpace& space() const noexcept { return space_; }

    bool legal(const GridState& s) const { return flag(s, kLegal); }
    bool reachable(const GridState& s) const { return flag(s, kReachable); }
    bool deadlock(const GridState& s) const { return flag(s, kDeadlock); }
    bool doomed(const GridState& s) const { return flag(s, kDoomed); }
    StateClass classify(const GridState& s) const;

    // Sorted state sets.
    std::vector<GridState> legal_states() const { return collect(kLegal); }
    std::vector<GridState> reachable_states() const { return collect(kReachable); }
    std::vector<GridState> deadlock_states() const { return collect(kDeadlock); }
    std::vector<GridState> doomed_states() const { return collect(kDoomed); }
    std::vector<GridState> unreachable_states() const;

    static constexpr std::uint8_t kLegal = 1;
    static constexpr std::uint8_t kReachable = 2;
    static constexpr std::uint8_t kDeadlock = 4;
    static constexpr std::uint8_t kDoomed = 8;

private:
    bool flag(const GridState& s, std::uint8_t f) const { return (flags_[space_.index(s)] & f) != 0; }
    std::vector<GridState> collect(std::uint8_t f) const;

    StateSpace space_;
    std::vector<std::uint8_t> flags_;
};

// No resource held by two processes (l <= s[i] < u semantics).
bool state_legal(const ValidatedScenario& v, const GridState& s);

// Legal one-step advances, ordered by process index. Throws
// std::invalid_argument for an out-of-range or illegal state.
std::vector<GridState> state_successors(const ValidatedScenario& v, const GridState& s);

OracleResult explore(const ValidatedScenario& v, std::size_t budget = default_state_budget);

}  // namespace pgraph
