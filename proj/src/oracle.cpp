#include "pgraph/oracle.hpp"

#include <deque>
#include <limits>

namespace pgraph {

std::string_view to_string(StateClass c)
{
    switch (c) {
    case StateClass::Forbidden: return "forbidden";
    case StateClass::Unreachable: return "unreachable";
    case StateClass::Deadlock: return "deadlock";
    case StateClass::Doomed: return "doomed";
    case StateClass::Safe: return "safe";
    }
    return "?";
}

BudgetExceeded::BudgetExceeded(std::size_t required, std::size_t allowed)
    : std::runtime_error("state budget exceeded: " + std::to_string(required) + " grid states required, " +
                         std::to_string(allowed) + " allowed"),
      required_(required), allowed_(allowed)
{
}

StateSpace::StateSpace(IntVec maxima) : maxima_(std::move(maxima)), stride_(maxima_.size())
{
    for (std::size_t i = maxima_.size(); i-- > 0;) {
        stride_[i] = size_;
        const auto radix = static_cast<std::size_t>(maxima_[i]) + 1;
        if (size_ > std::numeric_limits<std::size_t>::max() / radix)
            size_ = std::numeric_limits<std::size_t>::max();
        else
            size_ *= radix;
    }
}

std::size_t StateSpace::index(const GridState& s) const
{
    if (!contains(s))
        throw std::out_of_range("grid state outside the state space");
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        k += static_cast<std::size_t>(s[i]) * stride_[i];
    return k;
}

GridState StateSpace::state(std::size_t index) const
{
    GridState s(maxima_.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = static_cast<int>(index / stride_[i]);
        index %= stride_[i];
    }
    return s;
}

bool StateSpace::contains(const GridState& s) const
{
    if (s.size() != maxima_.size())
        return false;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < 0 || s[i] > maxima_[i])
            return false;
    return true;
}

OracleResult::OracleResult(StateSpace space, std::vector<std::uint8_t> flags)
    : space_(std::move(space)), flags_(std::move(flags))
{
}

StateClass OracleResult::classify(const GridState& s) const
{
    const auto f = flags_[space_.index(s)];
    if (!(f & kLegal))
        return StateClass::Forbidden;
    if (!(f & kReachable))
        return StateClass::Unreachable;
    if (f & kDeadlock)
        return StateClass::Deadlock;
    if (f & kDoomed)
        return StateClass::Doomed;
    return StateClass::Safe;
}

std::vector<GridState> OracleResult::collect(std::uint8_t f) const
{
    std::vector<GridState> out;
    for (std::size_t k = 0; k < flags_.size(); ++k)
        if (flags_[k] & f)
            out.push_back(space_.state(k));
    return out;
}

std::vector<GridState> OracleResult::unreachable_states() const
{
    std::vector<GridState> out;
    for (std::size_t k = 0; k < flags_.size(); ++k)
        if ((flags_[k] & kLegal) && !(flags_[k] & kReachable))
            out.push_back(space_.state(k));
    return out;
}

namespace {

IntVec maxima_of(const ValidatedScenario& v)
{
    IntVec m;
    for (const auto& t : v.scenario().traces)
        m.push_back(static_cast<int>(t.size()));
    return m;
}

std::vector<GridState> successors_unchecked(const ValidatedScenario& v, const GridState& s, const IntVec& maxima)
{
    std::vector<GridState> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= maxima[i])
            continue;
        GridState t = s;
        ++t[i];
        if (state_legal(v, t))
            out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

bool state_legal(const ValidatedScenario& v, const GridState& s)
{
    for (std::size_t r = 0; r < v.resource_count(); ++r) {
        int holders = 0;
        for (std::size_t p = 0; p < v.process_count(); ++p)
            if (v.holds(p, r, s[p]) && ++holders > 1)
                return false;
    }
    return true;
}

std::vector<GridState> state_successors(const ValidatedScenario& v, const GridState& s)
{
    const IntVec maxima = maxima_of(v);
    if (!StateSpace(maxima).contains(s))
        throw std::invalid_argument("grid state out of range");
    if (!state_legal(v, s))
        throw std::invalid_argument("grid state is not legal");
    return successors_unchecked(v, s, maxima);
}

OracleResult explore(const ValidatedScenario& v, std::size_t budget)
{
    const IntVec maxima = maxima_of(v);
    StateSpace space(maxima);
    if (space.size() > budget)
        throw BudgetExceeded(space.size(), budget);

    using OR = OracleResult;
    std::vector<std::uint8_t> flags(space.size(), 0);
    std::vector<std::vector<std::size_t>> succ(space.size());
    const std::size_t final_index = space.index(maxima);

    for (std::size_t k = 0; k < space.size(); ++k)
        if (state_legal(v, space.state(k)))
            flags[k] |= OR::kLegal;
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (!(flags[k] & OR::kLegal))
            continue;
        for (const auto& t : successors_unchecked(v, space.state(k), maxima))
            succ[k].push_back(space.index(t));
        if (succ[k].empty() && k != final_index)
            flags[k] |= OR::kDeadlock;
    }

    // Forward BFS from the origin (index 0, always legal).
    std::deque<std::size_t> queue{0};
    flags[0] |= OR::kReachable;
    while (!queue.empty()) {
        const auto k = queue.front();
        queue.pop_front();
        for (const auto t : succ[k]) {
            if (!(flags[t] & OR::kReachable)) {
                flags[t] |= OR::kReachable;
                queue.push_back(t);
            }
        }
    }

    // Successors have strictly larger indices, so one reverse sweep settles
    // the doomed fixpoint.
    for (std::size_t k = space.size(); k-- > 0;) {
        if (!(flags[k] & OR::kLegal))
            continue;
        bool doomed = (flags[k] & OR::kDeadlock) != 0;
        if (!doomed && !succ[k].empty()) {
            doomed = true;
            for (const auto t : succ[k])
                doomed = doomed && (flags[t] & OR::kDoomed);
        }
        if (doomed)
            flags[k] |= OR::kDoomed;
    }
    return OracleResult(std::move(space), std::move(flags));
}

}  // namespace pgraph
