#include "pgraph/compare.hpp"

#include <algorithm>
#include <sstream>

namespace pgraph {

namespace {

Region merged(StateClass c)
{
    switch (c) {
    case StateClass::Forbidden: return Region::Forbidden;
    case StateClass::Unreachable: return Region::Unreachable;
    case StateClass::Deadlock:
    case StateClass::Doomed: return Region::Doomed;
    case StateClass::Safe: return Region::Safe;
    }
    return Region::Safe;
}

std::string fmt(const GridState& s)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < s.size(); ++i)
        os << (i ? "," : "") << s[i];
    os << ')';
    return os.str();
}

}  // namespace

ComparisonReport compare_with_geometry(const OracleResult& o, const RegionReport& r, const ProgressGraph& g)
{
    if (o.space().maxima() != g.final_state())
        throw std::invalid_argument("oracle result and progress graph describe different scenarios");

    ComparisonReport out;
    const auto add = [&](GridState s, std::string detail) {
        out.mismatches.push_back({std::move(s), std::move(detail)});
    };

    std::vector<GridState> reported;
    for (const auto& d : r.deadlocks)
        reported.push_back(d.grid_state);
    std::sort(reported.begin(), reported.end());
    const auto expected = o.deadlock_states();
    for (const auto& s : reported)
        if (!std::binary_search(expected.begin(), expected.end(), s))
            add(s, "deadlock reported at " + fmt(s) + " but the oracle finds none");
    for (const auto& s : expected)
        if (!std::binary_search(reported.begin(), reported.end(), s))
            add(s, "oracle deadlock at " + fmt(s) + " not reported");

    const auto& space = o.space();
    out.states_total = space.size();
    for (std::size_t k = 0; k < space.size(); ++k) {
        const auto s = space.state(k);
        const Region geo = classify_midpoint(g, r, s);
        const Region truth = merged(o.classify(s));
        if (geo == truth) {
            ++out.states_agreeing;
        } else {
            add(s, "state " + fmt(s) + ": geometry says " + std::string(to_string(geo)) + ", oracle says " +
                       std::string(to_string(truth)));
        }
    }

    for (const auto& d : r.deadlocks) {
        if (!space.contains(d.grid_state))
            continue;
        const bool truth = o.reachable(d.grid_state);
        if (d.reachable != truth)
            add(d.grid_state, "deadlock " + fmt(d.grid_state) + " flagged " +
                                  (d.reachable ? "reachable" : "unreachable") + ", oracle disagrees");
    }

    out.pass = out.mismatches.empty();
    return out;
}

}  // namespace pgraph
