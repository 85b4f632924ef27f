#pragma once

// Shared test helpers: fixture loading, random scenario generation and a
// trace-replay reference for resource ownership that does not go through
// hold intervals.

#include "pgraph/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgraph::test {

inline std::string fixture_path(const std::string& name) { return std::string(PGRAPH_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name)
{
    std::ifstream f(fixture_path(name), std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline ValidatedScenario load_fixture(const std::string& name) { return load_scenario(read_fixture(name)); }

struct Envelope {
    int min_processes = 2;
    int max_processes = 3;
    int max_events = 8;
    int max_resources = 4;
    bool global_order = false;  // acquisitions follow r1 < r2 < ...
};

// Always well-formed: binary locks, everything released, at least one
// process with a nonempty trace.
inline Scenario random_scenario(std::mt19937& rng, const Envelope& env = {})
{
    const auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Scenario s;
    s.name = "random";
    const int np = uniform(env.min_processes, env.max_processes);
    const int nr = uniform(1, env.max_resources);
    for (int r = 1; r <= nr; ++r)
        s.resources.push_back("r" + std::to_string(r));
    for (int p = 1; p <= np; ++p) {
        s.processes.push_back("T" + std::to_string(p));
        std::vector<Action> trace;
        const int target = uniform(0, 9) == 0 ? 0 : 2 * uniform(1, env.max_events / 2);
        std::vector<int> held;
        while (static_cast<int>(trace.size()) < target) {
            const int remaining = target - static_cast<int>(trace.size());
            std::vector<int> lockable;
            if (static_cast<int>(held.size()) + 1 <= remaining - 1) {
                for (int r = 0; r < nr; ++r) {
                    if (std::find(held.begin(), held.end(), r) != held.end())
                        continue;
                    if (env.global_order && !held.empty() && r < *std::max_element(held.begin(), held.end()))
                        continue;
                    lockable.push_back(r);
                }
            }
            const bool lock = !lockable.empty() && (held.empty() || uniform(0, 9) < 6);
            if (lock) {
                const int r = lockable[static_cast<std::size_t>(uniform(0, static_cast<int>(lockable.size()) - 1))];
                held.push_back(r);
                trace.push_back({ActionKind::Lock, s.resources[static_cast<std::size_t>(r)], {}});
            } else {
                const auto k = static_cast<std::size_t>(uniform(0, static_cast<int>(held.size()) - 1));
                const int r = held[k];
                held.erase(held.begin() + static_cast<std::ptrdiff_t>(k));
                trace.push_back({ActionKind::Unlock, s.resources[static_cast<std::size_t>(r)], {}});
            }
        }
        s.traces.push_back(std::move(trace));
    }
    if (std::all_of(s.traces.begin(), s.traces.end(), [](const auto& t) { return t.empty(); })) {
        s.traces[0] = {{ActionKind::Lock, "r1", {}}, {ActionKind::Unlock, "r1", {}}};
    }
    return s;
}

inline ValidatedScenario random_validated(std::mt19937& rng, const Envelope& env = {})
{
    auto res = validate(random_scenario(rng, env));
    if (!res.ok())
        throw std::logic_error("generator produced an invalid scenario");
    return std::move(*res.value);
}

// Resources held by `process` after replaying its first `done` events.
inline std::set<std::string> replay_held(const Scenario& s, std::size_t process, int done)
{
    std::set<std::string> held;
    for (int j = 0; j < done; ++j) {
        const auto& a = s.traces[process][static_cast<std::size_t>(j)];
        if (a.kind == ActionKind::Lock)
            held.insert(a.resource);
        else
            held.erase(a.resource);
    }
    return held;
}

// Some resource is held by two processes at grid state s.
inline bool replay_conflict(const Scenario& sc, const std::vector<int>& s)
{
    std::set<std::string> seen;
    for (std::size_t p = 0; p < sc.processes.size(); ++p)
        for (const auto& r : replay_held(sc, p, s[p]))
            if (!seen.insert(r).second)
                return true;
    return false;
}

// Every grid state of the scenario, lexicographic.
inline std::vector<std::vector<int>> all_states(const Scenario& sc)
{
    std::vector<std::vector<int>> out{{}};
    for (const auto& t : sc.traces) {
        std::vector<std::vector<int>> next;
        for (const auto& prefix : out)
            for (int k = 0; k <= static_cast<int>(t.size()); ++k) {
                auto s = prefix;
                s.push_back(k);
                next.push_back(std::move(s));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace pgraph::test
