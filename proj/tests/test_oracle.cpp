#include "support.hpp"

#include "pgraph/oracle.hpp"

#include <doctest.h>

#include <map>

using namespace pgraph;

namespace {

using States = std::vector<GridState>;

// Recursive exploration over trace replay, independent of hold intervals.
struct NaiveOracle {
    const Scenario& sc;
    std::map<GridState, bool> doomed_memo;

    std::vector<GridState> successors(const GridState& s) const
    {
        std::vector<GridState> out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == static_cast<int>(sc.traces[i].size()))
                continue;
            GridState t = s;
            ++t[i];
            if (!test::replay_conflict(sc, t))
                out.push_back(t);
        }
        return out;
    }

    bool is_final(const GridState& s) const
    {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] != static_cast<int>(sc.traces[i].size()))
                return false;
        return true;
    }

    bool doomed(const GridState& s)
    {
        if (auto it = doomed_memo.find(s); it != doomed_memo.end())
            return it->second;
        const auto next = successors(s);
        bool d = next.empty() ? !is_final(s) : true;
        for (const auto& t : next)
            d = doomed(t) && d;
        return doomed_memo[s] = d;
    }

    std::set<GridState> reachable() const
    {
        std::set<GridState> seen;
        std::vector<GridState> stack{GridState(sc.traces.size(), 0)};
        while (!stack.empty()) {
            auto s = stack.back();
            stack.pop_back();
            if (!seen.insert(s).second)
                continue;
            for (auto& t : successors(s))
                stack.push_back(std::move(t));
        }
        return seen;
    }
};

}  // namespace

TEST_CASE("state successors")
{
    const auto v = test::load_fixture("swiss.msc");
    CHECK(state_successors(v, {1, 1}).empty());
    CHECK(state_successors(v, {0, 0}) == States{{1, 0}, {0, 1}});
    CHECK(state_successors(v, {4, 0}) == States{{4, 1}});
    CHECK_THROWS_AS(state_successors(v, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(state_successors(v, {5, 0}), std::invalid_argument);
    CHECK_THROWS_AS(state_successors(v, {0}), std::invalid_argument);
}

TEST_CASE("explore swiss flag")
{
    const auto o = explore(test::load_fixture("swiss.msc"));
    CHECK(o.space().size() == 25);
    CHECK(o.legal_states().size() == 20);
    CHECK(o.deadlock_states() == States{{1, 1}});
    CHECK(o.doomed_states() == States{{1, 1}});
    CHECK(o.unreachable_states() == States{{3, 3}});
    CHECK(o.classify({1, 1}) == StateClass::Deadlock);
    CHECK(o.classify({3, 3}) == StateClass::Unreachable);
    CHECK(o.classify({2, 2}) == StateClass::Forbidden);
    CHECK(o.classify({0, 0}) == StateClass::Safe);
    CHECK(o.reachable({1, 1}));
}

TEST_CASE("explore three philosophers")
{
    const auto o = explore(test::load_fixture("philosophers3.msc"));
    CHECK(o.space().size() == 125);
    CHECK(o.legal_states().size() == 88);
    CHECK(o.deadlock_states() == States{{1, 1, 1}});
    CHECK(o.doomed_states() == States{{1, 1, 1}});
    CHECK(o.unreachable_states() == States{{3, 3, 3}});
}

TEST_CASE("explore swiss flag with an idle third process")
{
    const auto o = explore(test::load_fixture("swiss_p3.msc"));
    CHECK(o.space().size() == 75);
    CHECK(o.legal_states().size() == 60);
    CHECK(o.deadlock_states() == States{{1, 1, 2}});
    CHECK(o.doomed_states() == States{{1, 1, 0}, {1, 1, 1}, {1, 1, 2}});
    CHECK(o.unreachable_states() == States{{3, 3, 0}, {3, 3, 1}, {3, 3, 2}});
}

TEST_CASE("explore single process")
{
    const auto o = explore(load_scenario("scenario s\nprocess P\nresource r\nP: lock r; unlock r\n"));
    CHECK(o.space().size() == 3);
    CHECK(o.deadlock_states().empty());
    for (int k = 0; k <= 2; ++k)
        CHECK(o.classify({k}) == StateClass::Safe);
}

TEST_CASE("explore refuses oversized state spaces")
{
    const auto v = test::load_fixture("philosophers3.msc");
    try {
        explore(v, 100);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.required() == 125);
        CHECK(e.allowed() == 100);
    }
    CHECK_NOTHROW(explore(v, 125));
}

TEST_CASE("property: explore agrees with a naive recursive exploration")
{
    std::mt19937 rng(31);
    for (int i = 0; i < 200; ++i) {
        const auto v = test::random_validated(rng);
        const auto o = explore(v);
        NaiveOracle naive{v.scenario(), {}};
        const auto reach = naive.reachable();
        for (const auto& s : test::all_states(v.scenario())) {
            const bool legal = !test::replay_conflict(v.scenario(), s);
            REQUIRE(o.legal(s) == legal);
            if (!legal)
                continue;
            REQUIRE(o.reachable(s) == (reach.count(s) == 1));
            REQUIRE(o.doomed(s) == naive.doomed(s));
            REQUIRE(o.deadlock(s) == (naive.successors(s).empty() && !naive.is_final(s)));
        }
    }
}

TEST_CASE("property: oracle invariants")
{
    std::mt19937 rng(32);
    for (int i = 0; i < 200; ++i) {
        const auto v = test::random_validated(rng);
        const auto o = explore(v);
        const auto& space = o.space();
        REQUIRE(o.reachable(GridState(v.process_count(), 0)));
        REQUIRE_FALSE(o.deadlock(space.maxima()));
        for (std::size_t k = 0; k < space.size(); ++k) {
            const auto s = space.state(k);
            if (o.deadlock(s))
                REQUIRE(o.doomed(s));
            if (o.doomed(s) || o.reachable(s))
                REQUIRE(o.legal(s));
            if (o.doomed(s) && !o.deadlock(s))
                for (const auto& t : state_successors(v, s))
                    REQUIRE(o.doomed(t));
        }
    }
}

TEST_CASE("property: globally ordered acquisition reaches the final state")
{
    std::mt19937 rng(33);
    test::Envelope env;
    env.global_order = true;
    for (int i = 0; i < 200; ++i) {
        const auto v = test::random_validated(rng, env);
        const auto o = explore(v);
        REQUIRE(o.deadlock_states().empty());
        REQUIRE(o.reachable(o.space().maxima()));
    }
}
