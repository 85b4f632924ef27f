#include "support.hpp"

#include "pgraph/scenario.hpp"

#include <doctest.h>

#include <map>

using namespace pgraph;

namespace {

const char* const kSwiss = R"(# swiss flag
scenario swiss
process T1, T2
resource a, b
T1: lock a; lock b; unlock b; unlock a
T2: lock b; lock a; unlock a; unlock b
)";

std::vector<std::string> codes(const ValidationResult& r)
{
    std::vector<std::string> out;
    for (const auto& d : r.diagnostics)
        out.push_back(d.code);
    return out;
}

Diagnostic parse_error(std::string_view text)
{
    try {
        parse_scenario(text);
    } catch (const ParseError& e) {
        return e.diagnostic();
    }
    FAIL("expected a parse error");
    return {};
}

}  // namespace

TEST_CASE("parse swiss flag")
{
    const Scenario s = parse_scenario(kSwiss);
    CHECK(s.name == "swiss");
    CHECK(s.processes == std::vector<std::string>{"T1", "T2"});
    CHECK(s.resources == std::vector<std::string>{"a", "b"});
    const auto& t1 = s.trace("T1");
    REQUIRE(t1.size() == 4);
    CHECK(t1[0].kind == ActionKind::Lock);
    CHECK(t1[0].resource == "a");
    CHECK(t1[1].kind == ActionKind::Lock);
    CHECK(t1[1].resource == "b");
    CHECK(t1[2].kind == ActionKind::Unlock);
    CHECK(t1[2].resource == "b");
    CHECK(t1[3].kind == ActionKind::Unlock);
    CHECK(t1[3].resource == "a");
    CHECK(t1[0].loc == SourceLoc{5, 5});
}

TEST_CASE("minimal scenario and P/V aliases")
{
    const Scenario s = parse_scenario("scenario s\nprocess P\nresource r\nP: lock r; unlock r\n");
    REQUIRE(s.processes.size() == 1);
    CHECK(s.traces[0].size() == 2);

    const Scenario pv = parse_scenario("scenario s\nprocess P\nresource r\nP: P r; V r");
    CHECK(structurally_equal(s, pv));
}

TEST_CASE("syntax errors carry positions")
{
    const auto d = parse_error("scenario s\nprocess P\nresource r\nP: grab r\n");
    CHECK(d.code == "SyntaxError");
    CHECK(d.loc == SourceLoc{4, 4});
    CHECK(d.message.find("grab") != std::string::npos);

    CHECK(parse_error("process P\n").loc.line == 1);
    CHECK(parse_error("scenario s\nprocess P\nresource r\nP lock r\n").loc == SourceLoc{4, 3});
    CHECK(parse_error("scenario s\nprocess P\nresource r\nP: lock r;\n").code == "SyntaxError");
    CHECK(parse_error("scenario s\nprocess P\nresource r\nP: lock r $\n").loc == SourceLoc{4, 11});
    CHECK(parse_error("scenario s\nprocess P\nresource r\n").message.find("body") != std::string::npos);
    CHECK(parse_error("scenario s\nprocess P\nresource r\nP: lock r; unlock r\nresource q\n").loc.line == 5);
}

TEST_CASE("identifier errors")
{
    CHECK(parse_error("scenario s\nprocess P, P\nresource r\nP: lock r; unlock r").code == "DuplicateIdentifier");
    CHECK(parse_error("scenario s\nprocess P\nresource P\nP: lock P; unlock P").code == "DuplicateIdentifier");
    const auto undeclared = parse_error("scenario s\nprocess P\nresource r\nP: lock q; unlock q");
    CHECK(undeclared.code == "UndeclaredIdentifier");
    CHECK(undeclared.loc == SourceLoc{4, 9});
    CHECK(parse_error("scenario s\nprocess P\nresource r\nQ: lock r; unlock r").code == "UndeclaredIdentifier");
    CHECK(parse_error("scenario s\nprocess P\nresource r\nr: lock r; unlock r").code == "UndeclaredIdentifier");
    CHECK(parse_error("scenario s\nprocess P\nresource r\nP: lock r\nP: unlock r").code == "DuplicateBody");
}

TEST_CASE("keywords are contextual")
{
    const Scenario s = parse_scenario("scenario lock\nprocess process, P\nresource V\n"
                                      "process: lock V; unlock V\nP: P V; V V\n");
    CHECK(s.processes == std::vector<std::string>{"process", "P"});
    CHECK(s.traces[1][1].kind == ActionKind::Unlock);
}

TEST_CASE("validate swiss hold intervals")
{
    const auto v = load_scenario(kSwiss);
    using H = std::vector<HoldInterval>;
    CHECK(hold_intervals(v, "T1", "a") == H{{1, 4}});
    CHECK(hold_intervals(v, "T1", "b") == H{{2, 3}});
    CHECK(hold_intervals(v, "T2", "b") == H{{1, 4}});
    CHECK(hold_intervals(v, "T2", "a") == H{{2, 3}});
    CHECK_THROWS_AS(hold_intervals(v, "T1", "nonexistent"), UnknownIdentifier);
    CHECK_THROWS_AS(hold_intervals(v, "T9", "a"), UnknownIdentifier);
}

TEST_CASE("repeated holds alternate")
{
    const auto v = load_scenario("scenario s\nprocess P\nresource r\nP: lock r; unlock r; lock r; unlock r\n");
    CHECK(hold_intervals(v, "P", "r") == std::vector<HoldInterval>{{1, 2}, {3, 4}});
    CHECK(v.holds(0, 0, 1));
    CHECK_FALSE(v.holds(0, 0, 2));
    CHECK(v.holds(0, 0, 3));
    CHECK_FALSE(v.holds(0, 0, 0));
}

TEST_CASE("validation errors")
{
    SUBCASE("unlock without lock")
    {
        const auto r = validate(parse_scenario("scenario s\nprocess P\nresource r\nP: unlock r\n"));
        CHECK_FALSE(r.ok());
        CHECK(codes(r) == std::vector<std::string>{"UnlockWithoutLock"});
        CHECK(r.diagnostics[0].loc == SourceLoc{4, 4});
        CHECK(r.diagnostics[0].message.find("event 1") != std::string::npos);
    }
    SUBCASE("relock while held")
    {
        const auto r = validate(parse_scenario("scenario s\nprocess P\nresource r\nP: lock r; lock r\n"));
        CHECK_FALSE(r.ok());
        CHECK(codes(r) == std::vector<std::string>{"RelockWhileHeld", "UnreleasedResource"});
        CHECK(r.diagnostics[0].loc == SourceLoc{4, 12});
        CHECK(r.diagnostics[0].message.find("event 2") != std::string::npos);
        CHECK(r.diagnostics[1].loc == SourceLoc{4, 4});
    }
    SUBCASE("unreleased")
    {
        const auto r = validate(parse_scenario("scenario s\nprocess P\nresource r, q\nP: lock r; lock q; unlock q\n"));
        CHECK(codes(r) == std::vector<std::string>{"UnreleasedResource"});
        CHECK_THROWS_AS(load_scenario("scenario s\nprocess P\nresource r\nP: lock r\n"), ValidationError);
    }
    SUBCASE("warnings do not block")
    {
        const auto r = validate(parse_scenario("scenario s\nprocess P\nresource r, unused\nP: lock r; unlock r\n"));
        CHECK(r.ok());
        REQUIRE(r.diagnostics.size() == 1);
        CHECK(r.diagnostics[0].severity == Severity::Warning);
    }
}

TEST_CASE("nested and overlapping holds of different resources are fine")
{
    const auto v = load_scenario("scenario s\nprocess P\nresource a, b\nP: lock a; lock b; unlock a; unlock b\n");
    CHECK(hold_intervals(v, "P", "a") == std::vector<HoldInterval>{{1, 3}});
    CHECK(hold_intervals(v, "P", "b") == std::vector<HoldInterval>{{2, 4}});
}

TEST_CASE("process semantics")
{
    const auto v = load_scenario(kSwiss);
    CHECK(process_semantics(v, "T1") == "out(T1,a,lock).out(T1,b,lock).out(T1,b,unlock).out(T1,a,unlock)");
    CHECK(process_semantics(v, "T2") == "out(T2,b,lock).out(T2,a,lock).out(T2,a,unlock).out(T2,b,unlock)");
    CHECK_THROWS_AS(process_semantics(v, "T3"), UnknownIdentifier);

    const auto idle = load_scenario("scenario s\nprocess P, Q\nresource r\nP: lock r; unlock r\n");
    CHECK(process_semantics(idle, "Q") == "ε");
}

TEST_CASE("reverse_scenario is an involution")
{
    const auto v = load_scenario(kSwiss);
    const auto rv = reverse_scenario(v);
    CHECK(process_semantics(rv, "T1") == "out(T1,a,lock).out(T1,b,lock).out(T1,b,unlock).out(T1,a,unlock)");
    CHECK(hold_intervals(rv, "T1", "b") == std::vector<HoldInterval>{{2, 3}});
    CHECK(structurally_equal(reverse_scenario(rv).scenario(), v.scenario()));
}

TEST_CASE("property: canonical source round trip")
{
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        const Scenario s = test::random_scenario(rng);
        const Scenario back = parse_scenario(render_source(s));
        REQUIRE(structurally_equal(s, back));
    }
}

TEST_CASE("property: intervals tile lock and unlock events")
{
    std::mt19937 rng(12);
    for (int i = 0; i < 300; ++i) {
        const auto v = test::random_validated(rng);
        const auto& s = v.scenario();
        for (std::size_t p = 0; p < s.processes.size(); ++p) {
            for (std::size_t r = 0; r < s.resources.size(); ++r) {
                int locks = 0;
                int unlocks = 0;
                for (const auto& a : s.traces[p]) {
                    if (a.resource != s.resources[r])
                        continue;
                    (a.kind == ActionKind::Lock ? locks : unlocks)++;
                }
                const auto& iv = v.intervals(p, r);
                REQUIRE(locks == unlocks);
                REQUIRE(static_cast<int>(iv.size()) == locks);
                for (std::size_t k = 0; k < iv.size(); ++k) {
                    REQUIRE(iv[k].lock_pos < iv[k].unlock_pos);
                    if (k)
                        REQUIRE(iv[k - 1].unlock_pos < iv[k].lock_pos);
                    const auto& l = s.traces[p][static_cast<std::size_t>(iv[k].lock_pos) - 1];
                    const auto& u = s.traces[p][static_cast<std::size_t>(iv[k].unlock_pos) - 1];
                    REQUIRE((l.kind == ActionKind::Lock && l.resource == s.resources[r]));
                    REQUIRE((u.kind == ActionKind::Unlock && u.resource == s.resources[r]));
                }
            }
        }
    }
}

TEST_CASE("property: validate is total and exclusive")
{
    // Random action soup, mostly ill-formed.
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> len(0, 6);
    for (int i = 0; i < 300; ++i) {
        Scenario s;
        s.name = "soup";
        s.processes = {"A", "B"};
        s.resources = {"x", "y"};
        for (int p = 0; p < 2; ++p) {
            std::vector<Action> t;
            for (int k = len(rng); k > 0; --k)
                t.push_back({coin(rng) ? ActionKind::Lock : ActionKind::Unlock, coin(rng) ? "x" : "y", {}});
            s.traces.push_back(std::move(t));
        }
        const auto r = validate(s);
        const bool has_error = std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                                           [](const Diagnostic& d) { return d.severity == Severity::Error; });
        REQUIRE(r.ok() != has_error);
    }
}

TEST_CASE("property: renaming commutes with validate")
{
    std::mt19937 rng(14);
    for (int i = 0; i < 200; ++i) {
        const Scenario s = test::random_scenario(rng);
        Scenario renamed = s;
        std::map<std::string, std::string> rename;
        for (auto& p : renamed.processes)
            p = rename[p] = "proc_" + p;
        for (auto& r : renamed.resources)
            r = rename[r] = "res_" + r;
        for (auto& t : renamed.traces)
            for (auto& a : t)
                a.resource = rename[a.resource];

        const auto v1 = validate(s);
        const auto v2 = validate(renamed);
        REQUIRE(v1.ok() == v2.ok());
        for (std::size_t p = 0; p < s.processes.size(); ++p)
            for (std::size_t r = 0; r < s.resources.size(); ++r)
                REQUIRE(v1.value->intervals(p, r) == v2.value->intervals(p, r));
    }
}
