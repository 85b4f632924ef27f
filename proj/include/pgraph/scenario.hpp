#pragma once

// Lock/unlock scenario model: parser for the textual scenario language,
// well-formedness checks and per-process traces.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pgraph {

enum class ActionKind { Lock, Unlock };

struct SourceLoc {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

struct Action {
    ActionKind kind = ActionKind::Lock;
    std::string resource;
    SourceLoc loc{};  // zero when built programmatically
};

// A parsed scenario. traces[i] is the event sequence of processes[i].
struct Scenario {
    std::string name;
    std::vector<std::string> processes;
    std::vector<std::string> resources;
    std::vector<std::vector<Action>> traces;

    std::optional<std::size_t> process_index(std::string_view p) const;
    std::optional<std::size_t> resource_index(std::string_view r) const;

    // Throws UnknownIdentifier.
    const std::vector<Action>& trace(std::string_view process) const;
};

// Same names, declarations and event sequences; source locations ignored.
bool structurally_equal(const Scenario& a, const Scenario& b);

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceLoc loc{};

    std::string to_string() const;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(Diagnostic d);
    const Diagnostic& diagnostic() const noexcept { return diag_; }

private:
    Diagnostic diag_;
};

class UnknownIdentifier : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Closed on the left at the lock event and open on the right at the unlock
// event; positions are 1-based event indices within the owning trace.
struct HoldInterval {
    int lock_pos = 0;
    int unlock_pos = 0;

    friend bool operator==(const HoldInterval&, const HoldInterval&) = default;
    friend auto operator<=>(const HoldInterval&, const HoldInterval&) = default;
};

class ValidatedScenario {
public:
    const Scenario& scenario() const noexcept { return scenario_; }
    std::size_t process_count() const noexcept { return scenario_.processes.size(); }
    std::size_t resource_count() const noexcept { return scenario_.resources.size(); }

    // Index-based access; both indices must be in range.
    const std::vector<HoldInterval>& intervals(std::size_t process, std::size_t resource) const;

    // True iff `process` holds `resource` after completing `done` events.
    bool holds(std::size_t process, std::size_t resource, int done) const;

private:
    friend struct ValidationAccess;
    ValidatedScenario() = default;

    Scenario scenario_;
    // hold_[process][resource]
    std::vector<std::vector<std::vector<HoldInterval>>> hold_;
};

// Either a value or at least one Error diagnostic, never both.
struct ValidationResult {
    std::optional<ValidatedScenario> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const noexcept { return value.has_value(); }
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

Scenario parse_scenario(std::string_view text);

ValidationResult validate(const Scenario& s);

// parse + validate; throws ParseError or ValidationError.
ValidatedScenario load_scenario(std::string_view text);

const std::vector<HoldInterval>& hold_intervals(const ValidatedScenario& v, std::string_view process,
                                                std::string_view resource);

// Process-algebra term for one process: out(p,r,lock).out(p,r,unlock)...
// An empty trace renders as "ε".
std::string process_semantics(const ValidatedScenario& v, std::string_view process);

// Canonical source text; parse_scenario(render_source(s)) is structurally equal to s.
std::string render_source(const Scenario& s);

// Time-reversed scenario: each trace reversed with lock and unlock swapped.
ValidatedScenario reverse_scenario(const ValidatedScenario& v);

std::string_view to_string(ActionKind k);

}  // namespace pgraph
