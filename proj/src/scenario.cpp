#include "pgraph/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace pgraph {

namespace {

enum class Tok { Ident, Colon, Semicolon, Comma, Bad, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceLoc loc;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Tokenizes one physical line; '#' ends the line.
std::vector<Token> tokenize_line(std::string_view line, int line_no)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        const SourceLoc loc{line_no, static_cast<int>(i) + 1};
        if (c == '#')
            break;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < line.size() && ident_char(line[j]))
                ++j;
            out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), loc});
            i = j;
            continue;
        }
        switch (c) {
        case ':': out.push_back({Tok::Colon, ":", loc}); break;
        case ';': out.push_back({Tok::Semicolon, ";", loc}); break;
        case ',': out.push_back({Tok::Comma, ",", loc}); break;
        default: out.push_back({Tok::Bad, std::string(1, c), loc}); break;
        }
        ++i;
    }
    out.push_back({Tok::End, "", {line_no, static_cast<int>(line.size()) + 1}});
    return out;
}

[[noreturn]] void fail(std::string code, std::string message, SourceLoc loc)
{
    throw ParseError(Diagnostic{Severity::Error, std::move(code), std::move(message), loc});
}

std::string describe(const Token& t)
{
    switch (t.kind) {
    case Tok::End: return "end of line";
    case Tok::Ident: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Scenario run()
    {
        bool have_header = false;
        bool in_bodies = false;
        std::vector<bool> has_body;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text_.size()) {
            std::size_t eol = text_.find('\n', pos);
            if (eol == std::string_view::npos)
                eol = text_.size();
            ++line_no;
            toks_ = tokenize_line(text_.substr(pos, eol - pos), line_no);
            at_ = 0;
            pos = eol + 1;
            if (peek().kind == Tok::End)
                continue;

            if (!have_header) {
                header();
                have_header = true;
                continue;
            }
            const Token& first = peek();
            const bool is_decl = first.kind == Tok::Ident &&
                                 (first.text == "process" || first.text == "resource") &&
                                 toks_[at_ + 1].kind == Tok::Ident;
            if (is_decl) {
                if (in_bodies)
                    fail("SyntaxError", "declaration after the first process body", first.loc);
                declaration();
                has_body.resize(s_.processes.size(), false);
            } else {
                if (s_.processes.empty() && s_.resources.empty())
                    fail("SyntaxError", "expected 'process' or 'resource' declaration, found " + describe(first),
                         first.loc);
                in_bodies = true;
                body(has_body);
            }
        }
        if (!have_header)
            fail("SyntaxError", "expected 'scenario' header", {line_no, 1});
        if (!in_bodies)
            fail("SyntaxError", "expected at least one process body", {line_no, 1});
        return std::move(s_);
    }

private:
    const Token& peek() const { return toks_[at_]; }
    const Token& next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }

    const Token& expect(Tok kind, const char* what)
    {
        const Token& t = peek();
        if (t.kind != kind)
            fail("SyntaxError", std::string("expected ") + what + ", found " + describe(t), t.loc);
        return next();
    }

    void expect_end()
    {
        if (peek().kind != Tok::End)
            fail("SyntaxError", "unexpected " + describe(peek()), peek().loc);
    }

    void header()
    {
        const Token& kw = peek();
        if (kw.kind != Tok::Ident || kw.text != "scenario")
            fail("SyntaxError", "expected 'scenario' header, found " + describe(kw), kw.loc);
        next();
        s_.name = expect(Tok::Ident, "scenario name").text;
        expect_end();
    }

    void declare(const Token& t)
    {
        const auto dup = [&](const std::vector<std::string>& v) {
            return std::find(v.begin(), v.end(), t.text) != v.end();
        };
        if (dup(s_.processes) || dup(s_.resources))
            fail("DuplicateIdentifier", "identifier '" + t.text + "' is already declared", t.loc);
    }

    void declaration()
    {
        const bool is_process = next().text == "process";
        auto& into = is_process ? s_.processes : s_.resources;
        for (;;) {
            const Token& id = expect(Tok::Ident, "identifier");
            declare(id);
            into.push_back(id.text);
            if (is_process)
                s_.traces.emplace_back();
            if (peek().kind != Tok::Comma)
                break;
            next();
        }
        expect_end();
    }

    void body(std::vector<bool>& has_body)
    {
        const Token& who = expect(Tok::Ident, "process name");
        const auto idx = s_.process_index(who.text);
        if (!idx) {
            const bool is_resource = s_.resource_index(who.text).has_value();
            fail("UndeclaredIdentifier",
                 is_resource ? "'" + who.text + "' is a resource, not a process"
                             : "undeclared process '" + who.text + "'",
                 who.loc);
        }
        if (has_body[*idx])
            fail("DuplicateBody", "process '" + who.text + "' already has a body", who.loc);
        has_body[*idx] = true;
        expect(Tok::Colon, "':'");

        auto& trace = s_.traces[*idx];
        for (;;) {
            trace.push_back(action());
            if (peek().kind != Tok::Semicolon)
                break;
            next();
        }
        expect_end();
    }

    Action action()
    {
        const Token& kw = peek();
        if (kw.kind != Tok::Ident)
            fail("SyntaxError", "expected action, found " + describe(kw), kw.loc);
        Action a;
        a.loc = kw.loc;
        if (kw.text == "lock" || kw.text == "P")
            a.kind = ActionKind::Lock;
        else if (kw.text == "unlock" || kw.text == "V")
            a.kind = ActionKind::Unlock;
        else
            fail("SyntaxError", "unknown action '" + kw.text + "' (expected lock, unlock, P or V)", kw.loc);
        next();
        const Token& res = expect(Tok::Ident, "resource name");
        if (!s_.resource_index(res.text)) {
            const bool is_process = s_.process_index(res.text).has_value();
            fail("UndeclaredIdentifier",
                 is_process ? "'" + res.text + "' is a process, not a resource"
                            : "undeclared resource '" + res.text + "'",
                 res.loc);
        }
        a.resource = res.text;
        return a;
    }

    std::string_view text_;
    std::vector<Token> toks_;
    std::size_t at_ = 0;
    Scenario s_;
};

std::optional<std::size_t> index_of(const std::vector<std::string>& v, std::string_view x)
{
    const auto it = std::find(v.begin(), v.end(), x);
    if (it == v.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
}

std::string ordinal_event(std::size_t pos) { return "event " + std::to_string(pos); }

}  // namespace

struct ValidationAccess {
    static ValidatedScenario make(Scenario s, std::vector<std::vector<std::vector<HoldInterval>>> hold)
    {
        ValidatedScenario v;
        v.scenario_ = std::move(s);
        v.hold_ = std::move(hold);
        return v;
    }
};

std::optional<std::size_t> Scenario::process_index(std::string_view p) const { return index_of(processes, p); }

std::optional<std::size_t> Scenario::resource_index(std::string_view r) const { return index_of(resources, r); }

const std::vector<Action>& Scenario::trace(std::string_view process) const
{
    const auto i = process_index(process);
    if (!i)
        throw UnknownIdentifier("unknown process '" + std::string(process) + "'");
    return traces[*i];
}

bool structurally_equal(const Scenario& a, const Scenario& b)
{
    if (a.name != b.name || a.processes != b.processes || a.resources != b.resources ||
        a.traces.size() != b.traces.size())
        return false;
    for (std::size_t i = 0; i < a.traces.size(); ++i) {
        const auto& x = a.traces[i];
        const auto& y = b.traces[i];
        if (!std::equal(x.begin(), x.end(), y.begin(), y.end(),
                        [](const Action& p, const Action& q) { return p.kind == q.kind && p.resource == q.resource; }))
            return false;
    }
    return true;
}

std::string Diagnostic::to_string() const
{
    std::ostringstream os;
    os << loc.line << ':' << loc.column << ": " << (severity == Severity::Error ? "error" : "warning") << '['
       << code << "]: " << message;
    return os.str();
}

ParseError::ParseError(Diagnostic d) : std::runtime_error(d.to_string()), diag_(std::move(d)) {}

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& diags)
{
    std::string out;
    for (const auto& d : diags) {
        if (!out.empty())
            out += '\n';
        out += d.to_string();
    }
    return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_diagnostics(diags)), diags_(std::move(diags))
{
}

const std::vector<HoldInterval>& ValidatedScenario::intervals(std::size_t process, std::size_t resource) const
{
    return hold_.at(process).at(resource);
}

bool ValidatedScenario::holds(std::size_t process, std::size_t resource, int done) const
{
    for (const auto& iv : hold_[process][resource])
        if (iv.lock_pos <= done && done < iv.unlock_pos)
            return true;
    return false;
}

Scenario parse_scenario(std::string_view text) { return Parser(text).run(); }

ValidationResult validate(const Scenario& s)
{
    ValidationResult result;
    auto& diags = result.diagnostics;
    const std::size_t np = s.processes.size();
    const std::size_t nr = s.resources.size();

    std::vector<std::vector<std::vector<HoldInterval>>> hold(np, std::vector<std::vector<HoldInterval>>(nr));
    std::vector<bool> used(nr, false);

    for (std::size_t p = 0; p < np; ++p) {
        const auto& name = s.processes[p];
        // open_at[r] = 1-based position of the pending lock, 0 when free
        std::vector<int> open_at(nr, 0);
        const auto& trace = s.traces[p];
        for (std::size_t j = 0; j < trace.size(); ++j) {
            const Action& a = trace[j];
            const int pos = static_cast<int>(j) + 1;
            const auto r = s.resource_index(a.resource);
            if (!r) {
                diags.push_back({Severity::Error, "UndeclaredIdentifier",
                                 name + ", " + ordinal_event(pos) + ": undeclared resource '" + a.resource + "'",
                                 a.loc});
                continue;
            }
            used[*r] = true;
            if (a.kind == ActionKind::Lock) {
                if (open_at[*r] != 0) {
                    diags.push_back({Severity::Error, "RelockWhileHeld",
                                     name + ", " + ordinal_event(pos) + ": lock " + a.resource +
                                         " while already holding it (locked at " + ordinal_event(open_at[*r]) + ")",
                                     a.loc});
                    continue;
                }
                open_at[*r] = pos;
            } else {
                if (open_at[*r] == 0) {
                    diags.push_back({Severity::Error, "UnlockWithoutLock",
                                     name + ", " + ordinal_event(pos) + ": unlock " + a.resource +
                                         " which is not held",
                                     a.loc});
                    continue;
                }
                hold[p][*r].push_back({open_at[*r], pos});
                open_at[*r] = 0;
            }
        }
        for (std::size_t r = 0; r < nr; ++r) {
            if (open_at[r] == 0)
                continue;
            const Action& lock = trace[static_cast<std::size_t>(open_at[r]) - 1];
            diags.push_back({Severity::Error, "UnreleasedResource",
                             name + ": " + s.resources[r] + " locked at " + ordinal_event(open_at[r]) +
                                 " is never unlocked",
                             lock.loc});
        }
    }

    const bool has_error = std::any_of(diags.begin(), diags.end(),
                                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
    for (std::size_t r = 0; r < nr; ++r)
        if (!used[r])
            diags.push_back({Severity::Warning, "UnusedResource",
                             "resource '" + s.resources[r] + "' is never locked", SourceLoc{}});

    if (!has_error)
        result.value = ValidationAccess::make(s, std::move(hold));
    return result;
}

ValidatedScenario load_scenario(std::string_view text)
{
    auto res = validate(parse_scenario(text));
    if (!res.ok())
        throw ValidationError(std::move(res.diagnostics));
    return std::move(*res.value);
}

const std::vector<HoldInterval>& hold_intervals(const ValidatedScenario& v, std::string_view process,
                                                std::string_view resource)
{
    const auto& s = v.scenario();
    const auto p = s.process_index(process);
    if (!p)
        throw UnknownIdentifier("unknown process '" + std::string(process) + "'");
    const auto r = s.resource_index(resource);
    if (!r)
        throw UnknownIdentifier("unknown resource '" + std::string(resource) + "'");
    return v.intervals(*p, *r);
}

std::string_view to_string(ActionKind k) { return k == ActionKind::Lock ? "lock" : "unlock"; }

std::string process_semantics(const ValidatedScenario& v, std::string_view process)
{
    const auto& trace = v.scenario().trace(process);
    if (trace.empty())
        return "ε";
    std::string out;
    for (const auto& a : trace) {
        if (!out.empty())
            out += '.';
        out += "out(";
        out += process;
        out += ',';
        out += a.resource;
        out += ',';
        out += to_string(a.kind);
        out += ')';
    }
    return out;
}

std::string render_source(const Scenario& s)
{
    std::ostringstream os;
    const auto list = [&](const char* kw, const std::vector<std::string>& ids) {
        if (ids.empty())
            return;
        os << kw << ' ';
        for (std::size_t i = 0; i < ids.size(); ++i)
            os << (i ? ", " : "") << ids[i];
        os << '\n';
    };
    os << "scenario " << s.name << '\n';
    list("process", s.processes);
    list("resource", s.resources);
    for (std::size_t p = 0; p < s.processes.size(); ++p) {
        if (s.traces[p].empty())
            continue;
        os << s.processes[p] << ':';
        for (std::size_t j = 0; j < s.traces[p].size(); ++j) {
            const auto& a = s.traces[p][j];
            os << (j ? "; " : " ") << to_string(a.kind) << ' ' << a.resource;
        }
        os << '\n';
    }
    return os.str();
}

ValidatedScenario reverse_scenario(const ValidatedScenario& v)
{
    Scenario s = v.scenario();
    for (auto& trace : s.traces) {
        std::reverse(trace.begin(), trace.end());
        for (auto& a : trace)
            a.kind = a.kind == ActionKind::Lock ? ActionKind::Unlock : ActionKind::Lock;
    }
    auto res = validate(s);
    if (!res.ok())
        throw std::logic_error("reversal of a valid scenario failed validation");
    return std::move(*res.value);
}

}  // namespace pgraph
