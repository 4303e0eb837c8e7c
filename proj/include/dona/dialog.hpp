#pragma once

// Dialog state machine, response templates and session types.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dona/catalog.hpp"
#include "dona/nlu.hpp"
#include "dona/planner.hpp"
#include "dona/transport.hpp"

namespace dona {

// ---------------------------------------------------------------------------
// Templates

using Placeholders = std::map<std::string, std::string, std::less<>>;

inline constexpr std::string_view kDefaultLocale = "en";

class TemplateSet {
public:
    // Tab-separated (key, locale, pattern) rows; '#' starts a comment line.
    // Throws ParseError when a key lacks an "en" pattern or when locales
    // disagree on a key's placeholder set.
    static TemplateSet parse(std::string_view document);
    static TemplateSet load(const std::filesystem::path& path);
    static const TemplateSet& builtin();

    // Exact locale, then its primary subtag ("es-MX" -> "es"), then "en".
    // Throws MissingPlaceholder, or Error("UnknownTemplate").
    std::string render(std::string_view key, const Placeholders& args, std::string_view locale) const;

    bool has(std::string_view key, std::string_view locale) const;
    std::vector<std::string> keys() const;
    std::vector<std::string> locales() const;

private:
    std::map<std::string, std::map<std::string, std::string, std::less<>>, std::less<>> patterns_;
};

std::string render(std::string_view key, const Placeholders& args, std::string_view locale);

// Placeholder names referenced by a pattern, in order of first use.
std::vector<std::string> placeholders_of(std::string_view pattern);

// ---------------------------------------------------------------------------
// State

enum class Phase : std::uint8_t {
    Idle,
    AwaitingCommand,
    AwaitingProgram,
    AwaitingCourseChoice,
    AwaitingPrereqConfirmation,
    AwaitingMoreRequests,
};

inline constexpr Phase kAllPhases[] = {
    Phase::Idle,         Phase::AwaitingCommand,            Phase::AwaitingProgram,
    Phase::AwaitingCourseChoice, Phase::AwaitingPrereqConfirmation, Phase::AwaitingMoreRequests,
};

std::string_view to_string(Phase phase);
std::optional<Phase> phase_from_string(std::string_view name);

struct PendingRegistration {
    CourseCode course;
    CodeSet missing;

    friend bool operator==(const PendingRegistration&, const PendingRegistration&) = default;
};

// pending is set iff phase == AwaitingPrereqConfirmation.
struct DialogState {
    Phase phase = Phase::Idle;
    std::optional<PendingRegistration> pending;

    friend bool operator==(const DialogState&, const DialogState&) = default;
};

bool awaits_confirmation(Phase phase);

struct Registered {
    CourseCode code;
    TermId term;
    friend bool operator==(const Registered&, const Registered&) = default;
};
struct ProgramSet {
    std::string id;
    friend bool operator==(const ProgramSet&, const ProgramSet&) = default;
};
struct SelfCertified {
    CodeSet courses;
    friend bool operator==(const SelfCertified&, const SelfCertified&) = default;
};
using Effect = std::variant<Registered, ProgramSet, SelfCertified>;

struct SayPart {
    std::string key;
    Placeholders args;
    friend bool operator==(const SayPart&, const SayPart&) = default;
};

struct AgentResponse {
    std::string say;              // rendered parts joined by a space; empty for Idle no-ops
    std::vector<SayPart> parts;   // templates behind `say`
    std::vector<Display> displays;
    DialogState state_after;
    std::vector<Effect> effects;
    std::string locale;

    std::vector<OutputEvent> events() const;

    friend bool operator==(const AgentResponse&, const AgentResponse&) = default;
};

enum class Speaker : std::uint8_t { User, Agent };

struct TranscriptTurn {
    Speaker speaker = Speaker::User;
    std::string text;
    std::int64_t timestamp_ms = 0;
    std::int64_t latency_ms = 0;  // agent turns only

    friend bool operator==(const TranscriptTurn&, const TranscriptTurn&) = default;
};

struct DialogSession {
    std::string session_id;
    StudentRecord student;
    DialogState state;
    std::string locale{kDefaultLocale};
    std::vector<TranscriptTurn> transcript;

    friend bool operator==(const DialogSession&, const DialogSession&) = default;
};

struct DialogConfig {
    int credit_cap = 9;
    // Terms registrations and plans may use; empty means every catalog term.
    std::vector<TermId> horizon;
};

// ---------------------------------------------------------------------------
// Engine

class DialogEngine {
public:
    DialogEngine(const CourseCatalog& catalog, DialogConfig config = {},
                 const RuleSet& rules = RuleSet::builtin(),
                 const TemplateSet& templates = TemplateSet::builtin());

    // Pure transition: same (session, intent) always yields the same response.
    AgentResponse step(const DialogSession& session, const Intent& intent) const;

    // Response for an utterance the confidence gate rejected. State unchanged.
    AgentResponse reprompt(const DialogSession& session, std::string_view key = "reprompt") const;

    ParseContext context_for(const DialogState& state) const;

    const CourseCatalog& catalog() const noexcept { return catalog_; }
    const RuleSet& rules() const noexcept { return rules_; }
    const TemplateSet& templates() const noexcept { return templates_; }
    const std::vector<TermId>& horizon() const noexcept { return horizon_; }
    int credit_cap() const noexcept { return config_.credit_cap; }

private:
    class Turn;

    const CourseCatalog& catalog_;
    DialogConfig config_;
    std::vector<TermId> horizon_;
    const RuleSet& rules_;
    const TemplateSet& templates_;
};

// Moves the session to state_after and applies the effects to its student.
void apply(DialogSession& session, const AgentResponse& response);

// Convenience: default config, builtin rules and templates.
AgentResponse step(const DialogSession& session, const Intent& intent, const CourseCatalog& catalog);

// Display row builders shared with the service layer.
nlohmann::ordered_json course_rows(const std::vector<Course>& courses);
nlohmann::ordered_json plan_rows(const CourseCatalog& catalog, const SemesterPlan& plan);

}  // namespace dona
