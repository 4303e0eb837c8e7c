#pragma once

// Rule-based natural-language understanding: tokenizer, intent rules
// loaded from a data table, and fuzzy course resolution.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dona/catalog.hpp"

namespace dona {

enum class TokenKind : std::uint8_t { Word, CourseCode, Number, Punct };

struct Token {
    std::string text;  // lowercase, except CourseCode tokens which are canonical uppercase
    TokenKind kind = TokenKind::Word;

    friend bool operator==(const Token&, const Token&) = default;
};

std::vector<Token> tokenize(std::string_view utterance);

// Minimal suffix strip (-ing, -ed, plural -s) used for keyword matching.
std::string stem(std::string_view word);

enum class IntentKind : std::uint8_t {
    Wake,
    RegisterCourse,
    ListCourses,
    SetProgram,
    QueryPrerequisites,
    PlanDegree,
    ConfirmYes,
    ConfirmNo,
    Quit,
    Unknown,
};

inline constexpr IntentKind kAllIntentKinds[] = {
    IntentKind::Wake,       IntentKind::RegisterCourse, IntentKind::ListCourses,
    IntentKind::SetProgram, IntentKind::QueryPrerequisites, IntentKind::PlanDegree,
    IntentKind::ConfirmYes, IntentKind::ConfirmNo,      IntentKind::Quit,
    IntentKind::Unknown,
};

std::string_view to_string(IntentKind kind);
std::optional<IntentKind> intent_kind_from_string(std::string_view name);

namespace slot {
inline constexpr std::string_view kCourseCode = "course_code";
inline constexpr std::string_view kCourseMention = "course_mention";
inline constexpr std::string_view kProgramName = "program_name";
inline constexpr std::string_view kDegreeLevel = "degree_level";
}  // namespace slot

struct Intent {
    IntentKind kind = IntentKind::Unknown;
    std::map<std::string, std::string, std::less<>> slots;
    double parse_confidence = 0.0;

    std::optional<std::string> slot(std::string_view name) const;

    friend bool operator==(const Intent&, const Intent&) = default;
};

// Parsing context. Confirmation intents are only produced when the dialog
// is waiting for a yes/no answer.
struct ParseContext {
    bool awaiting_confirmation = false;
};

// Keyword tables for every intent kind plus the shared lexicons.
// Immutable after load; safe to share between threads.
class RuleSet {
public:
    struct Rule {
        IntentKind kind = IntentKind::Unknown;
        std::vector<std::string> keywords;              // stemmed
        std::vector<std::vector<std::string>> phrases;  // stemmed, contiguous
        std::vector<std::vector<std::string>> prefixes; // must open the utterance
        bool needs_confirmation_context = false;
        bool uses_degree_lexicon = false;
        bool requires_slot = false;
        std::vector<std::string> slots;
    };

    // Parses the JSON rules table. Throws ParseError.
    static RuleSet parse(std::string_view document);
    static RuleSet load(const std::filesystem::path& path);
    // The table compiled into the library.
    static const RuleSet& builtin();

    int version() const noexcept { return version_; }
    const Rule* rule(IntentKind kind) const;
    bool is_stopword(const std::string& stemmed) const;
    bool is_any_keyword(const std::string& stemmed) const;
    const std::vector<std::string>& program_markers() const noexcept { return program_markers_; }
    // Canonical degree level for a stemmed word, if any.
    std::optional<std::string> degree_level(const std::string& stemmed) const;
    // Stemmed synonyms for a canonical level (e.g. "masters" -> master, ms, msc).
    std::vector<std::string> degree_synonyms(std::string_view level) const;

private:
    int version_ = 0;
    std::vector<Rule> rules_;
    std::vector<std::string> stopwords_;
    std::vector<std::string> program_markers_;
    std::vector<std::pair<std::string, std::vector<std::string>>> degree_levels_;
    std::vector<std::string> all_keywords_;
};

// Fixed rule priority: Quit > Wake > ConfirmNo/ConfirmYes > RegisterCourse >
// QueryPrerequisites > ListCourses > SetProgram > PlanDegree > Unknown.
Intent parse_intent(const std::vector<Token>& tokens, const ParseContext& context,
                    const RuleSet& rules = RuleSet::builtin());

enum class MatchedOn : std::uint8_t { Code, Title };

struct MatchCandidate {
    CourseCode code;
    double score = 0.0;
    MatchedOn matched_on = MatchedOn::Title;
};

inline constexpr double kFuzzyThreshold = 0.6;
inline constexpr std::size_t kMaxCandidates = 3;

// Byte-level Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

// Exact code or exact (case-insensitive) title scores 1.0; otherwise
// 1 - distance / max_len against lowercase titles, kept when >= 0.6.
// At most three candidates, descending score then ascending code.
std::vector<MatchCandidate> match_course(std::string_view mention, const CourseCatalog& catalog);

// Picks the program named by SetProgram slots. Name match is substring on
// the lowercased program name (or exact id); the degree level narrows ties.
const Program* resolve_program(const CourseCatalog& catalog, std::string_view program_name,
                               std::string_view degree_level, const RuleSet& rules = RuleSet::builtin());

}  // namespace dona
