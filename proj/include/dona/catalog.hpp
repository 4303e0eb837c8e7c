#pragma once

// University knowledge base: courses, programs, term offerings and the
// prerequisite DAG, plus the JSON catalog file format.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dona/error.hpp"

namespace dona {

// Course identifier of the form DEPT-NUMBER, e.g. CSIT-535.
// DEPT is 2-5 letters, NUMBER is 3-4 digits. Stored canonical (uppercase).
class CourseCode {
public:
    CourseCode() = default;

    // Accepts "CSIT-535", "csit-535", "CSIT 535" and "CSIT535".
    static std::optional<CourseCode> parse(std::string_view text);
    // Throws ParseError on malformed input.
    static CourseCode from_string(std::string_view text);

    const std::string& dept() const noexcept { return dept_; }
    const std::string& number() const noexcept { return number_; }
    std::string str() const { return dept_ + "-" + number_; }

    friend auto operator<=>(const CourseCode&, const CourseCode&) = default;
    friend bool operator==(const CourseCode&, const CourseCode&) = default;

private:
    CourseCode(std::string dept, std::string number)
        : dept_(std::move(dept)), number_(std::move(number)) {}

    std::string dept_;
    std::string number_;
};

using CodeSet = std::set<CourseCode>;

std::string join_codes(const CodeSet& codes, std::string_view sep = ", ");

struct Course {
    CourseCode code;
    std::string title;
    int credits = 0;
    std::set<std::string> program_ids;
    CodeSet prerequisites;
};

struct Program {
    std::string id;
    std::string name;
    int required_credits = 0;
};

enum class Season : std::uint8_t { Spring = 0, Summer = 1, Fall = 2 };

// "YYYY-SEASON". Ordered by (year, Spring < Summer < Fall).
class TermId {
public:
    TermId() = default;
    TermId(int year, Season season) : year_(year), season_(season) {}

    static std::optional<TermId> parse(std::string_view text);
    static TermId from_string(std::string_view text);

    int year() const noexcept { return year_; }
    Season season() const noexcept { return season_; }
    std::string str() const;

    friend auto operator<=>(const TermId&, const TermId&) = default;
    friend bool operator==(const TermId&, const TermId&) = default;

private:
    int year_ = 0;
    Season season_ = Season::Spring;
};

struct Term {
    TermId id;
    CodeSet offered;
};

struct CourseCatalog {
    std::vector<Program> programs;
    std::vector<Course> courses;
    std::vector<Term> terms;

    const Course* find_course(const CourseCode& code) const;
    const Program* find_program(std::string_view id) const;
    const Term* find_term(const TermId& id) const;
    // Terms in chronological order.
    std::vector<TermId> term_order() const;
};

enum class FindingKind {
    DuplicateCode,
    DuplicateProgram,
    DuplicateTerm,
    UnresolvedReference,
    SelfPrerequisite,
    Cycle,
    InvalidCredits,
};

std::string_view to_string(FindingKind kind);

struct ValidationFinding {
    FindingKind kind;
    // Entity the finding is about (course code, program id or term id).
    std::string subject;
    // Human-readable detail, e.g. the unresolved reference.
    std::string detail;
    // For Cycle findings: the full path along prerequisite edges, first == last.
    std::vector<CourseCode> cycle;

    std::string describe() const;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;

    bool ok() const noexcept { return findings.empty(); }
    bool has(FindingKind kind) const;
};

class ValidationError : public Error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

// Collects every invariant violation rather than stopping at the first.
ValidationReport validate_catalog(const CourseCatalog& catalog);

// Parse + validate. Throws ParseError (with locus) or ValidationError.
CourseCatalog parse_catalog(std::string_view document);
CourseCatalog load_catalog(const std::filesystem::path& path);

// Serialize in the catalog file format (stable key and element order).
std::string save_catalog(const CourseCatalog& catalog);
void save_catalog(const CourseCatalog& catalog, const std::filesystem::path& path);

// Courses belonging to `program_id`, ascending by code. Throws UnknownProgram.
std::vector<Course> courses_for_program(const CourseCatalog& catalog, std::string_view program_id);

// Case-insensitive exact code lookup; nullopt when absent or malformed.
std::optional<Course> lookup_course(const CourseCatalog& catalog, std::string_view code);

}  // namespace dona
