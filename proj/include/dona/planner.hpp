#pragma once

// Prerequisite closure, eligibility and optimal multi-term planning.

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dona/catalog.hpp"

namespace dona {

struct Registration {
    TermId term;
    CourseCode code;

    friend bool operator==(const Registration&, const Registration&) = default;
};

struct StudentRecord {
    std::string student_id;
    std::string program_id;  // empty when unset
    CodeSet completed;
    // Courses the student claimed to have completed when asked.
    CodeSet self_certified;
    std::vector<Registration> registrations;

    bool has_program() const noexcept { return !program_id.empty(); }
    bool is_satisfied(const CourseCode& code) const {
        return completed.count(code) || self_certified.count(code);
    }
    bool is_registered(const CourseCode& code) const;
    int registered_credits(const CourseCatalog& catalog, const TermId& term) const;

    friend bool operator==(const StudentRecord&, const StudentRecord&) = default;
};

struct PlanConstraints {
    int credit_cap = 0;
    std::vector<TermId> horizon;  // strictly increasing, every id in catalog
};

struct SemesterPlan {
    // Only nonempty terms appear.
    std::map<TermId, CodeSet> assignments;
    int total_terms = 0;

    friend bool operator==(const SemesterPlan&, const SemesterPlan&) = default;
};

enum class InfeasibleKind {
    NotOffered,        // a needed course is offered in no horizon term
    ExceedsCreditCap,  // a single course is heavier than the cap
    HorizonTooShort,   // prerequisite chain longer than the horizon
    NoAssignment,      // search exhausted without a feasible plan
};

std::string_view to_string(InfeasibleKind kind);

class Infeasible : public Error {
public:
    Infeasible(InfeasibleKind kind, std::string course, const std::string& message)
        : Error("Infeasible", message), kind_(kind), course_(std::move(course)) {}

    InfeasibleKind kind() const noexcept { return kind_; }
    // Offending course code, empty when not attributable to one course.
    const std::string& course() const noexcept { return course_; }

private:
    InfeasibleKind kind_;
    std::string course_;
};

struct Eligible {};
struct Missing {
    CodeSet courses;
};
using Eligibility = std::variant<Eligible, Missing>;

// Transitive prerequisites of `code`, excluding `code`. Throws UnknownCourse.
CodeSet prerequisite_closure(const CourseCatalog& catalog, const CourseCode& code);

// Direct prerequisites not completed or self-certified.
// Throws UnknownCourse, AlreadyRegistered.
Eligibility check_eligibility(const CourseCatalog& catalog, const StudentRecord& student,
                              const CourseCode& code);

// Targets plus every prerequisite reachable from them through unsatisfied courses.
CodeSet needed_courses(const CourseCatalog& catalog, const StudentRecord& student,
                       const CodeSet& targets);

// max(longest unmet prerequisite chain, ceil(unmet credits / cap)).
int lower_bound(const CourseCatalog& catalog, const StudentRecord& student, const CodeSet& targets,
                const PlanConstraints& constraints);

// Minimum-nonempty-term plan covering the needed courses. Among optimal
// plans, the one whose term indices listed in ascending course-code order
// are lexicographically smallest.
// Throws UnknownCourse, InvalidPlanRequest, Infeasible.
SemesterPlan plan_semesters(const CourseCatalog& catalog, const StudentRecord& student,
                            const CodeSet& targets, const PlanConstraints& constraints);

}  // namespace dona
