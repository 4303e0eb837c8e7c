#include "dona/planner.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace dona {

bool StudentRecord::is_registered(const CourseCode& code) const {
    return std::any_of(registrations.begin(), registrations.end(),
                       [&](const Registration& r) { return r.code == code; });
}

int StudentRecord::registered_credits(const CourseCatalog& catalog, const TermId& term) const {
    int sum = 0;
    for (const auto& r : registrations) {
        if (r.term != term) continue;
        if (const auto* c = catalog.find_course(r.code)) sum += c->credits;
    }
    return sum;
}

std::string_view to_string(InfeasibleKind kind) {
    switch (kind) {
        case InfeasibleKind::NotOffered: return "NotOffered";
        case InfeasibleKind::ExceedsCreditCap: return "ExceedsCreditCap";
        case InfeasibleKind::HorizonTooShort: return "HorizonTooShort";
        case InfeasibleKind::NoAssignment: return "NoAssignment";
    }
    return "?";
}

namespace {

const Course& require_course(const CourseCatalog& catalog, const CourseCode& code) {
    const auto* c = catalog.find_course(code);
    if (!c) throw UnknownCourse(code.str());
    return *c;
}

// Dense view of the needed courses: index order == ascending code order.
struct Problem {
    std::vector<CourseCode> codes;
    std::vector<int> credits;
    std::vector<std::vector<int>> prereqs;     // needed prerequisites, by index
    std::vector<std::vector<int>> dependents;  // inverse of prereqs
    std::vector<std::vector<int>> offered_in;  // horizon indices, ascending
    int chain = 0;                             // longest prerequisite chain (nodes)
    int total_credits = 0;
};

int longest_chain(const std::vector<std::vector<int>>& prereqs) {
    const auto n = prereqs.size();
    std::vector<int> depth(n, 0);
    // Needed subgraph is a DAG; memoized DFS.
    auto visit = [&](auto&& self, std::size_t i) -> int {
        if (depth[i] > 0) return depth[i];
        int best = 0;
        for (int p : prereqs[i]) best = std::max(best, self(self, static_cast<std::size_t>(p)));
        return depth[i] = best + 1;
    };
    int longest = 0;
    for (std::size_t i = 0; i < n; ++i) longest = std::max(longest, visit(visit, i));
    return longest;
}

Problem build_problem(const CourseCatalog& catalog, const StudentRecord& student, const CodeSet& targets,
                      const std::vector<TermId>& horizon) {
    Problem pb;
    auto needed = needed_courses(catalog, student, targets);
    pb.codes.assign(needed.begin(), needed.end());
    std::map<CourseCode, int> index;
    for (std::size_t i = 0; i < pb.codes.size(); ++i) index[pb.codes[i]] = static_cast<int>(i);

    pb.prereqs.resize(pb.codes.size());
    pb.dependents.resize(pb.codes.size());
    pb.offered_in.resize(pb.codes.size());
    for (std::size_t i = 0; i < pb.codes.size(); ++i) {
        const auto& course = require_course(catalog, pb.codes[i]);
        pb.credits.push_back(course.credits);
        pb.total_credits += course.credits;
        for (const auto& p : course.prerequisites) {
            auto it = index.find(p);
            if (it == index.end()) continue;
            pb.prereqs[i].push_back(it->second);
            pb.dependents[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
        }
        for (std::size_t t = 0; t < horizon.size(); ++t) {
            const auto* term = catalog.find_term(horizon[t]);
            if (term && term->offered.count(pb.codes[i])) pb.offered_in[i].push_back(static_cast<int>(t));
        }
    }
    pb.chain = longest_chain(pb.prereqs);
    return pb;
}

void check_constraints(const CourseCatalog& catalog, const PlanConstraints& constraints) {
    if (constraints.credit_cap < 1) throw InvalidPlanRequest("credit cap must be >= 1");
    if (constraints.horizon.empty()) throw InvalidPlanRequest("horizon must not be empty");
    for (std::size_t i = 0; i < constraints.horizon.size(); ++i) {
        const auto& t = constraints.horizon[i];
        if (!catalog.find_term(t)) throw InvalidPlanRequest("unknown term '" + t.str() + "'");
        if (i > 0 && !(constraints.horizon[i - 1] < t)) {
            throw InvalidPlanRequest("horizon must be strictly increasing at '" + t.str() + "'");
        }
    }
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Depth-first branch and bound. Courses are assigned in index (code)
// order, terms tried ascending, so the first plan reaching the optimum is
// the lexicographically smallest optimal one; later plans must be strictly
// better to replace it.
class Search {
public:
    Search(const Problem& pb, int cap, std::size_t horizon)
        : pb_(pb), cap_(cap), load_(horizon, 0), count_(horizon, 0),
          term_of_(pb.codes.size(), -1) {}

    bool run() {
        remaining_credits_ = pb_.total_credits;
        descend(0);
        return best_cost_ != kNone;
    }

    const std::vector<int>& best() const { return best_; }

private:
    static constexpr int kNone = std::numeric_limits<int>::max();

    int bound() const {
        int free = 0;
        for (std::size_t t = 0; t < load_.size(); ++t) {
            if (count_[t] > 0) free += cap_ - load_[t];
        }
        int extra = remaining_credits_ > free ? ceil_div(remaining_credits_ - free, cap_) : 0;
        return std::max(used_ + extra, pb_.chain);
    }

    bool consistent(std::size_t course, int term) const {
        for (int p : pb_.prereqs[course]) {
            int tp = term_of_[static_cast<std::size_t>(p)];
            if (tp >= 0 && tp >= term) return false;
        }
        for (int d : pb_.dependents[course]) {
            int td = term_of_[static_cast<std::size_t>(d)];
            if (td >= 0 && td <= term) return false;
        }
        return true;
    }

    void descend(std::size_t course) {
        if (course == pb_.codes.size()) {
            if (used_ < best_cost_) {
                best_cost_ = used_;
                best_ = term_of_;
            }
            return;
        }
        for (int term : pb_.offered_in[course]) {
            auto t = static_cast<std::size_t>(term);
            int credits = pb_.credits[course];
            if (load_[t] + credits > cap_ || !consistent(course, term)) continue;

            load_[t] += credits;
            if (count_[t]++ == 0) ++used_;
            remaining_credits_ -= credits;
            term_of_[course] = term;

            if (bound() < best_cost_) descend(course + 1);

            term_of_[course] = -1;
            remaining_credits_ += credits;
            if (--count_[t] == 0) --used_;
            load_[t] -= credits;
        }
    }

    const Problem& pb_;
    int cap_;
    std::vector<int> load_;
    std::vector<int> count_;
    std::vector<int> term_of_;
    int used_ = 0;
    int remaining_credits_ = 0;
    int best_cost_ = kNone;
    std::vector<int> best_;
};

}  // namespace

CodeSet prerequisite_closure(const CourseCatalog& catalog, const CourseCode& code) {
    require_course(catalog, code);
    CodeSet seen;
    std::deque<CourseCode> queue{code};
    while (!queue.empty()) {
        auto current = queue.front();
        queue.pop_front();
        const auto* c = catalog.find_course(current);
        if (!c) continue;
        for (const auto& p : c->prerequisites) {
            if (p != code && seen.insert(p).second) queue.push_back(p);
        }
    }
    return seen;
}

Eligibility check_eligibility(const CourseCatalog& catalog, const StudentRecord& student,
                              const CourseCode& code) {
    const auto& course = require_course(catalog, code);
    if (student.is_registered(code)) throw AlreadyRegistered(code.str());
    Missing missing;
    for (const auto& p : course.prerequisites) {
        if (!student.is_satisfied(p)) missing.courses.insert(p);
    }
    if (missing.courses.empty()) return Eligible{};
    return missing;
}

CodeSet needed_courses(const CourseCatalog& catalog, const StudentRecord& student, const CodeSet& targets) {
    CodeSet needed;
    std::deque<CourseCode> queue;
    for (const auto& t : targets) {
        require_course(catalog, t);
        if (needed.insert(t).second) queue.push_back(t);
    }
    while (!queue.empty()) {
        const auto& course = require_course(catalog, queue.front());
        queue.pop_front();
        for (const auto& p : course.prerequisites) {
            if (student.is_satisfied(p)) continue;
            if (needed.insert(p).second) queue.push_back(p);
        }
    }
    return needed;
}

int lower_bound(const CourseCatalog& catalog, const StudentRecord& student, const CodeSet& targets,
                const PlanConstraints& constraints) {
    if (targets.empty()) return 0;
    auto pb = build_problem(catalog, student, targets, constraints.horizon);
    int cap = std::max(constraints.credit_cap, 1);
    return std::max(pb.chain, ceil_div(pb.total_credits, cap));
}

SemesterPlan plan_semesters(const CourseCatalog& catalog, const StudentRecord& student,
                            const CodeSet& targets, const PlanConstraints& constraints) {
    check_constraints(catalog, constraints);
    for (const auto& t : targets) {
        require_course(catalog, t);
        if (student.completed.count(t)) {
            throw InvalidPlanRequest("target '" + t.str() + "' is already completed");
        }
    }
    if (targets.empty()) return {};

    auto pb = build_problem(catalog, student, targets, constraints.horizon);
    for (std::size_t i = 0; i < pb.codes.size(); ++i) {
        const auto code = pb.codes[i].str();
        if (pb.offered_in[i].empty()) {
            throw Infeasible(InfeasibleKind::NotOffered, code,
                             code + " is not offered in any horizon term");
        }
        if (pb.credits[i] > constraints.credit_cap) {
            throw Infeasible(InfeasibleKind::ExceedsCreditCap, code,
                             code + " needs " + std::to_string(pb.credits[i]) +
                                 " credits, above the cap of " + std::to_string(constraints.credit_cap));
        }
    }
    if (pb.chain > static_cast<int>(constraints.horizon.size())) {
        throw Infeasible(InfeasibleKind::HorizonTooShort, "",
                         "prerequisite chain of " + std::to_string(pb.chain) +
                             " courses does not fit in " +
                             std::to_string(constraints.horizon.size()) + " terms");
    }

    Search search(pb, constraints.credit_cap, constraints.horizon.size());
    if (!search.run()) {
        throw Infeasible(InfeasibleKind::NoAssignment, "",
                         "no assignment satisfies offerings, credit cap and prerequisite order");
    }

    SemesterPlan plan;
    const auto& best = search.best();
    for (std::size_t i = 0; i < pb.codes.size(); ++i) {
        plan.assignments[constraints.horizon[static_cast<std::size_t>(best[i])]].insert(pb.codes[i]);
    }
    plan.total_terms = static_cast<int>(plan.assignments.size());
    return plan;
}

}  // namespace dona
