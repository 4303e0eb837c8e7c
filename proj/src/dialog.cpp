#include "dona/dialog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dona/builtin_data.hpp"

namespace dona {

// ---------------------------------------------------------------------------
// Templates

std::vector<std::string> placeholders_of(std::string_view pattern) {
    std::vector<std::string> names;
    std::size_t pos = 0;
    while ((pos = pattern.find('{', pos)) != std::string_view::npos) {
        auto close = pattern.find('}', pos);
        if (close == std::string_view::npos) break;
        std::string name(pattern.substr(pos + 1, close - pos - 1));
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
        pos = close + 1;
    }
    return names;
}

TemplateSet TemplateSet::parse(std::string_view document) {
    TemplateSet set;
    std::istringstream in{std::string(document)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            throw ParseError("templates line " + std::to_string(lineno) + ": expected key<TAB>locale<TAB>pattern");
        }
        auto key = line.substr(0, t1);
        auto locale = line.substr(t1 + 1, t2 - t1 - 1);
        auto pattern = line.substr(t2 + 1);
        if (key.empty() || locale.empty() || pattern.empty()) {
            throw ParseError("templates line " + std::to_string(lineno) + ": empty field");
        }
        if (!set.patterns_[key].emplace(locale, pattern).second) {
            throw ParseError("templates line " + std::to_string(lineno) + ": duplicate " + key + "/" + locale);
        }
    }
    for (const auto& [key, by_locale] : set.patterns_) {
        auto en = by_locale.find(kDefaultLocale);
        if (en == by_locale.end()) throw ParseError("template '" + key + "' has no \"en\" pattern");
        auto expected = placeholders_of(en->second);
        std::sort(expected.begin(), expected.end());
        for (const auto& [locale, pattern] : by_locale) {
            auto got = placeholders_of(pattern);
            std::sort(got.begin(), got.end());
            if (got != expected) {
                throw ParseError("template '" + key + "' placeholders differ between en and " + locale);
            }
        }
    }
    return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open templates file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const TemplateSet& TemplateSet::builtin() {
    static const TemplateSet set = parse(builtin::templates_tsv());
    return set;
}

bool TemplateSet::has(std::string_view key, std::string_view locale) const {
    auto it = patterns_.find(key);
    return it != patterns_.end() && it->second.count(locale);
}

std::vector<std::string> TemplateSet::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : patterns_) out.push_back(k);
    return out;
}

std::vector<std::string> TemplateSet::locales() const {
    std::set<std::string> all;
    for (const auto& [_, by_locale] : patterns_) {
        for (const auto& [l, __] : by_locale) all.insert(l);
    }
    return {all.begin(), all.end()};
}

std::string TemplateSet::render(std::string_view key, const Placeholders& args, std::string_view locale) const {
    auto it = patterns_.find(key);
    if (it == patterns_.end()) throw Error("UnknownTemplate", "no template '" + std::string(key) + "'");
    const auto& by_locale = it->second;
    auto pick = by_locale.find(locale);
    if (pick == by_locale.end()) pick = by_locale.find(locale.substr(0, locale.find('-')));
    if (pick == by_locale.end()) pick = by_locale.find(kDefaultLocale);

    const std::string& pattern = pick->second;
    std::string out;
    std::size_t pos = 0;
    while (pos < pattern.size()) {
        auto open = pattern.find('{', pos);
        auto close = open == std::string::npos ? open : pattern.find('}', open);
        if (close == std::string::npos) {
            out.append(pattern, pos, std::string::npos);
            break;
        }
        out.append(pattern, pos, open - pos);
        auto name = pattern.substr(open + 1, close - open - 1);
        auto arg = args.find(name);
        if (arg == args.end()) throw MissingPlaceholder(std::string(key), name);
        out += arg->second;
        pos = close + 1;
    }
    return out;
}

std::string render(std::string_view key, const Placeholders& args, std::string_view locale) {
    return TemplateSet::builtin().render(key, args, locale);
}

// ---------------------------------------------------------------------------
// State helpers

namespace {
constexpr std::pair<Phase, std::string_view> kPhaseNames[] = {
    {Phase::Idle, "Idle"},
    {Phase::AwaitingCommand, "AwaitingCommand"},
    {Phase::AwaitingProgram, "AwaitingProgram"},
    {Phase::AwaitingCourseChoice, "AwaitingCourseChoice"},
    {Phase::AwaitingPrereqConfirmation, "AwaitingPrereqConfirmation"},
    {Phase::AwaitingMoreRequests, "AwaitingMoreRequests"},
};
}  // namespace

std::string_view to_string(Phase phase) {
    for (const auto& [p, name] : kPhaseNames) {
        if (p == phase) return name;
    }
    return "?";
}

std::optional<Phase> phase_from_string(std::string_view name) {
    for (const auto& [p, n] : kPhaseNames) {
        if (n == name) return p;
    }
    return std::nullopt;
}

bool awaits_confirmation(Phase phase) {
    return phase == Phase::AwaitingPrereqConfirmation || phase == Phase::AwaitingMoreRequests;
}

std::vector<OutputEvent> AgentResponse::events() const {
    std::vector<OutputEvent> out;
    if (!say.empty()) out.emplace_back(Say{say});
    for (const auto& d : displays) out.emplace_back(d);
    return out;
}

nlohmann::ordered_json course_rows(const std::vector<Course>& courses) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& c : courses) {
        rows.push_back({{"code", c.code.str()}, {"title", c.title}, {"credits", c.credits}});
    }
    return rows;
}

nlohmann::ordered_json plan_rows(const CourseCatalog& catalog, const SemesterPlan& plan) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& [term, codes] : plan.assignments) {
        int credits = 0;
        auto list = nlohmann::ordered_json::array();
        for (const auto& code : codes) {
            list.push_back(code.str());
            if (const auto* c = catalog.find_course(code)) credits += c->credits;
        }
        rows.push_back({{"term", term.str()}, {"courses", list}, {"credits", credits}});
    }
    return rows;
}

void apply(DialogSession& session, const AgentResponse& response) {
    session.state = response.state_after;
    auto& student = session.student;
    for (const auto& effect : response.effects) {
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, Registered>) {
                    student.registrations.push_back({e.term, e.code});
                } else if constexpr (std::is_same_v<T, ProgramSet>) {
                    student.program_id = e.id;
                } else {
                    student.self_certified.insert(e.courses.begin(), e.courses.end());
                }
            },
            effect);
    }
}

// ---------------------------------------------------------------------------
// Engine

DialogEngine::DialogEngine(const CourseCatalog& catalog, DialogConfig config, const RuleSet& rules,
                           const TemplateSet& templates)
    : catalog_(catalog), config_(std::move(config)), rules_(rules), templates_(templates) {
    horizon_ = config_.horizon.empty() ? catalog_.term_order() : config_.horizon;
}

ParseContext DialogEngine::context_for(const DialogState& state) const {
    return ParseContext{awaits_confirmation(state.phase)};
}

// Builds one response. Every user-facing sentence goes through `say()`.
class DialogEngine::Turn {
public:
    Turn(const DialogEngine& engine, const DialogSession& session)
        : engine_(engine), session_(session), student_(session.student) {
        out_.state_after = session.state;
        out_.locale = session.locale;
    }

    AgentResponse finish() {
        for (const auto& part : out_.parts) {
            if (!out_.say.empty()) out_.say += ' ';
            out_.say += engine_.templates_.render(part.key, part.args, out_.locale);
        }
        return std::move(out_);
    }

    void say(std::string key, Placeholders args = {}) { out_.parts.push_back({std::move(key), std::move(args)}); }
    void go(Phase phase) { out_.state_after = DialogState{phase, std::nullopt}; }

    void handle(const Intent& intent) {
        const Phase phase = session_.state.phase;
        if (phase == Phase::Idle) {
            if (intent.kind == IntentKind::Wake) greet();
            return;
        }
        switch (intent.kind) {
            case IntentKind::Quit:
                say("farewell");
                go(Phase::Idle);
                return;
            case IntentKind::Wake:
                greet();
                return;
            case IntentKind::ConfirmYes:
            case IntentKind::ConfirmNo:
                confirm(intent.kind == IntentKind::ConfirmYes);
                return;
            case IntentKind::RegisterCourse:
                register_course(intent);
                return;
            case IntentKind::ListCourses:
                list_courses();
                return;
            case IntentKind::SetProgram:
                set_program(intent);
                return;
            case IntentKind::QueryPrerequisites:
                query_prerequisites(intent);
                return;
            case IntentKind::PlanDegree:
                plan_degree(intent);
                return;
            case IntentKind::Unknown:
                break;
        }
        say("not_understood");
    }

private:
    void greet() {
        say("greeting");
        go(Phase::AwaitingCommand);
    }

    const Program* current_program() const {
        return student_.has_program() ? engine_.catalog_.find_program(student_.program_id) : nullptr;
    }

    void show_courses(const Program& program) {
        auto courses = courses_for_program(engine_.catalog_, program.id);
        if (courses.empty()) {
            say("no_courses", {{"program", program.name}});
            go(Phase::AwaitingCommand);
            return;
        }
        say("courses_available", {{"program", program.name}});
        out_.displays.push_back({DisplayKind::CourseTable, course_rows(courses)});
        go(Phase::AwaitingCourseChoice);
    }

    void list_courses() {
        if (const auto* program = current_program()) {
            show_courses(*program);
        } else {
            say("ask_program");
            go(Phase::AwaitingProgram);
        }
    }

    void set_program(const Intent& intent) {
        const auto* program = resolve_program(engine_.catalog_, intent.slot(slot::kProgramName).value_or(""),
                                              intent.slot(slot::kDegreeLevel).value_or(""), engine_.rules_);
        if (!program) {
            say("unknown_program");
            return;
        }
        if (student_.program_id != program->id) out_.effects.emplace_back(ProgramSet{program->id});
        show_courses(*program);
    }

    // Resolves the course slot of an intent. Speaks the apology itself when
    // the mention matches nothing.
    std::optional<Course> resolve_course(const Intent& intent) {
        if (auto code = intent.slot(slot::kCourseCode)) {
            if (auto course = lookup_course(engine_.catalog_, *code)) return course;
            say("unknown_course", {{"mention", *code}});
            return std::nullopt;
        }
        if (auto mention = intent.slot(slot::kCourseMention)) {
            auto candidates = match_course(*mention, engine_.catalog_);
            if (!candidates.empty()) return lookup_course(engine_.catalog_, candidates.front().code.str());
            say("unknown_course", {{"mention", *mention}});
        }
        return std::nullopt;
    }

    static bool has_course_slot(const Intent& intent) {
        return intent.slot(slot::kCourseCode) || intent.slot(slot::kCourseMention);
    }

    void register_course(const Intent& intent) {
        if (!has_course_slot(intent)) {
            if (session_.state.phase == Phase::AwaitingCourseChoice) {
                say("ask_course");
            } else {
                list_courses();
            }
            return;
        }
        auto course = resolve_course(intent);
        if (!course) return;

        Eligibility eligibility;
        try {
            eligibility = check_eligibility(engine_.catalog_, student_, course->code);
        } catch (const AlreadyRegistered&) {
            say("already_registered", {{"course", course->code.str()}});
            return;
        }
        if (const auto* missing = std::get_if<Missing>(&eligibility)) {
            say("prereq_question", {{"course", course->code.str()}});
            out_.displays.push_back({DisplayKind::PrereqList, prereq_rows(missing->courses)});
            out_.state_after = DialogState{Phase::AwaitingPrereqConfirmation,
                                           PendingRegistration{course->code, missing->courses}};
            return;
        }
        if (!commit(*course, {})) say("not_offered", {{"course", course->code.str()}});
    }

    // Registers in the earliest horizon term that offers the course and has
    // room under the credit cap. False (and no effects) when none does.
    bool commit(const Course& course, const CodeSet& certify) {
        for (const auto& term_id : engine_.horizon_) {
            const auto* term = engine_.catalog_.find_term(term_id);
            if (!term || !term->offered.count(course.code)) continue;
            if (student_.registered_credits(engine_.catalog_, term_id) + course.credits > engine_.config_.credit_cap) {
                continue;
            }
            if (!certify.empty()) out_.effects.emplace_back(SelfCertified{certify});
            out_.effects.emplace_back(Registered{course.code, term_id});
            say("registered", {{"course", course.code.str()}, {"title", course.title}, {"term", term_id.str()}});
            say("more_requests");
            go(Phase::AwaitingMoreRequests);
            return true;
        }
        return false;
    }

    void confirm(bool yes) {
        const Phase phase = session_.state.phase;
        if (phase == Phase::AwaitingMoreRequests) {
            if (yes) {
                say("what_else");
                go(Phase::AwaitingCommand);
            } else {
                say("farewell");
                go(Phase::Idle);
            }
            return;
        }
        if (phase != Phase::AwaitingPrereqConfirmation || !session_.state.pending) {
            say("not_understood");
            return;
        }
        const auto& pending = *session_.state.pending;
        const auto* course = engine_.catalog_.find_course(pending.course);
        if (yes) {
            if (course && commit(*course, pending.missing)) return;
            say("not_offered", {{"course", pending.course.str()}});
            say("what_else");
            go(Phase::AwaitingCommand);
            return;
        }
        if (auto plan = make_plan({pending.course})) {
            say("plan_for_missing", {{"prereqs", join_codes(pending.missing)},
                                     {"terms", std::to_string(plan->total_terms)}});
            out_.displays.push_back({DisplayKind::Plan, plan_rows(engine_.catalog_, *plan)});
            say("more_requests");
            go(Phase::AwaitingMoreRequests);
        } else {
            go(Phase::AwaitingCommand);
        }
    }

    void query_prerequisites(const Intent& intent) {
        if (!has_course_slot(intent)) {
            say("ask_course_query");
            return;
        }
        auto course = resolve_course(intent);
        if (!course) return;
        if (course->prerequisites.empty()) {
            say("no_prereqs", {{"course", course->code.str()}});
            return;
        }
        say("prereq_list", {{"course", course->code.str()}, {"prereqs", join_codes(course->prerequisites)}});
        out_.displays.push_back({DisplayKind::PrereqList, prereq_rows(course->prerequisites)});
    }

    void plan_degree(const Intent& intent) {
        CodeSet targets;
        if (auto code = intent.slot(slot::kCourseCode)) {
            auto course = lookup_course(engine_.catalog_, *code);
            if (!course) {
                say("unknown_course", {{"mention", *code}});
                return;
            }
            if (!student_.completed.count(course->code)) targets.insert(course->code);
        } else {
            const auto* program = current_program();
            if (!program) {
                say("ask_program");
                go(Phase::AwaitingProgram);
                return;
            }
            for (const auto& c : courses_for_program(engine_.catalog_, program->id)) {
                if (!student_.is_satisfied(c.code) && !student_.is_registered(c.code)) targets.insert(c.code);
            }
        }
        go(Phase::AwaitingCommand);
        if (targets.empty()) {
            say("plan_empty");
            return;
        }
        if (auto plan = make_plan(targets)) {
            say("plan_ready", {{"terms", std::to_string(plan->total_terms)}});
            out_.displays.push_back({DisplayKind::Plan, plan_rows(engine_.catalog_, *plan)});
        }
    }

    std::optional<SemesterPlan> make_plan(const CodeSet& targets) {
        PlanConstraints constraints{engine_.config_.credit_cap, engine_.horizon_};
        try {
            return plan_semesters(engine_.catalog_, student_, targets, constraints);
        } catch (const Infeasible& e) {
            switch (e.kind()) {
                case InfeasibleKind::NotOffered: say("infeasible_not_offered", {{"course", e.course()}}); break;
                case InfeasibleKind::ExceedsCreditCap: say("infeasible_credit_cap", {{"course", e.course()}}); break;
                case InfeasibleKind::HorizonTooShort: say("infeasible_horizon"); break;
                case InfeasibleKind::NoAssignment: say("infeasible_no_assignment"); break;
            }
        } catch (const InvalidPlanRequest&) {
            say("infeasible_no_assignment");
        }
        return std::nullopt;
    }

    nlohmann::ordered_json prereq_rows(const CodeSet& codes) const {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& code : codes) {
            const auto* c = engine_.catalog_.find_course(code);
            rows.push_back({{"code", code.str()},
                            {"title", c ? c->title : std::string()},
                            {"satisfied", student_.is_satisfied(code)}});
        }
        return rows;
    }

    const DialogEngine& engine_;
    const DialogSession& session_;
    const StudentRecord& student_;
    AgentResponse out_;
};

AgentResponse DialogEngine::step(const DialogSession& session, const Intent& intent) const {
    Turn turn(*this, session);
    turn.handle(intent);
    return turn.finish();
}

AgentResponse DialogEngine::reprompt(const DialogSession& session, std::string_view key) const {
    Turn turn(*this, session);
    turn.say(std::string(key));
    return turn.finish();
}

AgentResponse step(const DialogSession& session, const Intent& intent, const CourseCatalog& catalog) {
    return DialogEngine(catalog).step(session, intent);
}

}  // namespace dona
