#include "dona/service.hpp"

#include <algorithm>
#include <cstdio>

#include "dona/codec.hpp"

namespace dona {

using json = nlohmann::ordered_json;

ApiResult api_error(int status, std::string code, std::string message) {
    json body;
    body["status"] = status;
    body["code"] = std::move(code);
    body["message"] = std::move(message);
    return {status, std::move(body)};
}

// ---------------------------------------------------------------------------
// SessionStore

namespace {
constexpr std::string_view kSessionPrefix = "sess-";

std::string format_session_id(std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%06zu", kSessionPrefix.data(), n);
    return buf;
}
}  // namespace

std::shared_ptr<SessionStore::StudentSlot> SessionStore::student_slot(const std::string& student_id) {
    auto& slot = students_[student_id];
    if (!slot) {
        slot = std::make_shared<StudentSlot>();
        slot->record.student_id = student_id;
    }
    return slot;
}

std::shared_ptr<SessionStore::SessionSlot> SessionStore::session_slot(const std::string& session_id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(session_id);
    return it == sessions_.end() ? nullptr : it->second;
}

SessionStore::Created SessionStore::create(const std::string& student_id, const std::string& locale) {
    std::lock_guard lock(mutex_);
    auto id = format_session_id(next_id_++);
    auto slot = std::make_shared<SessionSlot>();
    slot->student = student_slot(student_id);
    slot->session.session_id = id;
    slot->session.student.student_id = student_id;
    slot->session.locale = locale;
    sessions_[id] = slot;
    return {id, slot->session};
}

void SessionStore::restore(const std::string& session_id, const std::string& student_id, const std::string& locale) {
    std::lock_guard lock(mutex_);
    if (sessions_.count(session_id)) throw ParseError("duplicate session id '" + session_id + "' in log");
    auto slot = std::make_shared<SessionSlot>();
    slot->student = student_slot(student_id);
    slot->session.session_id = session_id;
    slot->session.student.student_id = student_id;
    slot->session.locale = locale;
    sessions_[session_id] = slot;
    if (session_id.starts_with(kSessionPrefix)) {
        auto n = std::stoull(session_id.substr(kSessionPrefix.size()));
        next_id_ = std::max<std::size_t>(next_id_, n + 1);
    }
}

bool SessionStore::contains(const std::string& session_id) const { return session_slot(session_id) != nullptr; }

std::optional<DialogSession> SessionStore::snapshot(const std::string& session_id) const {
    auto slot = session_slot(session_id);
    if (!slot) return std::nullopt;
    std::lock_guard lock(slot->student->mutex);
    auto copy = slot->session;
    copy.student = slot->student->record;
    return copy;
}

std::optional<StudentRecord> SessionStore::student(const std::string& student_id) const {
    std::shared_ptr<StudentSlot> slot;
    {
        std::lock_guard lock(mutex_);
        auto it = students_.find(student_id);
        if (it == students_.end()) return std::nullopt;
        slot = it->second;
    }
    std::lock_guard lock(slot->mutex);
    return slot->record;
}

std::size_t SessionStore::session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::size_t SessionStore::student_count() const {
    std::lock_guard lock(mutex_);
    return students_.size();
}

// ---------------------------------------------------------------------------
// Service

namespace {

std::optional<json> parse_body(std::string_view body) {
    try {
        auto j = json::parse(body.begin(), body.end());
        if (j.is_object()) return j;
    } catch (const nlohmann::json::parse_error&) {
    }
    return std::nullopt;
}

json course_json(const Course& c) {
    json prereqs = json::array();
    for (const auto& p : c.prerequisites) prereqs.push_back(p.str());
    return {{"code", c.code.str()},
            {"title", c.title},
            {"credits", c.credits},
            {"program_ids", c.program_ids},
            {"prerequisites", prereqs}};
}

json session_json(const DialogSession& s) {
    json j;
    j["session_id"] = s.session_id;
    j["student_id"] = s.student.student_id;
    auto state = codec::encode(s.state);
    j["phase"] = state["phase"];
    j["pending"] = state["pending"];
    j["locale"] = s.locale;
    j["student"] = codec::encode(s.student);
    j["turns"] = s.transcript.size();
    return j;
}

CodeSet parse_code_list(const json& body, const char* key) {
    CodeSet out;
    if (!body.contains(key)) return out;
    const auto& arr = body[key];
    if (!arr.is_array()) throw InvalidPlanRequest(std::string("\"") + key + "\" must be an array");
    for (const auto& v : arr) {
        if (!v.is_string()) throw InvalidPlanRequest(std::string("\"") + key + "\" must hold strings");
        auto code = CourseCode::parse(v.get<std::string>());
        if (!code) throw InvalidPlanRequest("malformed course code '" + v.get<std::string>() + "'");
        out.insert(*code);
    }
    return out;
}

}  // namespace

Service::Service(CourseCatalog catalog, ServiceConfig config, Clock clock)
    : catalog_(std::move(catalog)),
      config_(std::move(config)),
      engine_(catalog_, config_.dialog),
      agent_(engine_, config_.threshold, std::move(clock)) {
    if (!config_.data_dir.empty()) {
        replay_log();
        log_ = std::make_unique<SessionLog>(config_.data_dir / "sessions.ndjson");
    }
}

void Service::replay_log() {
    for (const auto& record : SessionLog::read(config_.data_dir / "sessions.ndjson")) {
        const auto type = record.at("type").get<std::string>();
        const auto id = record.at("session_id").get<std::string>();
        if (type == "session") {
            store_.restore(id, record.at("student_id").get<std::string>(), record.at("locale").get<std::string>());
        } else if (type == "turn") {
            auto turn = codec::decode_turn(record.at("turn"));
            if (!store_.update(id, [&](DialogSession& s) { agent_.replay(s, turn); })) {
                throw ParseError("log references unknown session '" + id + "'");
            }
        } else {
            throw ParseError("unknown log record type '" + type + "'");
        }
        ++replayed_;
    }
}

ApiResult Service::health() const {
    json body;
    body["status"] = "ok";
    body["courses"] = catalog_.courses.size();
    body["sessions"] = store_.session_count();
    return {200, body};
}

ApiResult Service::create_session(std::string_view body) {
    auto j = parse_body(body);
    if (!j) return api_error(400, "BadRequest", "body must be a JSON object");
    if (!j->contains("student_id") || !(*j)["student_id"].is_string() ||
        (*j)["student_id"].get<std::string>().empty()) {
        return api_error(400, "BadRequest", "\"student_id\" must be a nonempty string");
    }
    auto locale = config_.default_locale;
    if (j->contains("locale")) {
        if (!(*j)["locale"].is_string() || (*j)["locale"].get<std::string>().empty()) {
            return api_error(400, "BadRequest", "\"locale\" must be a nonempty string");
        }
        locale = (*j)["locale"].get<std::string>();
    }
    const auto student_id = (*j)["student_id"].get<std::string>();
    auto created = store_.create(student_id, locale);
    if (log_) {
        log_->append({{"type", "session"},
                      {"session_id", created.session_id},
                      {"student_id", student_id},
                      {"locale", locale}});
    }
    json out;
    out["session_id"] = created.session_id;
    out["student_id"] = student_id;
    out["phase"] = to_string(Phase::Idle);
    out["locale"] = locale;
    return {201, out};
}

ApiResult Service::get_session(const std::string& session_id) const {
    auto s = store_.snapshot(session_id);
    if (!s) return api_error(404, "UnknownSession", "no session '" + session_id + "'");
    return {200, session_json(*s)};
}

ApiResult Service::post_message(const std::string& session_id, std::string_view body) {
    if (!store_.contains(session_id)) return api_error(404, "UnknownSession", "no session '" + session_id + "'");
    auto j = parse_body(body);
    if (!j) return api_error(422, "MalformedBody", "body must be a JSON object");
    for (const auto& [key, _] : j->items()) {
        if (key != "text" && key != "confidence" && key != "lang") {
            return api_error(422, "MalformedBody", "unknown field '" + key + "'");
        }
    }
    if (!j->contains("text") || !(*j)["text"].is_string()) {
        return api_error(422, "MalformedBody", "\"text\" must be a string");
    }
    UtteranceEvent event;
    event.text = (*j)["text"].get<std::string>();
    if (j->contains("confidence")) {
        const auto& c = (*j)["confidence"];
        if (!c.is_number() || c.get<double>() < 0.0 || c.get<double>() > 1.0) {
            return api_error(422, "MalformedBody", "\"confidence\" must be a number in [0,1]");
        }
        event.confidence = c.get<double>();
    }
    bool has_lang = j->contains("lang");
    if (has_lang && (!(*j)["lang"].is_string() || (*j)["lang"].get<std::string>().empty())) {
        return api_error(422, "MalformedBody", "\"lang\" must be a nonempty string");
    }

    TurnRecord record;
    DialogState after;
    bool ok = store_.update(session_id, [&](DialogSession& s) {
        event.lang = has_lang ? (*j)["lang"].get<std::string>() : s.locale;
        record = agent_.handle(s, event);
        after = s.state;
        if (log_) log_->append({{"type", "turn"}, {"session_id", session_id}, {"turn", codec::encode(record)}});
    });
    if (!ok) return api_error(404, "UnknownSession", "no session '" + session_id + "'");

    json out;
    out["session_id"] = session_id;
    out["accepted"] = record.accepted;
    out["intent"] = record.intent ? codec::encode(*record.intent) : json(nullptr);
    auto response = codec::encode(record.response);
    out["say"] = response["say"];
    out["displays"] = response["displays"];
    out["phase_after"] = response["phase_after"];
    out["pending"] = response["pending"];
    out["effects"] = response["effects"];
    out["locale"] = response["locale"];
    out["latency_ms"] = record.latency_ms;
    return {200, out};
}

ApiResult Service::get_transcript(const std::string& session_id) const {
    auto s = store_.snapshot(session_id);
    if (!s) return api_error(404, "UnknownSession", "no session '" + session_id + "'");
    json out;
    out["session_id"] = session_id;
    out["turns"] = json::array();
    for (const auto& t : s->transcript) out["turns"].push_back(codec::encode(t));
    return {200, out};
}

ApiResult Service::plan(std::string_view body) const {
    auto j = parse_body(body);
    if (!j) return api_error(422, "MalformedBody", "body must be a JSON object");
    static constexpr std::string_view kKeys[] = {"program", "completed", "self_certified",
                                                 "targets", "credit_cap", "horizon"};
    for (const auto& [key, _] : j->items()) {
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
            return api_error(422, "MalformedBody", "unknown field '" + key + "'");
        }
    }
    try {
        StudentRecord student;
        student.completed = parse_code_list(*j, "completed");
        student.self_certified = parse_code_list(*j, "self_certified");
        CodeSet targets = parse_code_list(*j, "targets");
        for (const auto& code : student.completed) {
            if (!catalog_.find_course(code)) throw UnknownCourse(code.str());
        }

        if (j->contains("program")) {
            if (!(*j)["program"].is_string()) throw InvalidPlanRequest("\"program\" must be a string");
            student.program_id = (*j)["program"].get<std::string>();
            if (!catalog_.find_program(student.program_id)) {
                return api_error(422, "UnknownProgram", "unknown program '" + student.program_id + "'");
            }
            if (targets.empty()) {
                for (const auto& c : courses_for_program(catalog_, student.program_id)) {
                    if (!student.is_satisfied(c.code)) targets.insert(c.code);
                }
            }
        }

        PlanConstraints constraints;
        constraints.credit_cap = config_.dialog.credit_cap;
        if (j->contains("credit_cap")) {
            if (!(*j)["credit_cap"].is_number_integer()) throw InvalidPlanRequest("\"credit_cap\" must be an integer");
            constraints.credit_cap = (*j)["credit_cap"].get<int>();
        }
        if (j->contains("horizon")) {
            if (!(*j)["horizon"].is_array()) throw InvalidPlanRequest("\"horizon\" must be an array");
            for (const auto& t : (*j)["horizon"]) {
                auto id = t.is_string() ? TermId::parse(t.get<std::string>()) : std::nullopt;
                if (!id) throw InvalidPlanRequest("malformed term id " + t.dump());
                constraints.horizon.push_back(*id);
            }
        } else {
            constraints.horizon = engine_.horizon();
        }

        auto result = plan_semesters(catalog_, student, targets, constraints);
        auto out = codec::encode(catalog_, result);
        out["lower_bound"] = lower_bound(catalog_, student, targets, constraints);
        return {200, out};
    } catch (const Infeasible& e) {
        auto err = api_error(409, "Infeasible", e.what());
        err.body["reason"] = to_string(e.kind());
        err.body["course"] = e.course().empty() ? json(nullptr) : json(e.course());
        return err;
    } catch (const Error& e) {
        return api_error(422, e.code(), e.what());
    }
}

ApiResult Service::list_programs() const {
    json out = json::array();
    auto programs = catalog_.programs;
    std::sort(programs.begin(), programs.end(), [](const Program& a, const Program& b) { return a.id < b.id; });
    for (const auto& p : programs) {
        out.push_back({{"id", p.id}, {"name", p.name}, {"required_credits", p.required_credits}});
    }
    return {200, out};
}

ApiResult Service::list_courses(const std::optional<std::string>& program) const {
    std::vector<Course> courses;
    if (program) {
        try {
            courses = courses_for_program(catalog_, *program);
        } catch (const UnknownProgram& e) {
            return api_error(404, e.code(), e.what());
        }
    } else {
        courses = catalog_.courses;
        std::sort(courses.begin(), courses.end(), [](const Course& a, const Course& b) { return a.code < b.code; });
    }
    json out = json::array();
    for (const auto& c : courses) out.push_back(course_json(c));
    return {200, out};
}

ApiResult Service::get_course(const std::string& code) const {
    auto course = lookup_course(catalog_, code);
    if (!course) return api_error(404, "UnknownCourse", "unknown course '" + code + "'");
    return {200, course_json(*course)};
}

ApiResult Service::get_prerequisites(const std::string& code) const {
    auto course = lookup_course(catalog_, code);
    if (!course) return api_error(404, "UnknownCourse", "unknown course '" + code + "'");
    json direct = json::array();
    for (const auto& p : course->prerequisites) direct.push_back(p.str());
    json transitive = json::array();
    for (const auto& p : prerequisite_closure(catalog_, course->code)) transitive.push_back(p.str());
    return {200, {{"code", course->code.str()}, {"direct", direct}, {"transitive", transitive}}};
}

}  // namespace dona
