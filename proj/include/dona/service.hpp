#pragma once

// HTTP-independent service layer: session store plus one method per
// endpoint. Each method returns a status code and a JSON body; the
// httplib binding in http.hpp only routes requests to these methods.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "dona/agent.hpp"
#include "dona/catalog.hpp"
#include "dona/dialog.hpp"
#include "dona/session_log.hpp"

namespace dona {

struct ServiceConfig {
    std::filesystem::path data_dir;  // empty: in-memory only
    double threshold = kDefaultThreshold;
    std::string default_locale{kDefaultLocale};
    DialogConfig dialog;
};

struct ApiResult {
    int status = 200;
    nlohmann::ordered_json body;
};

ApiResult api_error(int status, std::string code, std::string message);

// Sessions and student records. Updates to one student's sessions are
// serialized by a per-student mutex; distinct students proceed in parallel.
class SessionStore {
public:
    struct Created {
        std::string session_id;
        DialogSession snapshot;
    };

    Created create(const std::string& student_id, const std::string& locale);
    // Restores a session with a known id (log replay).
    void restore(const std::string& session_id, const std::string& student_id, const std::string& locale);

    bool contains(const std::string& session_id) const;
    std::optional<DialogSession> snapshot(const std::string& session_id) const;
    std::optional<StudentRecord> student(const std::string& student_id) const;
    std::size_t session_count() const;
    std::size_t student_count() const;

    // Runs `fn(session)` atomically with respect to every other update of
    // the same student. The session's student record is synced in and out.
    // Returns false when the session does not exist.
    template <class Fn>
    bool update(const std::string& session_id, Fn&& fn);

private:
    struct StudentSlot {
        std::mutex mutex;
        StudentRecord record;
    };
    struct SessionSlot {
        DialogSession session;
        std::shared_ptr<StudentSlot> student;
    };

    std::shared_ptr<StudentSlot> student_slot(const std::string& student_id);
    std::shared_ptr<SessionSlot> session_slot(const std::string& session_id) const;

    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
    std::map<std::string, std::shared_ptr<StudentSlot>> students_;
    std::size_t next_id_ = 1;
};

template <class Fn>
bool SessionStore::update(const std::string& session_id, Fn&& fn) {
    auto slot = session_slot(session_id);
    if (!slot) return false;
    std::lock_guard lock(slot->student->mutex);
    slot->session.student = slot->student->record;
    fn(slot->session);
    slot->student->record = slot->session.student;
    return true;
}

class Service {
public:
    Service(CourseCatalog catalog, ServiceConfig config = {}, Clock clock = system_clock_ms);

    ApiResult health() const;
    ApiResult create_session(std::string_view body);
    ApiResult get_session(const std::string& session_id) const;
    ApiResult post_message(const std::string& session_id, std::string_view body);
    ApiResult get_transcript(const std::string& session_id) const;
    ApiResult plan(std::string_view body) const;
    ApiResult list_programs() const;
    ApiResult list_courses(const std::optional<std::string>& program) const;
    ApiResult get_course(const std::string& code) const;
    ApiResult get_prerequisites(const std::string& code) const;

    const CourseCatalog& catalog() const noexcept { return catalog_; }
    const SessionStore& store() const noexcept { return store_; }
    // Number of log records replayed at construction.
    std::size_t replayed_records() const noexcept { return replayed_; }

private:
    void replay_log();

    CourseCatalog catalog_;
    ServiceConfig config_;
    DialogEngine engine_;
    Agent agent_;
    SessionStore store_;
    std::unique_ptr<SessionLog> log_;
    std::size_t replayed_ = 0;
};

}  // namespace dona
