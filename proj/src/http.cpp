#include "dona/http.hpp"

#include <httplib.h>

#include "dona/service.hpp"

namespace dona {

namespace {

void send(httplib::Response& res, const ApiResult& result) {
    res.status = result.status;
    res.set_content(result.body.dump(), "application/json");
}

}  // namespace

void bind_routes(httplib::Server& server, Service& service) {
    server.Get("/health", [&](const httplib::Request&, httplib::Response& res) { send(res, service.health()); });

    server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.create_session(req.body));
    });
    server.Get(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get_session(req.matches[1]));
    });
    server.Post(R"(/sessions/([^/]+)/messages)", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.post_message(req.matches[1], req.body));
    });
    server.Get(R"(/sessions/([^/]+)/transcript)", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get_transcript(req.matches[1]));
    });

    server.Post("/plan", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.plan(req.body));
    });

    server.Get("/catalog/programs", [&](const httplib::Request&, httplib::Response& res) {
        send(res, service.list_programs());
    });
    server.Get("/catalog/courses", [&](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> program;
        if (req.has_param("program")) program = req.get_param_value("program");
        send(res, service.list_courses(program));
    });
    server.Get(R"(/catalog/courses/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get_course(req.matches[1]));
    });
    server.Get(R"(/catalog/courses/([^/]+)/prerequisites)", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get_prerequisites(req.matches[1]));
    });

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        send(res, api_error(res.status, res.status == 404 ? "NotFound" : "HttpError", "no such route"));
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        send(res, api_error(500, "InternalError", message));
    });
}

}  // namespace dona
