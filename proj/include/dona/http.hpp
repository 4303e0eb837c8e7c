#pragma once

namespace httplib {
class Server;
}

namespace dona {

class Service;

// Routes:
//   GET  /health
//   POST /sessions                          {student_id, locale?}
//   GET  /sessions/{id}
//   POST /sessions/{id}/messages            {text, confidence?, lang?}
//   GET  /sessions/{id}/transcript
//   POST /plan                              {program?, completed?, self_certified?, targets?, credit_cap?, horizon?}
//   GET  /catalog/programs
//   GET  /catalog/courses[?program=ID]
//   GET  /catalog/courses/{code}
//   GET  /catalog/courses/{code}/prerequisites
void bind_routes(httplib::Server& server, Service& service);

}  // namespace dona
