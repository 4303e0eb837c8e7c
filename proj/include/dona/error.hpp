#pragma once

#include <stdexcept>
#include <string>

namespace dona {

// Root of every exception the library throws. `code()` is a stable
// machine-readable identifier used by the service and CLI layers.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error("ParseError", message) {}
};

class UnknownProgram : public Error {
public:
    explicit UnknownProgram(const std::string& id)
        : Error("UnknownProgram", "unknown program '" + id + "'"), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownCourse : public Error {
public:
    explicit UnknownCourse(const std::string& code)
        : Error("UnknownCourse", "unknown course '" + code + "'"), code_str_(code) {}
    const std::string& course() const noexcept { return code_str_; }

private:
    std::string code_str_;
};

class AlreadyRegistered : public Error {
public:
    explicit AlreadyRegistered(const std::string& code)
        : Error("AlreadyRegistered", "already registered for '" + code + "'"), code_str_(code) {}
    const std::string& course() const noexcept { return code_str_; }

private:
    std::string code_str_;
};

// Planner input that violates a precondition (bad horizon, cap, completed target).
class InvalidPlanRequest : public Error {
public:
    explicit InvalidPlanRequest(const std::string& message) : Error("InvalidPlanRequest", message) {}
};

class WireError : public Error {
public:
    explicit WireError(const std::string& message) : Error("WireError", message) {}
};

class MissingPlaceholder : public Error {
public:
    MissingPlaceholder(const std::string& key, const std::string& name)
        : Error("MissingPlaceholder", "template '" + key + "' needs placeholder '" + name + "'"),
          name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

}  // namespace dona
