#include "dona/transport.hpp"

#include <cctype>

namespace dona {

std::string_view to_string(DisplayKind kind) {
    switch (kind) {
        case DisplayKind::CourseTable: return "course_table";
        case DisplayKind::PrereqList: return "prereq_list";
        case DisplayKind::Plan: return "plan";
    }
    return "?";
}

namespace {
std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}
}  // namespace

GateResult gate(const UtteranceEvent& event, double threshold) {
    auto text = trim(event.text);
    if (text.empty() || event.confidence < threshold) return Rejected{};
    return Accepted{std::move(text), event.lang};
}

UtteranceEvent read_event(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line.begin(), line.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw WireError(std::string("malformed record: ") + e.what());
    }
    if (!j.is_object()) throw WireError("record must be an object");
    if (!j.contains("type") || j["type"] != "utterance") throw WireError("expected type \"utterance\"");
    for (const auto& [key, _] : j.items()) {
        if (key != "type" && key != "text" && key != "confidence" && key != "lang" && key != "timestamp") {
            throw WireError("unknown field '" + key + "'");
        }
    }
    if (!j.contains("text") || !j["text"].is_string()) throw WireError("\"text\" must be a string");

    UtteranceEvent ev;
    ev.text = j["text"].get<std::string>();
    if (j.contains("confidence")) {
        if (!j["confidence"].is_number()) throw WireError("\"confidence\" must be a number");
        ev.confidence = j["confidence"].get<double>();
        if (!(ev.confidence >= 0.0 && ev.confidence <= 1.0)) throw WireError("\"confidence\" outside [0,1]");
    }
    if (j.contains("lang")) {
        if (!j["lang"].is_string() || j["lang"].get<std::string>().empty()) {
            throw WireError("\"lang\" must be a nonempty string");
        }
        ev.lang = j["lang"].get<std::string>();
    }
    if (j.contains("timestamp")) {
        if (!j["timestamp"].is_number_integer()) throw WireError("\"timestamp\" must be an integer");
        ev.timestamp_ms = j["timestamp"].get<std::int64_t>();
    }
    return ev;
}

std::string write_utterance(const UtteranceEvent& event) {
    nlohmann::ordered_json j;
    j["type"] = "utterance";
    j["text"] = event.text;
    j["confidence"] = event.confidence;
    j["lang"] = event.lang;
    if (event.timestamp_ms != 0) j["timestamp"] = event.timestamp_ms;
    return j.dump();
}

nlohmann::ordered_json to_json(const Display& display) {
    nlohmann::ordered_json j;
    j["type"] = "display";
    j["kind"] = to_string(display.kind);
    j["rows"] = display.rows;
    return j;
}

std::string write_event(const OutputEvent& event) {
    if (const auto* say = std::get_if<Say>(&event)) {
        nlohmann::ordered_json j;
        j["type"] = "say";
        j["text"] = say->text;
        return j.dump();
    }
    return to_json(std::get<Display>(event)).dump();
}

}  // namespace dona
