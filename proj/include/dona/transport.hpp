#pragma once

// Speech boundary: confidence-tagged utterances in, say/display events out,
// one JSON record per line.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dona/error.hpp"

namespace dona {

inline constexpr double kDefaultThreshold = 0.5;

struct UtteranceEvent {
    std::string text;
    double confidence = 1.0;
    std::string lang = "en";
    std::int64_t timestamp_ms = 0;  // 0 when the producer did not stamp it

    friend bool operator==(const UtteranceEvent&, const UtteranceEvent&) = default;
};

enum class DisplayKind : std::uint8_t { CourseTable, PrereqList, Plan };

std::string_view to_string(DisplayKind kind);

// Rows keep insertion order so serialization is byte-stable.
struct Display {
    DisplayKind kind = DisplayKind::CourseTable;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();

    friend bool operator==(const Display&, const Display&) = default;
};

struct Say {
    std::string text;

    friend bool operator==(const Say&, const Say&) = default;
};

using OutputEvent = std::variant<Say, Display>;

struct Accepted {
    std::string text;
    std::string lang;
};

struct Rejected {
    // Template key of the reprompt the agent should speak.
    std::string reprompt_key = "reprompt";
};

using GateResult = std::variant<Accepted, Rejected>;

// Accepted iff confidence >= threshold and the trimmed text is nonempty.
GateResult gate(const UtteranceEvent& event, double threshold);

// Throws WireError on malformed records.
UtteranceEvent read_event(std::string_view line);
std::string write_utterance(const UtteranceEvent& event);
std::string write_event(const OutputEvent& event);

nlohmann::ordered_json to_json(const Display& display);

}  // namespace dona
