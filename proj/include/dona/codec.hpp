#pragma once

// JSON encodings shared by the session log and the HTTP API.
// Key order is fixed so encoded output is byte-stable.

#include <json.hpp>

#include "dona/agent.hpp"
#include "dona/dialog.hpp"
#include "dona/planner.hpp"

namespace dona::codec {

using json = nlohmann::ordered_json;

json encode(const Intent& intent);
Intent decode_intent(const json& j);

json encode(const DialogState& state);
DialogState decode_state(const json& j);

json encode(const Effect& effect);
Effect decode_effect(const json& j);

json encode(const Display& display);
Display decode_display(const json& j);

json encode(const AgentResponse& response);
AgentResponse decode_response(const json& j);

json encode(const UtteranceEvent& event);
UtteranceEvent decode_utterance(const json& j);

json encode(const TranscriptTurn& turn);
json encode(const StudentRecord& student);

json encode(const TurnRecord& record);
TurnRecord decode_turn(const json& j);

json encode(const CourseCatalog& catalog, const SemesterPlan& plan);

}  // namespace dona::codec
