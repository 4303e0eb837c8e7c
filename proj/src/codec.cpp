#include "dona/codec.hpp"

namespace dona::codec {

namespace {

json codes(const CodeSet& set) {
    json arr = json::array();
    for (const auto& c : set) arr.push_back(c.str());
    return arr;
}

CodeSet decode_codes(const json& arr) {
    CodeSet out;
    for (const auto& c : arr) out.insert(CourseCode::from_string(c.get<std::string>()));
    return out;
}

std::optional<DisplayKind> display_kind(std::string_view name) {
    for (auto k : {DisplayKind::CourseTable, DisplayKind::PrereqList, DisplayKind::Plan}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

}  // namespace

json encode(const Intent& intent) {
    json j;
    j["kind"] = to_string(intent.kind);
    j["slots"] = json::object();
    for (const auto& [k, v] : intent.slots) j["slots"][k] = v;
    j["confidence"] = intent.parse_confidence;
    return j;
}

Intent decode_intent(const json& j) {
    Intent intent;
    auto kind = intent_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("unknown intent kind " + j.at("kind").dump());
    intent.kind = *kind;
    for (const auto& [k, v] : j.at("slots").items()) intent.slots[k] = v.get<std::string>();
    intent.parse_confidence = j.at("confidence").get<double>();
    return intent;
}

json encode(const DialogState& state) {
    json j;
    j["phase"] = to_string(state.phase);
    if (state.pending) {
        j["pending"] = {{"course", state.pending->course.str()}, {"missing", codes(state.pending->missing)}};
    } else {
        j["pending"] = nullptr;
    }
    return j;
}

DialogState decode_state(const json& j) {
    DialogState state;
    auto phase = phase_from_string(j.at("phase").get<std::string>());
    if (!phase) throw ParseError("unknown phase " + j.at("phase").dump());
    state.phase = *phase;
    if (j.contains("pending") && !j["pending"].is_null()) {
        const auto& p = j["pending"];
        state.pending = PendingRegistration{CourseCode::from_string(p.at("course").get<std::string>()),
                                            decode_codes(p.at("missing"))};
    }
    return state;
}

json encode(const Effect& effect) {
    return std::visit(
        [](const auto& e) -> json {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Registered>) {
                return {{"type", "Registered"}, {"code", e.code.str()}, {"term", e.term.str()}};
            } else if constexpr (std::is_same_v<T, ProgramSet>) {
                return {{"type", "ProgramSet"}, {"id", e.id}};
            } else {
                return {{"type", "SelfCertified"}, {"courses", codes(e.courses)}};
            }
        },
        effect);
}

Effect decode_effect(const json& j) {
    auto type = j.at("type").get<std::string>();
    if (type == "Registered") {
        return Registered{CourseCode::from_string(j.at("code").get<std::string>()),
                          TermId::from_string(j.at("term").get<std::string>())};
    }
    if (type == "ProgramSet") return ProgramSet{j.at("id").get<std::string>()};
    if (type == "SelfCertified") return SelfCertified{decode_codes(j.at("courses"))};
    throw ParseError("unknown effect type '" + type + "'");
}

json encode(const Display& display) {
    json j;
    j["kind"] = to_string(display.kind);
    j["rows"] = display.rows;
    return j;
}

Display decode_display(const json& j) {
    auto kind = display_kind(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("unknown display kind " + j.at("kind").dump());
    return Display{*kind, j.at("rows")};
}

json encode(const AgentResponse& response) {
    json j;
    j["say"] = response.say;
    j["parts"] = json::array();
    for (const auto& part : response.parts) {
        json args = json::object();
        for (const auto& [k, v] : part.args) args[k] = v;
        j["parts"].push_back({{"key", part.key}, {"args", args}});
    }
    j["displays"] = json::array();
    for (const auto& d : response.displays) j["displays"].push_back(encode(d));
    auto state = encode(response.state_after);
    j["phase_after"] = state["phase"];
    j["pending"] = state["pending"];
    j["effects"] = json::array();
    for (const auto& e : response.effects) j["effects"].push_back(encode(e));
    j["locale"] = response.locale;
    return j;
}

AgentResponse decode_response(const json& j) {
    AgentResponse r;
    r.say = j.at("say").get<std::string>();
    for (const auto& p : j.at("parts")) {
        SayPart part{p.at("key").get<std::string>(), {}};
        for (const auto& [k, v] : p.at("args").items()) part.args[k] = v.get<std::string>();
        r.parts.push_back(std::move(part));
    }
    for (const auto& d : j.at("displays")) r.displays.push_back(decode_display(d));
    r.state_after = decode_state({{"phase", j.at("phase_after")}, {"pending", j.at("pending")}});
    for (const auto& e : j.at("effects")) r.effects.push_back(decode_effect(e));
    r.locale = j.at("locale").get<std::string>();
    return r;
}

json encode(const UtteranceEvent& event) {
    return {{"text", event.text},
            {"confidence", event.confidence},
            {"lang", event.lang},
            {"timestamp", event.timestamp_ms}};
}

UtteranceEvent decode_utterance(const json& j) {
    return UtteranceEvent{j.at("text").get<std::string>(), j.at("confidence").get<double>(),
                          j.at("lang").get<std::string>(), j.at("timestamp").get<std::int64_t>()};
}

json encode(const TranscriptTurn& turn) {
    json j;
    j["speaker"] = turn.speaker == Speaker::User ? "user" : "agent";
    j["text"] = turn.text;
    j["timestamp"] = turn.timestamp_ms;
    if (turn.speaker == Speaker::Agent) j["latency_ms"] = turn.latency_ms;
    return j;
}

json encode(const StudentRecord& student) {
    json j;
    j["student_id"] = student.student_id;
    j["program_id"] = student.has_program() ? json(student.program_id) : json(nullptr);
    j["completed"] = codes(student.completed);
    j["self_certified"] = codes(student.self_certified);
    j["registrations"] = json::array();
    for (const auto& r : student.registrations) {
        j["registrations"].push_back({{"term", r.term.str()}, {"code", r.code.str()}});
    }
    return j;
}

json encode(const TurnRecord& record) {
    json j;
    j["utterance"] = encode(record.utterance);
    j["accepted"] = record.accepted;
    j["intent"] = record.intent ? encode(*record.intent) : json(nullptr);
    j["response"] = encode(record.response);
    j["user_ts"] = record.user_ts;
    j["agent_ts"] = record.agent_ts;
    j["latency_ms"] = record.latency_ms;
    return j;
}

TurnRecord decode_turn(const json& j) {
    TurnRecord r;
    r.utterance = decode_utterance(j.at("utterance"));
    r.accepted = j.at("accepted").get<bool>();
    if (!j.at("intent").is_null()) r.intent = decode_intent(j.at("intent"));
    r.response = decode_response(j.at("response"));
    r.user_ts = j.at("user_ts").get<std::int64_t>();
    r.agent_ts = j.at("agent_ts").get<std::int64_t>();
    r.latency_ms = j.at("latency_ms").get<std::int64_t>();
    return r;
}

json encode(const CourseCatalog& catalog, const SemesterPlan& plan) {
    json j;
    j["total_terms"] = plan.total_terms;
    j["terms"] = plan_rows(catalog, plan);
    return j;
}

}  // namespace dona::codec
