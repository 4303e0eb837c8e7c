#include "dona/agent.hpp"

#include <chrono>

namespace dona {

std::int64_t system_clock_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

Agent::Agent(const DialogEngine& engine, double threshold, Clock clock)
    : engine_(engine), threshold_(threshold), clock_(std::move(clock)) {
    if (!(threshold_ >= 0.0 && threshold_ <= 1.0)) throw Error("InvalidThreshold", "threshold must be in [0,1]");
}

void record_transcript(DialogSession& session, const TurnRecord& record) {
    if (record.accepted) {
        session.transcript.push_back({Speaker::User, record.utterance.text, record.user_ts, 0});
    }
    if (!record.response.say.empty()) {
        session.transcript.push_back({Speaker::Agent, record.response.say, record.agent_ts, record.latency_ms});
    }
}

TurnRecord Agent::handle(DialogSession& session, const UtteranceEvent& event) const {
    TurnRecord record;
    record.utterance = event;
    const auto started = clock_();
    record.user_ts = event.timestamp_ms != 0 ? event.timestamp_ms : started;

    auto verdict = gate(event, threshold_);
    if (const auto* ok = std::get_if<Accepted>(&verdict)) {
        record.accepted = true;
        session.locale = ok->lang;
        record.intent = parse_intent(tokenize(ok->text), engine_.context_for(session.state), engine_.rules());
        record.response = engine_.step(session, *record.intent);
    } else {
        record.response = engine_.reprompt(session, std::get<Rejected>(verdict).reprompt_key);
    }
    apply(session, record.response);

    record.agent_ts = clock_();
    record.latency_ms = record.agent_ts - started;
    record_transcript(session, record);
    return record;
}

AgentResponse Agent::replay(DialogSession& session, const TurnRecord& record) const {
    AgentResponse response;
    if (record.accepted && record.intent) {
        session.locale = record.utterance.lang;
        response = engine_.step(session, *record.intent);
    } else {
        response = engine_.reprompt(session);
    }
    apply(session, response);
    TurnRecord replayed = record;
    replayed.response = response;
    record_transcript(session, replayed);
    return response;
}

LoopExit run_loop(DialogSession& session, const InputSource& source, const OutputSink& sink, const Agent& agent,
                  const TurnObserver& observer) {
    while (auto event = source()) {
        auto record = agent.handle(session, *event);
        if (observer) observer(session, record);
        try {
            for (const auto& out : record.response.events()) sink(out);
        } catch (const std::exception&) {
            return LoopExit::TransportFailure;
        }
        if (record.intent && record.intent->kind == IntentKind::Quit) return LoopExit::Quit;
    }
    return LoopExit::Exhausted;
}

}  // namespace dona
