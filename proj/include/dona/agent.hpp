#pragma once

// The take-command / respond loop: gate -> tokenize -> parse -> step ->
// apply, with transcript bookkeeping.

#include <cstdint>
#include <functional>
#include <optional>

#include "dona/dialog.hpp"
#include "dona/transport.hpp"

namespace dona {

using Clock = std::function<std::int64_t()>;

// Milliseconds since the Unix epoch.
std::int64_t system_clock_ms();

// Everything needed to reproduce one turn. Persisted to the session log.
struct TurnRecord {
    UtteranceEvent utterance;
    bool accepted = false;
    std::optional<Intent> intent;  // set iff accepted
    AgentResponse response;
    std::int64_t user_ts = 0;
    std::int64_t agent_ts = 0;
    std::int64_t latency_ms = 0;
};

class Agent {
public:
    Agent(const DialogEngine& engine, double threshold = kDefaultThreshold, Clock clock = system_clock_ms);

    // Runs one utterance through the pipeline and mutates `session`.
    TurnRecord handle(DialogSession& session, const UtteranceEvent& event) const;

    // Re-applies a recorded turn: recomputes the response from the recorded
    // intent (rejected turns reprompt) and restores recorded timestamps.
    // Returns the recomputed response.
    AgentResponse replay(DialogSession& session, const TurnRecord& record) const;

    const DialogEngine& engine() const noexcept { return engine_; }
    double threshold() const noexcept { return threshold_; }

private:
    const DialogEngine& engine_;
    double threshold_;
    Clock clock_;
};

// Appends the user/agent turns for `record` to the transcript.
void record_transcript(DialogSession& session, const TurnRecord& record);

using InputSource = std::function<std::optional<UtteranceEvent>()>;
using OutputSink = std::function<void(const OutputEvent&)>;
using TurnObserver = std::function<void(const DialogSession&, const TurnRecord&)>;

enum class LoopExit { Quit, Exhausted, TransportFailure };

// Takes commands until the source is exhausted or a Quit intent is handled.
// The observer (persistence) sees each turn before its output is emitted, so
// a failing sink still leaves the session persisted.
LoopExit run_loop(DialogSession& session, const InputSource& source, const OutputSink& sink,
                  const Agent& agent, const TurnObserver& observer = {});

}  // namespace dona
