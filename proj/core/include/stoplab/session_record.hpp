#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stoplab/instance.hpp"
#include "stoplab/json.hpp"
#include "stoplab/payoff.hpp"
#include "stoplab/trial.hpp"

namespace stoplab {

enum class SessionState { kCreated, kInProgress, kFinalized };
/// kValues shows each revealed value; kRelativeOnly shows only the
/// best-so-far flag.
enum class RevealPolicy { kValues, kRelativeOnly };

std::string_view to_string(SessionState s);
SessionState parse_session_state(std::string_view text);
std::string_view to_string(RevealPolicy p);
RevealPolicy parse_reveal_policy(std::string_view text);

struct SessionConfig {
  int n = 10;
  /// Used for post-hoc scoring only; never shown during play.
  PayoffParams params;
  RevealPolicy reveal_policy = RevealPolicy::kValues;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

Json config_to_json(const SessionConfig& config);
SessionConfig config_from_json(const Json& j);

enum class EventKind { kCreated, kRevealed, kDecision, kFinalized };
std::string_view to_string(EventKind k);

struct CreatedPayload {
  SessionConfig config;
  /// Present in the server journal; withheld from exports of open sessions.
  std::optional<SequenceInstance> instance;

  friend bool operator==(const CreatedPayload&, const CreatedPayload&) = default;
};

struct RevealedPayload {
  std::string value;
  bool is_candidate = false;
  int n = 0;

  friend bool operator==(const RevealedPayload&, const RevealedPayload&) = default;
};

struct DecisionPayload {
  Decision choice = Decision::kPass;
  /// Client-supplied extras (e.g. decision latency), logged verbatim. Null if absent.
  Json metadata;

  friend bool operator==(const DecisionPayload&, const DecisionPayload&) = default;
};

struct FinalizedPayload {
  OutcomeClass outcome_class = OutcomeClass::kNoPick;
  std::optional<int> stop_index;
  int best_index = 0;
  int base_a = 0;
  std::vector<std::string> values;

  friend bool operator==(const FinalizedPayload&, const FinalizedPayload&) = default;
};

struct SessionEvent {
  int step = 0;
  std::int64_t timestamp_ms = 0;
  std::variant<CreatedPayload, RevealedPayload, DecisionPayload, FinalizedPayload> payload;

  EventKind kind() const noexcept { return static_cast<EventKind>(payload.index()); }

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

/// Whether a Created event serializes the hidden instance.
enum class Disclosure { kRedacted, kFull };

Json event_to_json(const SessionEvent& event, Disclosure disclosure);
SessionEvent event_from_json(const Json& j);

/// A session is a pure left fold of its events (see apply_event()).
struct SessionRecord {
  std::string session_id;
  SessionConfig config;
  std::optional<SequenceInstance> instance;
  std::vector<SessionEvent> events;
  SessionState state = SessionState::kCreated;
  std::optional<TrialOutcome> outcome;
  /// Number of observations revealed so far.
  int cursor = 0;
  /// A revealed observation awaits its decision.
  bool decision_pending = false;
  /// Timestamp of the Created event.
  std::int64_t created_ms = 0;

  friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

/// Applies one event, enforcing protocol order: Created, then alternating
/// Revealed/Decision, then Finalized once a stop occurred or all n were
/// passed. Throws Error(kProtocolViolation) on an illegal event.
void apply_event(SessionRecord& record, const SessionEvent& event);

SessionRecord replay_session(std::string session_id, std::span<const SessionEvent> events);

/// The Finalized event that the record's current state calls for. Requires
/// the instance and a session that is ready to finalize.
SessionEvent make_finalized_event(const SessionRecord& record, std::int64_t timestamp_ms);

/// Per-step (index, is_candidate, decision) triples recovered from events.
std::vector<StepRecord> decision_steps(const SessionRecord& record);

/// Plays `policy` through the full event protocol on `instance`, as a live
/// session would record it. Event i carries timestamp created_ms + i.
SessionRecord simulate_session(std::string session_id, const SessionConfig& config,
                               const SequenceInstance& instance, Policy& policy,
                               std::int64_t created_ms);

/// Export form: {"session_id", "state", "config", "instance" (finalized only,
/// else null), "events" (Created redacted), "outcome"}.
Json record_to_json(const SessionRecord& record);
/// Parses the export form and re-folds its events; throws Error(kParse) if
/// the stored state or outcome disagrees with the fold.
SessionRecord record_from_json(const Json& j);

Json outcome_to_json(const TrialOutcome& outcome);

}  // namespace stoplab
