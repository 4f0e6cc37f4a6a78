#include "stoplab/session_record.hpp"

#include <string>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "stoplab/error.hpp"

namespace stoplab {
namespace {

[[noreturn]] void violation(const std::string& what) { fail(ErrorCode::kProtocolViolation, what); }

}  // namespace

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::kCreated: return "Created";
    case SessionState::kInProgress: return "InProgress";
    case SessionState::kFinalized: return "Finalized";
  }
  return "Created";
}

SessionState parse_session_state(std::string_view text) {
  if (text == "Created") return SessionState::kCreated;
  if (text == "InProgress") return SessionState::kInProgress;
  if (text == "Finalized") return SessionState::kFinalized;
  fail(ErrorCode::kParse, "unknown session state \"" + std::string(text) + "\"");
}

std::string_view to_string(RevealPolicy p) {
  return p == RevealPolicy::kValues ? "values" : "relative_only";
}

RevealPolicy parse_reveal_policy(std::string_view text) {
  if (text == "values") return RevealPolicy::kValues;
  if (text == "relative_only") return RevealPolicy::kRelativeOnly;
  fail(ErrorCode::kInvalidArgument,
       "reveal_policy must be \"values\" or \"relative_only\", got \"" + std::string(text) + "\"");
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kCreated: return "Created";
    case EventKind::kRevealed: return "Revealed";
    case EventKind::kDecision: return "Decision";
    case EventKind::kFinalized: return "Finalized";
  }
  return "Created";
}

Json config_to_json(const SessionConfig& config) {
  Json j;
  j["n"] = config.n;
  j["params"] = params_to_json(config.params);
  j["reveal_policy"] = to_string(config.reveal_policy);
  j["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
  return j;
}

SessionConfig config_from_json(const Json& j) {
  // Omitted fields take their defaults: classical payoffs, values shown.
  try {
    if (!j.is_object()) fail(ErrorCode::kParse, "session config must be a JSON object");
    SessionConfig c;
    c.n = j.at("n").get<int>();
    if (j.contains("params")) {
      const auto& p = j.at("params");
      c.params.alpha = p.value("alpha", 1.0);
      c.params.beta = p.value("beta", 0.0);
      c.params.gamma = p.value("gamma", 0.0);
    }
    if (j.contains("reveal_policy")) {
      c.reveal_policy = parse_reveal_policy(j.at("reveal_policy").get<std::string>());
    }
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("invalid session config: ") + e.what());
  }
}

Json outcome_to_json(const TrialOutcome& outcome) {
  Json j;
  j["stop_index"] = outcome.stop_index ? Json(*outcome.stop_index) : Json(nullptr);
  j["outcome_class"] = to_string(outcome.outcome_class);
  j["duration"] = outcome.duration;
  j["payoff"] = outcome.payoff;
  return j;
}

namespace {

TrialOutcome outcome_from_json(const Json& j) {
  TrialOutcome o;
  if (!j.at("stop_index").is_null()) o.stop_index = j.at("stop_index").get<int>();
  o.outcome_class = parse_outcome_class(j.at("outcome_class").get<std::string>());
  o.duration = j.at("duration").get<int>();
  o.payoff = j.at("payoff").get<double>();
  return o;
}

}  // namespace

Json event_to_json(const SessionEvent& event, Disclosure disclosure) {
  Json j;
  j["step"] = event.step;
  j["kind"] = to_string(event.kind());
  j["ts"] = event.timestamp_ms;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CreatedPayload>) {
          j["config"] = config_to_json(p.config);
          if (disclosure == Disclosure::kFull && p.instance) {
            j["instance"] = instance_to_json(*p.instance);
          }
        } else if constexpr (std::is_same_v<T, RevealedPayload>) {
          j["value"] = p.value;
          j["is_candidate"] = p.is_candidate;
          j["n"] = p.n;
        } else if constexpr (std::is_same_v<T, DecisionPayload>) {
          j["choice"] = to_string(p.choice);
          if (!p.metadata.is_null()) j["metadata"] = p.metadata;
        } else {
          j["outcome_class"] = to_string(p.outcome_class);
          j["stop_index"] = p.stop_index ? Json(*p.stop_index) : Json(nullptr);
          j["best_index"] = p.best_index;
          j["base_a"] = p.base_a;
          j["values"] = p.values;
        }
      },
      event.payload);
  return j;
}

SessionEvent event_from_json(const Json& j) {
  SessionEvent e;
  e.step = j.at("step").get<int>();
  e.timestamp_ms = j.value("ts", std::int64_t{0});
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "Created") {
    CreatedPayload p;
    p.config = config_from_json(j.at("config"));
    if (j.contains("instance") && !j.at("instance").is_null()) {
      p.instance = instance_from_json(j.at("instance"));
    }
    e.payload = std::move(p);
  } else if (kind == "Revealed") {
    e.payload = RevealedPayload{j.at("value").get<std::string>(),
                                j.at("is_candidate").get<bool>(), j.at("n").get<int>()};
  } else if (kind == "Decision") {
    DecisionPayload p;
    p.choice = parse_decision(j.at("choice").get<std::string>());
    if (j.contains("metadata")) p.metadata = j.at("metadata");
    e.payload = std::move(p);
  } else if (kind == "Finalized") {
    FinalizedPayload p;
    p.outcome_class = parse_outcome_class(j.at("outcome_class").get<std::string>());
    if (!j.at("stop_index").is_null()) p.stop_index = j.at("stop_index").get<int>();
    p.best_index = j.at("best_index").get<int>();
    p.base_a = j.at("base_a").get<int>();
    p.values = j.at("values").get<std::vector<std::string>>();
    e.payload = std::move(p);
  } else {
    fail(ErrorCode::kParse, "unknown event kind \"" + kind + "\"");
  }
  return e;
}

void apply_event(SessionRecord& r, const SessionEvent& e) {
  const bool first = r.events.empty();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CreatedPayload>) {
          if (!first) violation("Created must be the first event");
          if (e.step != 0) violation("Created event must have step 0");
          r.config = p.config;
          r.instance = p.instance;
          if (r.instance && r.instance->n() != r.config.n) {
            violation("instance size does not match configured horizon");
          }
          r.state = SessionState::kCreated;
          r.created_ms = e.timestamp_ms;
        } else {
          if (first) violation("first event must be Created");
          if (r.state == SessionState::kFinalized) violation("event after Finalized");
          if constexpr (std::is_same_v<T, RevealedPayload>) {
            if (r.decision_pending) violation("reveal while a decision is pending");
            if (e.step != r.cursor + 1 || e.step > r.config.n) {
              violation("reveal out of order at step " + std::to_string(e.step));
            }
            if (p.n != r.config.n) violation("reveal horizon mismatch");
            if (r.instance) {
              if (r.instance->value(e.step).str() != p.value) violation("revealed value mismatch");
              const bool cand = r.instance->candidate_flags()[static_cast<std::size_t>(e.step - 1)];
              if (cand != p.is_candidate) violation("candidate flag mismatch");
            }
            r.cursor = e.step;
            r.decision_pending = true;
            r.state = SessionState::kInProgress;
          } else if constexpr (std::is_same_v<T, DecisionPayload>) {
            if (!r.decision_pending || e.step != r.cursor) {
              violation("decision without a pending observation at step " + std::to_string(e.step));
            }
            r.decision_pending = false;
          } else {
            if (r.decision_pending) violation("finalize while a decision is pending");
            const auto* last = r.events.empty() ? nullptr
                                                : std::get_if<DecisionPayload>(&r.events.back().payload);
            const bool stopped = last != nullptr && last->choice == Decision::kStop;
            const bool exhausted = last != nullptr && r.cursor == r.config.n;
            if (!stopped && !exhausted) violation("finalize before the session ended");
            const std::optional<int> stop = stopped ? std::optional<int>(r.cursor) : std::nullopt;
            if (p.stop_index != stop) violation("finalized stop index mismatch");
            if (static_cast<int>(p.values.size()) != r.config.n) {
              violation("finalized value list has wrong length");
            }
            if (!r.instance) {
              std::vector<BigInt> values;
              values.reserve(p.values.size());
              for (const auto& v : p.values) values.emplace_back(v);
              r.instance = SequenceInstance(p.base_a, std::move(values));
            } else if (values_as_strings(*r.instance) != p.values ||
                       r.instance->base_a() != p.base_a) {
              violation("finalized disclosure does not match the instance");
            }
            if (r.instance->best_index() != p.best_index) violation("best_index mismatch");
            auto outcome = classify_outcome(stop, r.instance->best_index(), r.config.n,
                                            r.config.params);
            if (outcome.outcome_class != p.outcome_class) violation("outcome class mismatch");
            r.outcome = outcome;
            r.state = SessionState::kFinalized;
          }
        }
      },
      e.payload);
  r.events.push_back(e);
}

SessionRecord replay_session(std::string session_id, std::span<const SessionEvent> events) {
  SessionRecord r;
  r.session_id = std::move(session_id);
  for (const auto& e : events) apply_event(r, e);
  return r;
}

SessionEvent make_finalized_event(const SessionRecord& r, std::int64_t timestamp_ms) {
  if (!r.instance) violation("cannot finalize without the instance");
  const auto* last =
      r.events.empty() ? nullptr : std::get_if<DecisionPayload>(&r.events.back().payload);
  if (last == nullptr || r.decision_pending) violation("no decision to finalize on");
  const bool stopped = last->choice == Decision::kStop;
  if (!stopped && r.cursor != r.config.n) violation("session has not ended");
  const std::optional<int> stop = stopped ? std::optional<int>(r.cursor) : std::nullopt;
  const auto outcome = classify_outcome(stop, r.instance->best_index(), r.config.n, r.config.params);

  SessionEvent e;
  e.step = r.cursor;
  e.timestamp_ms = timestamp_ms;
  e.payload = FinalizedPayload{outcome.outcome_class, stop, r.instance->best_index(),
                               r.instance->base_a(), values_as_strings(*r.instance)};
  return e;
}

std::vector<StepRecord> decision_steps(const SessionRecord& r) {
  std::vector<StepRecord> out;
  bool candidate = false;
  for (const auto& e : r.events) {
    if (const auto* rev = std::get_if<RevealedPayload>(&e.payload)) {
      candidate = rev->is_candidate;
    } else if (const auto* dec = std::get_if<DecisionPayload>(&e.payload)) {
      out.push_back({e.step, candidate, dec->choice});
    }
  }
  return out;
}

Json record_to_json(const SessionRecord& r) {
  Json j;
  j["session_id"] = r.session_id;
  j["state"] = to_string(r.state);
  j["config"] = config_to_json(r.config);
  j["instance"] = r.state == SessionState::kFinalized && r.instance ? instance_to_json(*r.instance)
                                                                    : Json(nullptr);
  Json events = Json::array();
  for (const auto& e : r.events) events.push_back(event_to_json(e, Disclosure::kRedacted));
  j["events"] = std::move(events);
  j["outcome"] = r.outcome ? outcome_to_json(*r.outcome) : Json(nullptr);
  return j;
}

SessionRecord record_from_json(const Json& j) {
  try {
    std::vector<SessionEvent> events;
    for (const auto& ej : j.at("events")) events.push_back(event_from_json(ej));
    if (!j.at("instance").is_null() && !events.empty()) {
      if (auto* created = std::get_if<CreatedPayload>(&events.front().payload)) {
        created->instance = instance_from_json(j.at("instance"));
      }
    }
    auto record = replay_session(j.at("session_id").get<std::string>(), events);
    if (to_string(record.state) != j.at("state").get<std::string>()) {
      fail(ErrorCode::kParse, "stored state disagrees with its events");
    }
    const auto& oj = j.at("outcome");
    const std::optional<TrialOutcome> stored =
        oj.is_null() ? std::nullopt : std::optional<TrialOutcome>(outcome_from_json(oj));
    if (stored != record.outcome) fail(ErrorCode::kParse, "stored outcome disagrees with its events");
    if (config_to_json(record.config) != j.at("config")) {
      fail(ErrorCode::kParse, "stored config disagrees with its Created event");
    }
    return record;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed session record: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    fail(ErrorCode::kParse, std::string("invalid session record: ") + e.what());
  }
}

SessionRecord simulate_session(std::string session_id, const SessionConfig& config,
                               const SequenceInstance& instance, Policy& policy,
                               std::int64_t created_ms) {
  SessionRecord r;
  r.session_id = std::move(session_id);
  std::int64_t ts = created_ms;
  SessionEvent e;
  e.step = 0;
  e.timestamp_ms = ts++;
  e.payload = CreatedPayload{config, instance};
  apply_event(r, e);

  const auto flags = instance.candidate_flags();
  for (int step = 1; step <= config.n; ++step) {
    const bool cand = flags[static_cast<std::size_t>(step - 1)];
    e.step = step;
    e.timestamp_ms = ts++;
    e.payload = RevealedPayload{instance.value(step).str(), cand, config.n};
    apply_event(r, e);
    const Decision d = policy.decide(Observation{step, config.n, cand});
    e.timestamp_ms = ts++;
    e.payload = DecisionPayload{d, nullptr};
    apply_event(r, e);
    if (d == Decision::kStop) break;
  }
  apply_event(r, make_finalized_event(r, ts));
  return r;
}

}  // namespace stoplab
