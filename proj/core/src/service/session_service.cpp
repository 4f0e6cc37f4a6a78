#include "stoplab/service/session_service.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "stoplab/error.hpp"
#include "stoplab/session_log.hpp"
#include "stoplab/solver.hpp"

namespace stoplab::service {

std::string random_session_id() {
  static thread_local std::random_device device;
  std::uint64_t hi = (static_cast<std::uint64_t>(device()) << 32) | device();
  std::uint64_t lo = (static_cast<std::uint64_t>(device()) << 32) | device();
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {
  if (options_.horizon_cap < 1) fail(ErrorCode::kInvalidArgument, "horizon cap must be >= 1");
  const auto entries = EventJournal::load(options_.log_dir);
  for (auto& record : fold_journal(entries)) {
    auto s = std::make_shared<Slot>();
    s->record = std::move(record);
    publish(*s);
    order_.push_back(s->record.session_id);
    slots_.emplace(s->record.session_id, std::move(s));
  }
  const std::uint64_t next = entries.empty() ? 1 : entries.back().seq + 1;
  journal_ = std::make_unique<EventJournal>(options_.log_dir, next);
}

SessionService::~SessionService() { shutdown(); }

void SessionService::shutdown() {
  if (journal_) journal_->close();
}

void SessionService::publish(Slot& s) {
  std::atomic_store(&s.published, std::make_shared<const SessionRecord>(s.record));
}

std::shared_ptr<SessionService::Slot> SessionService::slot(const std::string& id) const {
  std::shared_lock lock(map_mutex_);
  const auto it = slots_.find(id);
  if (it == slots_.end()) fail(ErrorCode::kNotFound, "unknown session " + id);
  return it->second;
}

void SessionService::commit(Slot& s, const SessionEvent& event) {
  SessionRecord next = s.record;
  apply_event(next, event);  // validate before it reaches the journal
  journal_->append(next.session_id, event);
  s.record = std::move(next);
}

SessionRecord SessionService::create_session(const SessionConfig& config) {
  config.params.validate();
  if (config.n < 1) fail(ErrorCode::kInvalidArgument, "horizon n must be >= 1");
  if (config.n > options_.horizon_cap) {
    fail(ErrorCode::kHorizonCapExceeded, "horizon n=" + std::to_string(config.n) +
                                             " exceeds the cap of " +
                                             std::to_string(options_.horizon_cap));
  }
  std::uint64_t seed = 0;
  if (config.seed) {
    seed = *config.seed;
  } else {
    std::random_device device;
    seed = (static_cast<std::uint64_t>(device()) << 32) | device();
  }

  auto s = std::make_shared<Slot>();
  s->record.session_id = random_session_id();
  SessionEvent created;
  created.step = 0;
  created.timestamp_ms = now_ms();
  created.payload = CreatedPayload{config, gen_instance(config.n, seed)};

  std::lock_guard session_lock(s->mutex);
  commit(*s, created);
  publish(*s);
  {
    std::unique_lock lock(map_mutex_);
    order_.push_back(s->record.session_id);
    slots_.emplace(s->record.session_id, s);
  }
  return s->record;
}

RevealView SessionService::next_observation(const std::string& id) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  const auto& r = s->record;
  if (r.state == SessionState::kFinalized) fail(ErrorCode::kSessionFinalized, "session is finalized");
  if (r.decision_pending) {
    fail(ErrorCode::kDecisionRequired, "decision required for step " + std::to_string(r.cursor));
  }
  const int step = r.cursor + 1;
  const auto& values = r.instance->values();
  bool candidate = true;
  for (int k = 1; k < step; ++k) {
    if (values[static_cast<std::size_t>(k - 1)] > values[static_cast<std::size_t>(step - 1)]) {
      candidate = false;
      break;
    }
  }
  SessionEvent e;
  e.step = step;
  e.timestamp_ms = now_ms();
  e.payload = RevealedPayload{r.instance->value(step).str(), candidate, r.config.n};
  commit(*s, e);
  publish(*s);

  RevealView view;
  view.session_id = id;
  view.step = step;
  view.n = s->record.config.n;
  view.is_candidate = candidate;
  if (s->record.config.reveal_policy == RevealPolicy::kValues) {
    view.value = std::get<RevealedPayload>(e.payload).value;
  }
  return view;
}

SessionRecord SessionService::decide(const std::string& id, Decision choice, Json metadata) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  const auto& r = s->record;
  if (r.state == SessionState::kFinalized) fail(ErrorCode::kSessionFinalized, "session is finalized");
  if (!r.decision_pending) fail(ErrorCode::kNoPendingObservation, "no observation awaits a decision");

  SessionEvent e;
  e.step = r.cursor;
  e.timestamp_ms = now_ms();
  e.payload = DecisionPayload{choice, std::move(metadata)};
  commit(*s, e);
  if (choice == Decision::kStop || s->record.cursor == s->record.config.n) {
    commit(*s, make_finalized_event(s->record, now_ms()));
  }
  publish(*s);
  return s->record;
}

ResultView SessionService::result(const std::string& id) const {
  const auto r = find(id);
  if (r->state != SessionState::kFinalized) fail(ErrorCode::kNotFinalized, "session is not finalized");
  ResultView v;
  v.session_id = id;
  v.outcome = *r->outcome;
  v.best_index = r->instance->best_index();
  v.base_a = r->instance->base_a();
  v.values = values_as_strings(*r->instance);
  v.k_star = threshold(r->config.params, r->config.n);
  ThresholdPolicy policy(v.k_star);
  v.counterfactual = run_trial(*r->instance, policy, r->config.params).outcome;
  return v;
}

std::shared_ptr<const SessionRecord> SessionService::find(const std::string& id) const {
  auto s = slot(id);
  return std::atomic_load(&s->published);
}

std::vector<std::shared_ptr<const SessionRecord>> SessionService::snapshot() const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::shared_lock lock(map_mutex_);
    slots.reserve(order_.size());
    for (const auto& id : order_) slots.push_back(slots_.at(id));
  }
  std::vector<std::shared_ptr<const SessionRecord>> out;
  out.reserve(slots.size());
  for (const auto& s : slots) out.push_back(std::atomic_load(&s->published));
  return out;
}

std::vector<SessionRecord> SessionService::export_records(const ExportFilter& filter) const {
  std::vector<SessionRecord> out;
  for (const auto& r : snapshot()) {
    if (filter.since_ms && r->created_ms < *filter.since_ms) continue;
    if (r->state != SessionState::kFinalized && !filter.include_open) continue;
    out.push_back(*r);
  }
  return out;
}

void SessionService::export_log(std::ostream& out, const ExportFilter& filter) const {
  const auto records = export_records(filter);
  write_records_jsonl(out, records);
  out.flush();
  if (!out) fail(ErrorCode::kIo, "failed writing export stream");
}

Json redacted_json(const SessionRecord& r) {
  Json j;
  j["session_id"] = r.session_id;
  j["state"] = to_string(r.state);
  j["n"] = r.config.n;
  j["step"] = r.cursor;
  j["decision_pending"] = r.decision_pending;
  const bool show_values = r.config.reveal_policy == RevealPolicy::kValues;
  Json revealed = Json::array();
  for (const auto& e : r.events) {
    if (const auto* p = std::get_if<RevealedPayload>(&e.payload)) {
      Json item;
      item["step"] = e.step;
      item["value"] = show_values ? Json(p->value) : Json(nullptr);
      item["is_candidate"] = p->is_candidate;
      revealed.push_back(std::move(item));
    }
  }
  j["revealed"] = std::move(revealed);
  j["outcome"] = r.outcome ? outcome_to_json(*r.outcome) : Json(nullptr);
  return j;
}

Json reveal_json(const RevealView& v) {
  Json j;
  j["session_id"] = v.session_id;
  j["step"] = v.step;
  j["n"] = v.n;
  j["value"] = v.value ? Json(*v.value) : Json(nullptr);
  j["is_candidate"] = v.is_candidate;
  return j;
}

Json result_json(const ResultView& v) {
  Json j;
  j["session_id"] = v.session_id;
  j["outcome"] = outcome_to_json(v.outcome);
  j["best_index"] = v.best_index;
  j["base_a"] = v.base_a;
  j["values"] = v.values;
  j["k_star"] = v.k_star;
  j["counterfactual"] = outcome_to_json(v.counterfactual);
  return j;
}

}  // namespace stoplab::service
