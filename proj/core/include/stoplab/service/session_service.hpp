#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "stoplab/json.hpp"
#include "stoplab/service/event_journal.hpp"
#include "stoplab/session_record.hpp"

namespace stoplab::service {

struct ServiceOptions {
  std::filesystem::path log_dir = "stoplab-logs";
  int horizon_cap = 500;
};

/// What the participant sees for one observation.
struct RevealView {
  std::string session_id;
  int step = 0;
  int n = 0;
  /// Absent under RevealPolicy::kRelativeOnly.
  std::optional<std::string> value;
  bool is_candidate = false;
};

/// Full disclosure after finalization, with what the k* rule would have done.
struct ResultView {
  std::string session_id;
  TrialOutcome outcome;
  int best_index = 0;
  int base_a = 0;
  std::vector<std::string> values;
  int k_star = 1;
  TrialOutcome counterfactual;
};

struct ExportFilter {
  /// Only sessions created at or after this time (ms since epoch).
  std::optional<std::int64_t> since_ms;
  /// Also export unfinalized sessions (without their hidden instance).
  bool include_open = false;
};

/// Live experiment sessions. Every state change is appended to the journal
/// and made durable before it is applied and acknowledged, so a restart over
/// the same log directory rebuilds the identical records. Calls on one
/// session are serialized; distinct sessions proceed concurrently.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  SessionRecord create_session(const SessionConfig& config);
  RevealView next_observation(const std::string& session_id);
  SessionRecord decide(const std::string& session_id, Decision choice, Json metadata = nullptr);
  ResultView result(const std::string& session_id) const;

  /// Snapshot of one session. Throws Error(kNotFound).
  std::shared_ptr<const SessionRecord> find(const std::string& session_id) const;
  /// Snapshots of all sessions in creation order.
  std::vector<std::shared_ptr<const SessionRecord>> snapshot() const;

  /// Records matching the filter, in creation order.
  std::vector<SessionRecord> export_records(const ExportFilter& filter) const;
  void export_log(std::ostream& out, const ExportFilter& filter) const;

  const ServiceOptions& options() const noexcept { return options_; }
  /// Flushes and closes the journal; later mutations fail with kIo.
  void shutdown();

 private:
  struct Slot {
    std::mutex mutex;
    SessionRecord record;
    std::shared_ptr<const SessionRecord> published;
  };

  std::shared_ptr<Slot> slot(const std::string& session_id) const;
  void commit(Slot& slot, const SessionEvent& event);
  static void publish(Slot& slot);

  ServiceOptions options_;
  std::unique_ptr<EventJournal> journal_;
  mutable std::shared_mutex map_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Slot>> slots_;
  std::vector<std::string> order_;
};

/// Participant-safe view: revealed prefix, cursor, state, and the outcome
/// once finalized. Never holds unrevealed values, best_index or base_a.
Json redacted_json(const SessionRecord& record);
Json reveal_json(const RevealView& view);
Json result_json(const ResultView& view);

std::string random_session_id();
std::int64_t now_ms();

}  // namespace stoplab::service
