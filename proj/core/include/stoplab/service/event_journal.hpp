#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <future>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "stoplab/session_log.hpp"

namespace stoplab::service {

/// Append-only JSONL journal, one file per UTC day (events-YYYY-MM-DD.jsonl).
/// A single writer thread drains the queue, writes every pending line and
/// fsyncs once per batch; append() returns only after its line is durable.
class EventJournal {
 public:
  EventJournal(std::filesystem::path directory, std::uint64_t next_seq);
  ~EventJournal();

  EventJournal(const EventJournal&) = delete;
  EventJournal& operator=(const EventJournal&) = delete;

  /// Assigns the next sequence number, appends, and waits for fsync.
  /// Throws Error(kIo) if the write fails.
  std::uint64_t append(const std::string& session_id, const SessionEvent& event);

  /// Drains pending appends and stops the writer. Idempotent.
  void close();

  const std::filesystem::path& directory() const noexcept { return directory_; }

  /// Every entry under directory, ordered by seq. Throws Error(kParse) on a
  /// malformed line, naming file and line.
  static std::vector<JournalEntry> load(const std::filesystem::path& directory);

  static std::string file_name_for(std::int64_t timestamp_ms);

 private:
  struct Pending {
    std::string file;
    std::string line;
    std::promise<void> done;
  };

  void run();
  void write_batch(std::deque<Pending>& batch);

  std::filesystem::path directory_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::deque<Pending> queue_;
  std::uint64_t next_seq_;
  bool closing_ = false;
  int fd_ = -1;
  std::string open_file_;
  std::thread writer_;
};

}  // namespace stoplab::service
