#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stoplab/json.hpp"
#include "stoplab/session_record.hpp"

namespace stoplab {

/// One line of the server's append-only journal. Lines carry the full event
/// (including the hidden instance) plus a global sequence number.
struct JournalEntry {
  std::uint64_t seq = 0;
  std::string session_id;
  SessionEvent event;

  friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

/// {"seq", "session_id", "step", "kind", "ts", ...payload}.
Json journal_entry_to_json(const JournalEntry& entry);
JournalEntry journal_entry_from_json(const Json& j);

/// Folds journal entries (in seq order) into records, ordered by first
/// appearance of each session.
std::vector<SessionRecord> fold_journal(std::span<const JournalEntry> entries);

struct LineError {
  std::size_t line = 0;
  std::string message;
};

struct LogReadResult {
  std::vector<SessionRecord> records;
  std::vector<LineError> errors;
};

/// Reads JSONL holding exported session records, journal entries, or both.
/// Blank lines are skipped; every malformed line is reported with its 1-based
/// line number and otherwise ignored.
LogReadResult read_session_log(std::istream& in);

/// One record_to_json() object per line.
void write_records_jsonl(std::ostream& out, std::span<const SessionRecord> records);

}  // namespace stoplab
