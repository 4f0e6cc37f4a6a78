#include "stoplab/session_log.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "stoplab/error.hpp"

namespace stoplab {

Json journal_entry_to_json(const JournalEntry& entry) {
  Json j;
  j["seq"] = entry.seq;
  j["session_id"] = entry.session_id;
  const Json event = event_to_json(entry.event, Disclosure::kFull);
  for (const auto& [key, value] : event.items()) j[key] = value;
  return j;
}

JournalEntry journal_entry_from_json(const Json& j) {
  try {
    return {j.at("seq").get<std::uint64_t>(), j.at("session_id").get<std::string>(),
            event_from_json(j)};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed journal entry: ") + e.what());
  }
}

std::vector<SessionRecord> fold_journal(std::span<const JournalEntry> entries) {
  std::vector<SessionRecord> records;
  std::map<std::string, std::size_t> index;
  for (const auto& entry : entries) {
    auto [it, inserted] = index.try_emplace(entry.session_id, records.size());
    if (inserted) {
      records.emplace_back();
      records.back().session_id = entry.session_id;
    }
    apply_event(records[it->second], entry.event);
  }
  return records;
}

LogReadResult read_session_log(std::istream& in) {
  LogReadResult result;
  std::vector<JournalEntry> journal;
  std::vector<std::size_t> journal_lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      if (!j.is_object()) fail(ErrorCode::kParse, "line is not a JSON object");
      if (j.contains("events")) {
        result.records.push_back(record_from_json(j));
      } else if (j.contains("kind")) {
        journal.push_back(journal_entry_from_json(j));
        journal_lines.push_back(number);
      } else {
        fail(ErrorCode::kParse, "neither a session record nor a journal entry");
      }
    } catch (const nlohmann::json::exception& e) {
      result.errors.push_back({number, std::string("invalid JSON: ") + e.what()});
    } catch (const Error& e) {
      result.errors.push_back({number, e.what()});
    }
  }
  if (!journal.empty()) {
    // Fold per session so one broken session does not discard the others.
    std::map<std::string, std::size_t> index;
    std::vector<SessionRecord> folded;
    std::vector<bool> broken;
    for (std::size_t i = 0; i < journal.size(); ++i) {
      auto [it, inserted] = index.try_emplace(journal[i].session_id, folded.size());
      if (inserted) {
        folded.emplace_back();
        folded.back().session_id = journal[i].session_id;
        broken.push_back(false);
      }
      if (broken[it->second]) continue;
      try {
        apply_event(folded[it->second], journal[i].event);
      } catch (const Error& e) {
        broken[it->second] = true;
        result.errors.push_back({journal_lines[i], e.what()});
      }
    }
    for (std::size_t i = 0; i < folded.size(); ++i) {
      if (!broken[i]) result.records.push_back(std::move(folded[i]));
    }
  }
  return result;
}

void write_records_jsonl(std::ostream& out, std::span<const SessionRecord> records) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

}  // namespace stoplab
