#include "stoplab/service/event_journal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

#include "stoplab/error.hpp"

namespace stoplab::service {

EventJournal::EventJournal(std::filesystem::path directory, std::uint64_t next_seq)
    : directory_(std::move(directory)), next_seq_(next_seq) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create log directory " + directory_.string() + ": " + ec.message());
  writer_ = std::thread([this] { run(); });
}

EventJournal::~EventJournal() { close(); }

std::string EventJournal::file_name_for(std::int64_t timestamp_ms) {
  const std::time_t secs = static_cast<std::time_t>(timestamp_ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "events-%Y-%m-%d.jsonl", &tm);
  return buf;
}

std::uint64_t EventJournal::append(const std::string& session_id, const SessionEvent& event) {
  std::future<void> done;
  std::uint64_t seq = 0;
  {
    std::lock_guard lock(mutex_);
    if (closing_) fail(ErrorCode::kIo, "journal is closed");
    seq = next_seq_++;
    Pending p;
    p.file = file_name_for(event.timestamp_ms);
    p.line = journal_entry_to_json({seq, session_id, event}).dump() + '\n';
    done = p.done.get_future();
    queue_.push_back(std::move(p));
  }
  wake_.notify_one();
  done.get();
  return seq;
}

void EventJournal::close() {
  {
    std::lock_guard lock(mutex_);
    if (closing_ && !writer_.joinable()) return;
    closing_ = true;
  }
  wake_.notify_one();
  if (writer_.joinable()) writer_.join();
  if (fd_ >= 0) {
    ::fsync(fd_);
    ::close(fd_);
    fd_ = -1;
  }
}

void EventJournal::run() {
  for (;;) {
    std::deque<Pending> batch;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [this] { return closing_ || !queue_.empty(); });
      if (queue_.empty()) return;
      batch.swap(queue_);
    }
    write_batch(batch);
  }
}

void EventJournal::write_batch(std::deque<Pending>& batch) {
  std::size_t synced = 0;
  auto sync_upto = [&](std::size_t end) {
    if (::fsync(fd_) != 0) {
      throw Error(ErrorCode::kIo, std::string("fsync failed: ") + std::strerror(errno));
    }
    for (; synced < end; ++synced) batch[synced].done.set_value();
  };
  try {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      auto& p = batch[i];
      if (p.file != open_file_) {
        if (fd_ >= 0) {
          sync_upto(i);
          ::close(fd_);
          fd_ = -1;
        }
        const auto path = directory_ / p.file;
        fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
        if (fd_ < 0) {
          throw Error(ErrorCode::kIo, "cannot open " + path.string() + ": " + std::strerror(errno));
        }
        open_file_ = p.file;
      }
      const char* data = p.line.data();
      std::size_t left = p.line.size();
      while (left > 0) {
        const ssize_t w = ::write(fd_, data, left);
        if (w < 0) {
          if (errno == EINTR) continue;
          throw Error(ErrorCode::kIo, std::string("write failed: ") + std::strerror(errno));
        }
        data += w;
        left -= static_cast<std::size_t>(w);
      }
    }
    sync_upto(batch.size());
  } catch (...) {
    for (; synced < batch.size(); ++synced) batch[synced].done.set_exception(std::current_exception());
  }
}

std::vector<JournalEntry> EventJournal::load(const std::filesystem::path& directory) {
  std::vector<JournalEntry> entries;
  std::error_code ec;
  if (!std::filesystem::exists(directory, ec)) return entries;
  std::vector<std::filesystem::path> files;
  for (const auto& item : std::filesystem::directory_iterator(directory)) {
    const auto name = item.path().filename().string();
    if (item.is_regular_file() && name.starts_with("events-") && name.ends_with(".jsonl")) {
      files.push_back(item.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) fail(ErrorCode::kIo, "cannot read " + file.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      try {
        entries.push_back(journal_entry_from_json(Json::parse(lines[i])));
      } catch (const std::exception& e) {
        // A torn final line was never acknowledged; drop it.
        if (i + 1 == lines.size()) break;
        fail(ErrorCode::kParse, file.string() + ":" + std::to_string(i + 1) + ": " + e.what());
      }
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const JournalEntry& a, const JournalEntry& b) { return a.seq < b.seq; });
  return entries;
}

}  // namespace stoplab::service
