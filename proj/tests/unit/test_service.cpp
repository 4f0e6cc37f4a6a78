#include <fstream>
#include <sstream>
#include <thread>

#include <catch_amalgamated.hpp>

#include "stoplab/diagnostics.hpp"
#include "stoplab/error.hpp"
#include "stoplab/service/event_journal.hpp"
#include "stoplab/service/session_service.hpp"
#include "stoplab/session_log.hpp"
#include "stoplab/solver.hpp"
#include "temp_dir.hpp"

using namespace stoplab;
using namespace stoplab::service;
using stoplab::testing::TempDir;

namespace {

SessionConfig config(int n, std::uint64_t seed) {
  SessionConfig c;
  c.n = n;
  c.params = {1, 0.5, 0.25};
  c.seed = seed;
  return c;
}

/// Plays a threshold rule through the service API.
SessionRecord play(SessionService& svc, const SessionConfig& c, int r) {
  const auto id = svc.create_session(c).session_id;
  while (true) {
    const auto obs = svc.next_observation(id);
    const bool stop = obs.is_candidate && obs.step >= r;
    const auto rec = svc.decide(id, stop ? Decision::kStop : Decision::kPass);
    if (rec.state == SessionState::kFinalized) return rec;
  }
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("Created is durable before create_session returns") {
  TempDir dir;
  SessionService svc({dir.path(), 500});
  const auto rec = svc.create_session(config(10, 1));
  const auto entries = EventJournal::load(dir.path());
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].session_id == rec.session_id);
  CHECK(entries[0].event.kind() == EventKind::kCreated);
  CHECK(rec.session_id.size() == 32);
  CHECK(rec.instance == gen_instance(10, 1));
}

TEST_CASE("session protocol and error codes") {
  TempDir dir;
  SessionService svc({dir.path(), 50});
  const auto id = svc.create_session(config(5, 2)).session_id;
  CHECK(code_of([&] { svc.decide(id, Decision::kPass); }) == ErrorCode::kNoPendingObservation);
  CHECK(code_of([&] { svc.result(id); }) == ErrorCode::kNotFinalized);
  const auto first = svc.next_observation(id);
  CHECK(first.step == 1);
  CHECK(first.is_candidate);
  REQUIRE(first.value);
  CHECK(*first.value == gen_instance(5, 2).value(1).str());
  CHECK(code_of([&] { svc.next_observation(id); }) == ErrorCode::kDecisionRequired);
  for (int step = 1; step < 5; ++step) {
    svc.decide(id, Decision::kPass);
    svc.next_observation(id);
  }
  const auto done = svc.decide(id, Decision::kPass);
  CHECK(done.state == SessionState::kFinalized);
  CHECK(done.outcome->outcome_class == OutcomeClass::kNoPick);
  CHECK(code_of([&] { svc.next_observation(id); }) == ErrorCode::kSessionFinalized);
  CHECK(code_of([&] { svc.decide(id, Decision::kStop); }) == ErrorCode::kSessionFinalized);

  const auto res = svc.result(id);
  CHECK(res.best_index == gen_instance(5, 2).best_index());
  CHECK(res.values == values_as_strings(gen_instance(5, 2)));
  CHECK(res.k_star == threshold(config(5, 2).params, 5));
  ThresholdPolicy optimal(res.k_star);
  CHECK(res.counterfactual == run_trial(gen_instance(5, 2), optimal, config(5, 2).params).outcome);

  CHECK(code_of([&] { svc.find("ffff"); }) == ErrorCode::kNotFound);
  CHECK(code_of([&] { svc.create_session(config(51, 1)); }) == ErrorCode::kHorizonCapExceeded);
  CHECK(code_of([&] { svc.create_session(config(0, 1)); }) == ErrorCode::kInvalidArgument);
  auto bad = config(5, 1);
  bad.params.alpha = -1;
  CHECK(code_of([&] { svc.create_session(bad); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("stop finalizes immediately") {
  TempDir dir;
  SessionService svc({dir.path(), 500});
  const auto id = svc.create_session(config(8, 3)).session_id;
  svc.next_observation(id);
  const auto rec = svc.decide(id, Decision::kStop, Json{{"rt_ms", 812}});
  CHECK(rec.state == SessionState::kFinalized);
  CHECK(rec.outcome->stop_index == 1);
  const auto& decision = std::get<DecisionPayload>(rec.events[2].payload);
  CHECK(decision.metadata["rt_ms"] == 812);
}

TEST_CASE("redacted views hide the future") {
  TempDir dir;
  SessionService svc({dir.path(), 500});
  auto c = config(6, 4);
  c.reveal_policy = RevealPolicy::kRelativeOnly;
  const auto id = svc.create_session(c).session_id;
  const auto obs = svc.next_observation(id);
  CHECK_FALSE(obs.value);
  CHECK(reveal_json(obs)["value"].is_null());
  const auto j = redacted_json(*svc.find(id));
  const auto text = j.dump();
  for (const auto& v : values_as_strings(gen_instance(6, 4))) {
    CHECK(text.find("\"" + v + "\"") == std::string::npos);
  }
  CHECK_FALSE(j.contains("best_index"));
  CHECK_FALSE(j.contains("base_a"));
  CHECK(j["revealed"].size() == 1);

  auto shown = config(6, 4);
  const auto id2 = svc.create_session(shown).session_id;
  svc.next_observation(id2);
  const auto j2 = redacted_json(*svc.find(id2)).dump();
  const auto values = values_as_strings(gen_instance(6, 4));
  CHECK(j2.find("\"" + values[0] + "\"") != std::string::npos);
  for (std::size_t i = 1; i < values.size(); ++i) {
    CHECK(j2.find("\"" + values[i] + "\"") == std::string::npos);
  }
}

TEST_CASE("restart replays the journal and continues sequence numbers") {
  TempDir dir;
  std::vector<std::shared_ptr<const SessionRecord>> before;
  std::string open_id;
  {
    SessionService svc({dir.path(), 500});
    for (int i = 0; i < 20; ++i) play(svc, config(12, 100 + i), 5);
    open_id = svc.create_session(config(12, 7)).session_id;
    svc.next_observation(open_id);
    before = svc.snapshot();
  }
  SessionService again({dir.path(), 500});
  const auto after = again.snapshot();
  REQUIRE(after.size() == before.size());
  for (std::size_t i = 0; i < after.size(); ++i) CHECK(*after[i] == *before[i]);

  // The open session resumes where it left off.
  const auto rec = again.decide(open_id, Decision::kPass);
  CHECK(rec.cursor == 1);
  again.shutdown();
  const auto entries = EventJournal::load(dir.path());
  for (std::size_t i = 0; i < entries.size(); ++i) CHECK(entries[i].seq == i + 1);
}

TEST_CASE("export filters") {
  TempDir dir;
  SessionService svc({dir.path(), 500});
  for (int i = 0; i < 3; ++i) play(svc, config(6, i), 3);
  svc.create_session(config(6, 99));
  CHECK(svc.export_records({}).size() == 3);
  ExportFilter open;
  open.include_open = true;
  CHECK(svc.export_records(open).size() == 4);
  ExportFilter future;
  future.since_ms = now_ms() + 60000;
  CHECK(svc.export_records(future).empty());

  std::stringstream out;
  svc.export_log(out, open);
  const auto read = read_session_log(out);
  CHECK(read.errors.empty());
  REQUIRE(read.records.size() == 4);
  CHECK(read.records[3].state == SessionState::kCreated);
  CHECK_FALSE(read.records[3].instance);
  CHECK(out.str().find("base_a") != std::string::npos);  // finalized ones disclose
}

TEST_CASE("concurrent clients and replay equivalence") {
  TempDir dir;
  std::stringstream exported;
  SessionStats live;
  {
    SessionService svc({dir.path(), 500});
    std::vector<std::thread> clients;
    for (int t = 0; t < 6; ++t) {
      clients.emplace_back([&svc, t] {
        for (int i = 0; i < 15; ++i) play(svc, config(20, 1000 * t + i), 1 + (i % 20));
      });
    }
    for (auto& c : clients) c.join();
    const auto records = svc.export_records({});
    REQUIRE(records.size() == 90);
    live = summarize(records);
    svc.export_log(exported, {});
  }
  const auto read = read_session_log(exported);
  CHECK(summarize(read.records) == live);
  SessionService again({dir.path(), 500});
  CHECK(summarize(again.export_records({})) == live);
}

TEST_CASE("journal recovery") {
  TempDir dir;
  {
    SessionService svc({dir.path(), 500});
    play(svc, config(5, 1), 2);
  }
  const auto file = *std::filesystem::directory_iterator(dir.path());
  {
    std::ofstream torn(file.path(), std::ios::app);
    torn << R"({"seq": 99, "session_id": "ab)";
  }
  {
    SessionService svc({dir.path(), 500});
    CHECK(svc.snapshot().size() == 1);
  }
  {
    std::ofstream garbage(file.path(), std::ios::app);
    garbage << "\nnot json\n" << R"({"seq":1000,"session_id":"x","step":0})" << "\n";
  }
  CHECK_THROWS_AS(SessionService({dir.path(), 500}), Error);
}

TEST_CASE("journal file naming is by UTC day") {
  CHECK(EventJournal::file_name_for(0) == "events-1970-01-01.jsonl");
  CHECK(EventJournal::file_name_for(86400000LL * 365) == "events-1971-01-01.jsonl");
}
