#include <sstream>

#include <catch_amalgamated.hpp>

#include "stoplab/error.hpp"
#include "stoplab/session_log.hpp"
#include "stoplab/session_record.hpp"

using namespace stoplab;

namespace {

SessionConfig config(int n) {
  SessionConfig c;
  c.n = n;
  c.params = {1, 0.5, 0.25};
  c.seed = 77;
  return c;
}

SessionRecord played(const std::string& id, int n, int r, std::uint64_t seed) {
  ThresholdPolicy policy(r);
  return simulate_session(id, config(n), gen_instance(n, seed), policy, 1000 + static_cast<std::int64_t>(seed));
}

}  // namespace

TEST_CASE("simulated session follows the protocol") {
  const auto rec = played("a1", 20, 8, 3);
  CHECK(rec.state == SessionState::kFinalized);
  REQUIRE(rec.outcome);
  ThresholdPolicy policy(8);
  CHECK(*rec.outcome == run_trial(*rec.instance, policy, rec.config.params).outcome);
  CHECK(rec.events.front().kind() == EventKind::kCreated);
  CHECK(rec.events.back().kind() == EventKind::kFinalized);
  CHECK(rec.created_ms == 1003);
  const auto steps = decision_steps(rec);
  CHECK(static_cast<int>(steps.size()) == rec.outcome->duration);
}

TEST_CASE("replaying events reproduces the record") {
  const auto rec = played("b2", 15, 5, 9);
  CHECK(replay_session("b2", rec.events) == rec);
}

TEST_CASE("apply_event rejects protocol violations") {
  const auto rec = played("c3", 6, 2, 1);
  SessionRecord r;
  CHECK_THROWS_AS(apply_event(r, rec.events[1]), Error);  // reveal before Created
  apply_event(r, rec.events[0]);
  CHECK_THROWS_AS(apply_event(r, rec.events[0]), Error);  // second Created
  CHECK_THROWS_AS(apply_event(r, rec.events[2]), Error);  // decision before reveal
  apply_event(r, rec.events[1]);
  CHECK_THROWS_AS(apply_event(r, rec.events[1]), Error);  // reveal twice
  auto wrong_value = rec.events[1];
  std::get<RevealedPayload>(wrong_value.payload).value = "1";
  SessionRecord fresh;
  apply_event(fresh, rec.events[0]);
  if (std::get<RevealedPayload>(rec.events[1].payload).value != "1") {
    CHECK_THROWS_AS(apply_event(fresh, wrong_value), Error);
  }
  auto after = rec;
  CHECK_THROWS_AS(apply_event(after, rec.events[1]), Error);  // after Finalized
}

TEST_CASE("pass at step n finalizes as NoPick") {
  NeverStopPolicy never;
  const auto rec = simulate_session("d4", config(5), gen_instance(5, 2), never, 0);
  CHECK(rec.outcome->outcome_class == OutcomeClass::kNoPick);
  CHECK(rec.outcome->duration == 5);
  CHECK(rec.outcome->payoff == -0.25);
}

TEST_CASE("event JSON round trip with stable field order") {
  const auto rec = played("e5", 8, 3, 4);
  for (const auto& e : rec.events) {
    const auto j = event_to_json(e, Disclosure::kFull);
    CHECK(event_from_json(j) == e);
    CHECK(j.begin().key() == "step");
  }
  const auto created = event_to_json(rec.events.front(), Disclosure::kRedacted);
  CHECK_FALSE(created.contains("instance"));
  CHECK_THROWS_AS(event_from_json(Json::parse(R"({"step":0,"kind":"Bogus","ts":1})")), Error);
}

TEST_CASE("record JSON round trip") {
  const auto rec = played("f6", 12, 4, 5);
  const auto j = record_to_json(rec);
  CHECK(record_from_json(j) == rec);
  CHECK(record_from_json(Json::parse(j.dump())) == rec);

  auto tampered = j;
  tampered["outcome"]["outcome_class"] = "Success";
  tampered["outcome"]["payoff"] = 1.0;
  if (rec.outcome->outcome_class != OutcomeClass::kSuccess) {
    CHECK_THROWS_AS(record_from_json(tampered), Error);
  }
  auto broken = j;
  broken["events"].erase(1);
  CHECK_THROWS_AS(record_from_json(broken), Error);
}

TEST_CASE("open records never carry the instance") {
  SessionRecord r;
  SessionEvent e;
  e.step = 0;
  e.timestamp_ms = 5;
  e.payload = CreatedPayload{config(4), gen_instance(4, 1)};
  r.session_id = "g7";
  apply_event(r, e);
  const auto j = record_to_json(r);
  CHECK(j["instance"].is_null());
  CHECK(j.dump().find("base_a") == std::string::npos);
  const auto back = record_from_json(j);
  CHECK_FALSE(back.instance);
  CHECK(back.state == SessionState::kCreated);
}

TEST_CASE("journal entries fold into records") {
  const auto a = played("h8", 6, 2, 11);
  const auto b = played("i9", 7, 3, 12);
  std::vector<JournalEntry> entries;
  std::uint64_t seq = 1;
  // Interleave the two sessions' events.
  for (std::size_t i = 0; i < std::max(a.events.size(), b.events.size()); ++i) {
    if (i < a.events.size()) entries.push_back({seq++, a.session_id, a.events[i]});
    if (i < b.events.size()) entries.push_back({seq++, b.session_id, b.events[i]});
  }
  for (const auto& e : entries) {
    CHECK(journal_entry_from_json(Json::parse(journal_entry_to_json(e).dump())) == e);
  }
  const auto folded = fold_journal(entries);
  REQUIRE(folded.size() == 2);
  CHECK(folded[0] == a);
  CHECK(folded[1] == b);

  std::stringstream journal;
  for (const auto& e : entries) journal << journal_entry_to_json(e).dump() << "\n";
  const auto read = read_session_log(journal);
  CHECK(read.errors.empty());
  REQUIRE(read.records.size() == 2);
  CHECK(read.records[1] == b);
}

TEST_CASE("exported record lines read back") {
  std::vector<SessionRecord> recs{played("j1", 9, 3, 1), played("j2", 9, 4, 2)};
  std::stringstream out;
  write_records_jsonl(out, recs);
  const auto read = read_session_log(out);
  CHECK(read.errors.empty());
  CHECK(read.records == recs);
}

TEST_CASE("malformed lines are reported with line numbers") {
  std::stringstream in;
  in << record_to_json(played("k1", 5, 2, 1)).dump() << "\n";
  in << "{\"session_id\": \"k2\", \"events\": [\n";
  in << "\n";
  in << "[1,2,3]\n";
  in << record_to_json(played("k3", 5, 2, 2)).dump() << "\n";
  const auto read = read_session_log(in);
  CHECK(read.records.size() == 2);
  REQUIRE(read.errors.size() == 2);
  CHECK(read.errors[0].line == 2);
  CHECK(read.errors[1].line == 4);
}

TEST_CASE("config JSON") {
  auto c = config(10);
  c.reveal_policy = RevealPolicy::kRelativeOnly;
  const auto j = config_to_json(c);
  CHECK(config_from_json(j) == c);
  c.seed.reset();
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"n":"ten"})")), Error);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"n":5,"reveal_policy":"sometimes"})")), Error);
}
