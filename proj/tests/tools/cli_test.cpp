#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "calib/session/event_log.hpp"
#include "calib/trainer/cli.hpp"

namespace calib::trainer {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "calibrate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string deck(const char* name) { return std::string(CALIB_DECK_DIR "/") + name + ".json"; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "calib-cli-test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(ScoreChoice, Examples) {
  auto r = run_cli({"score-choice", "--p", "0.5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "p_rand 0.5")) << r.out;
  EXPECT_TRUE(contains(r.out, "correct")) << r.out;
  EXPECT_TRUE(contains(r.out, "incorrect")) << r.out;

  r = run_cli({"score-choice", "--p", "0.99", "--correct"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "correct  10  (display 10)")) << r.out;
  EXPECT_FALSE(contains(r.out, "incorrect")) << r.out;

  r = run_cli({"score-choice", "--p", "0.8", "--incorrect", "--n", "4"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "-9.604080495292086")) << r.out;
}

TEST(ScoreChoice, UsageErrors) {
  EXPECT_EQ(run_cli({"score-choice", "--p", "0.7", "--correct", "--incorrect"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"score-choice", "--p", "1.5"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"score-choice"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"score-choice", "--p", "0.7", "--n", "2", "--k", "2"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"bogus"}).code, kExitUsage);
}

TEST(ScoreInterval, Examples) {
  auto r = run_cli({"score-interval", "--rule", "distance", "--l", "0", "--u", "20", "--x", "10", "--raw"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "raw  8.333333333333334")) << r.out;

  r = run_cli({"score-interval", "--rule", "magnitude", "--l", "10", "--u", "1000", "--x", "100", "--raw"});
  EXPECT_TRUE(contains(r.out, "raw  4.999999999999998")) << r.out;

  r = run_cli({"score-interval", "--rule", "log", "--l", "10", "--u", "1000", "--x", "100"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "-0.23025850929940453")) << r.out;

  r = run_cli({"score-interval", "--rule", "distance", "--l", "0", "--u", "1e-9", "--x", "1e9"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "-57.26893683880667")) << r.out;
  EXPECT_TRUE(contains(r.out, "floored at s_min")) << r.out;
}

TEST(ScoreInterval, Errors) {
  auto r = run_cli({"score-interval", "--rule", "magnitude", "--l", "-5", "--u", "10", "--x", "3"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli({"score-interval", "--rule", "distance", "--l", "5", "--u", "1", "--x", "3"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"score-interval", "--rule", "cosine", "--l", "0", "--u", "1", "--x", "0"}).code, kExitUsage);
}

TEST(Verify, InvariantSuitePassesDeterministically) {
  const auto a = run_cli({"verify", "--suite", "invariants", "--no-timestamp"});
  const auto b = run_cli({"verify", "--suite", "invariants", "--no-timestamp"});
  EXPECT_EQ(a.code, kExitOk) << a.out << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run_cli({"verify", "--suite", "nope"}).code, kExitUsage);
}

TEST(Verify, WritesJsonReport) {
  const fs::path path = scratch("properness.json");
  const auto r = run_cli({"verify", "--suite", "properness", "--json", path.string(), "--no-timestamp"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(path);
  const auto report = nlohmann::json::parse(in);
  EXPECT_EQ(report["suite"], "properness");
  EXPECT_TRUE(report["passed"].get<bool>());
}

TEST(Simulate, DeterministicAndReplayable) {
  const fs::path log = scratch("sim.jsonl");
  const std::vector<std::string> args{"simulate", "--deck", deck("true_false"), "--agent", "overconfident",
                                      "--n", "500", "--seed", "7", "--no-timestamp", "--out", log.string()};
  const auto a = run_cli(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const auto first_log = read_event_log_file(log);
  const auto b = run_cli(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(read_event_log_file(log), first_log);
  ASSERT_EQ(first_log.size(), 500u);
  EXPECT_EQ(first_log.front().timestamp, "1970-01-01T00:00:00.000Z");
  std::ifstream in(log);
  const SessionStats replayed = replay(in);
  EXPECT_EQ(replayed.predictions, 500u);
}

TEST(Simulate, Errors) {
  EXPECT_EQ(run_cli({"simulate", "--deck", deck("true_false"), "--agent", "psychic"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--deck", deck("interval_distance")}).code, kExitData);
  EXPECT_EQ(run_cli({"simulate", "--deck", "/nonexistent.json"}).code, kExitData);
  EXPECT_EQ(run_cli({"simulate", "--deck", deck("true_false"), "--edges", "0.9,0.1"}).code, kExitUsage);
}

TEST(Deck, ValidateSample) {
  const auto r = run_cli({"deck", "validate", deck("mixed")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "OK, 7 questions")) << r.out;
}

TEST(Deck, ValidateReportsEveryProblem) {
  const auto r = run_cli({"deck", "validate", CALIB_TEST_DATA_DIR "/bad_deck.json"});
  EXPECT_EQ(r.code, kExitData);
  const std::string all = r.out + r.err;
  EXPECT_TRUE(contains(all, "question 'a' field 'answer'")) << all;
  EXPECT_TRUE(contains(all, "duplicate")) << all;
  EXPECT_TRUE(contains(all, "question 'm' field 'true_value'")) << all;
}

TEST(Deck, ImportRefusesOverwrite) {
  const fs::path dir = scratch("decks");
  fs::remove_all(dir);
  fs::create_directories(dir);
  EXPECT_EQ(run_cli({"deck", "import", deck("choose_k"), "--deck-dir", dir.string()}).code, kExitOk);
  EXPECT_NE(run_cli({"deck", "import", deck("choose_k"), "--deck-dir", dir.string()}).code, kExitOk);
  EXPECT_EQ(run_cli({"deck", "import", deck("choose_k"), "--deck-dir", dir.string(), "--force"}).code, kExitOk);
  EXPECT_EQ(run_cli({"deck", "import", CALIB_TEST_DATA_DIR "/bad_deck.json", "--deck-dir", dir.string()}).code,
            kExitData);
}

}  // namespace
}  // namespace calib::trainer
