#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "calib/deck/deck.hpp"
#include "calib/error.hpp"
#include "calib/session/calibration.hpp"
#include "calib/session/event.hpp"
#include "calib/session/event_log.hpp"
#include "calib/session/store.hpp"
#include "fixtures.hpp"

namespace calib {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

Deck sample_deck(const char* name) { return load_deck_file(std::string(CALIB_DECK_DIR "/") + name + ".json"); }

PredictionEvent choice_event(double confidence, bool correct, double points = 0.0) {
  PredictionEvent e;
  e.timestamp = "2026-01-01T00:00:00.000Z";
  e.session_id = "s";
  e.question_id = "q";
  e.question_kind = QuestionKind::kTrueFalse;
  e.prediction = ChoicePrediction{TruthPick{true}, confidence};
  e.clamped_confidence = confidence;
  e.correct = correct;
  e.points = points;
  return e;
}

PredictionEvent interval_event(double lower, double upper, double truth, double points) {
  PredictionEvent e;
  e.timestamp = "2026-01-01T00:00:00.000Z";
  e.session_id = "s";
  e.question_id = "i";
  e.question_kind = QuestionKind::kIntervalDistance;
  e.prediction = IntervalPrediction{lower, upper};
  e.true_value = truth;
  e.points = points;
  return e;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("calib-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// A well-formed (not necessarily correct) prediction for any kind.
Prediction simple_prediction(const Question& q) {
  switch (q.kind) {
    case QuestionKind::kTrueFalse: return ChoicePrediction{TruthPick{true}, 0.7};
    case QuestionKind::kChoose1OfN: return ChoicePrediction{OptionPick{0}, 0.7};
    case QuestionKind::kChooseKOfN: return ChoicePrediction{OptionSet{{0, 1}}, 0.7};
    case QuestionKind::kFreeText: return ChoicePrediction{TextEntry{"x"}, 0.7};
    case QuestionKind::kNumericExact: return ChoicePrediction{NumberEntry{0}, 0.7};
    default: return IntervalPrediction{1.0, 1000.0};
  }
}

Clock fixed_clock() {
  return [] { return std::chrono::system_clock::time_point{std::chrono::seconds{1'700'000'000}}; };
}

TEST(ScorePrediction, ChoiceExamples) {
  const Deck deck = sample_deck("true_false");
  const Question& q = *deck.find("tf-boil");
  const auto sure = score_prediction(deck, q, ChoicePrediction{TruthPick{true}, 0.99});
  EXPECT_NEAR(sure.score.points, 10.0, 1e-12);
  EXPECT_EQ(sure.correct, true);
  const auto coin = score_prediction(deck, q, ChoicePrediction{TruthPick{false}, 0.5});
  EXPECT_NEAR(coin.score.points, 0.0, 1e-12);
  const auto wrong = score_prediction(deck, q, ChoicePrediction{TruthPick{false}, 0.99});
  EXPECT_NEAR(wrong.score.points, kDefaultSMin, 1e-9);
}

TEST(ScorePrediction, ConfidenceIsClamped) {
  const Deck deck = sample_deck("true_false");
  const Question& q = *deck.find("tf-boil");
  const auto high = score_prediction(deck, q, ChoicePrediction{TruthPick{true}, 1.0});
  EXPECT_EQ(high.clamped_confidence, 0.99);
  EXPECT_NEAR(high.score.points, 10.0, 1e-12);
  const auto low = score_prediction(deck, q, ChoicePrediction{TruthPick{true}, 0.2});
  EXPECT_EQ(low.clamped_confidence, 0.5);
}

// Expansion by delta keeps even a point guess below s_max.
TEST(ScorePrediction, IntervalAtMidpointNearsPeak) {
  const Deck deck = sample_deck("interval_distance");
  const Question& q = deck.questions.front();
  const double x = std::get<IntervalAnswer>(q.answer).true_value;
  const auto narrow = score_prediction(deck, q, IntervalPrediction{x - 1e-6, x + 1e-6});
  EXPECT_NEAR(narrow.score.points, fixtures::kDistFinal_50_50_at_50, 1e-6);
  EXPECT_EQ(narrow.true_value, x);
  EXPECT_THROW(score_prediction(deck, q, ChoicePrediction{TruthPick{true}, 0.7}), Error);
}

TEST(ScorePrediction, MagnitudeRejectsNonPositiveLower) {
  const Deck deck = sample_deck("interval_magnitude");
  try {
    score_prediction(deck, deck.questions.front(), IntervalPrediction{0.0, 10.0});
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInterval);
  }
}

TEST(PredictionJson, SelectionFollowsKind) {
  const auto tf = prediction_from_json(json{{"selection", false}, {"confidence", 0.7}}, QuestionKind::kTrueFalse);
  EXPECT_FALSE(std::get<TruthPick>(std::get<ChoicePrediction>(tf).selection).value);
  const auto set = prediction_from_json(json{{"selection", {1, 3}}, {"confidence", 0.6}}, QuestionKind::kChooseKOfN);
  EXPECT_EQ(std::get<OptionSet>(std::get<ChoicePrediction>(set).selection).indices, (std::vector<std::size_t>{1, 3}));
  const auto iv = prediction_from_json(json{{"lower", 1}, {"upper", 2}}, QuestionKind::kIntervalMagnitude);
  EXPECT_EQ(std::get<IntervalPrediction>(iv).upper, 2.0);
  EXPECT_THROW(prediction_from_json(json{{"selection", "yes"}, {"confidence", 0.7}}, QuestionKind::kTrueFalse), Error);
  EXPECT_THROW(prediction_from_json(json{{"lower", 1}}, QuestionKind::kIntervalDistance), Error);
  EXPECT_THROW(prediction_from_json(json{{"selection", 1}}, QuestionKind::kChoose1OfN), Error);
}

TEST(EventJson, RoundTrip) {
  const PredictionEvent choice = choice_event(0.8, false, -12.5);
  EXPECT_EQ(event_from_json(to_json(choice)), choice);
  const PredictionEvent interval = interval_event(-3.0, 7.25, 4.0, 6.0);
  EXPECT_EQ(event_from_json(to_json(interval)), interval);
  PredictionEvent text = choice_event(0.6, true, 1.0);
  text.question_kind = QuestionKind::kFreeText;
  text.prediction = ChoicePrediction{TextEntry{"Orwell"}, 0.6};
  EXPECT_EQ(event_from_json(json::parse(serialize_event_line(text))), text);
}

TEST(EventJson, MissingFieldsAreCorrupt) {
  json record = to_json(choice_event(0.8, true));
  record.erase("correct");
  try {
    event_from_json(record);
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptLog);
  }
}

TEST(Calibration, SingleBinExample) {
  const std::vector<PredictionEvent> events{choice_event(0.6, true), choice_event(0.6, false)};
  const CalibrationCurve curve = calibration_curve(events);
  ASSERT_EQ(curve.bins.size(), 6u);
  const CalibrationBin& bin = curve.bins[1];
  EXPECT_EQ(bin.lower, 0.55);
  EXPECT_EQ(bin.upper, 0.65);
  EXPECT_EQ(bin.count, 2u);
  EXPECT_EQ(bin.frequency_correct, 0.5);
  EXPECT_DOUBLE_EQ(*bin.mean_confidence, 0.6);
  for (std::size_t i = 0; i < curve.bins.size(); ++i) {
    if (i != 1) {
      EXPECT_EQ(curve.bins[i].count, 0u);
    }
  }
}

TEST(Calibration, EmptySessionHasEmptyBins) {
  const CalibrationCurve curve = calibration_curve({});
  for (const auto& bin : curve.bins) {
    EXPECT_EQ(bin.count, 0u);
    EXPECT_FALSE(bin.frequency_correct.has_value());
    EXPECT_FALSE(bin.mean_confidence.has_value());
  }
  EXPECT_TRUE(to_json(curve)["bins"][0]["empty"].get<bool>());
}

TEST(Calibration, EdgesAndUnbinned) {
  const std::vector<PredictionEvent> events{choice_event(0.25, true), choice_event(0.5, true),
                                            choice_event(1.0, false), interval_event(0, 1, 0.5, 1)};
  const std::vector<double> edges{0.5, 0.75, 1.0};
  const CalibrationCurve curve = calibration_curve(events, edges);
  EXPECT_EQ(curve.bins[0].count, 1u);
  EXPECT_EQ(curve.bins[1].count, 1u);
  EXPECT_EQ(curve.unbinned, 1u);
}

TEST(Calibration, InvalidEdges) {
  for (const std::vector<double>& edges :
       {std::vector<double>{}, {0.5}, {0.5, 0.5}, {0.7, 0.6}, {-0.1, 0.5}, {0.5, 1.5},
        {0.5, std::numeric_limits<double>::quiet_NaN()}}) {
    EXPECT_THROW(validate_bin_edges(edges), Error);
  }
  EXPECT_EQ(parse_bin_edges("0.5,0.75,1"), (std::vector<double>{0.5, 0.75, 1.0}));
  EXPECT_THROW(parse_bin_edges("0.5,,1"), Error);
  EXPECT_THROW(parse_bin_edges("0.5,abc"), Error);
}

TEST(Calibration, BinsPartitionChoiceEvents) {
  std::mt19937_64 engine(17);
  std::uniform_real_distribution<double> confidence(0.5, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PredictionEvent> events;
    const int n = static_cast<int>(engine() % 200);
    for (int i = 0; i < n; ++i) events.push_back(choice_event(confidence(engine), engine() % 2 == 0));
    const CalibrationCurve curve = calibration_curve(events);
    std::size_t total = curve.unbinned;
    for (const auto& bin : curve.bins) total += bin.count;
    EXPECT_EQ(total, events.size());
    EXPECT_EQ(curve.unbinned, 0u);
  }
}

TEST(Summarize, TotalsAndCoverage) {
  const std::vector<PredictionEvent> events{choice_event(0.6, true, 2.0), choice_event(0.6, false, -3.0),
                                            interval_event(0, 10, 5, 4.0), interval_event(0, 10, 20, -1.0)};
  const SessionStats stats = summarize(events);
  EXPECT_EQ(stats.predictions, 4u);
  EXPECT_DOUBLE_EQ(stats.total_points, 2.0);
  EXPECT_DOUBLE_EQ(stats.mean_points, 0.5);
  EXPECT_EQ(stats.per_kind.at("true_false").predictions, 2u);
  EXPECT_DOUBLE_EQ(stats.per_kind.at("interval_distance").total_points, 3.0);
  EXPECT_EQ(stats.coverage.intervals, 2u);
  EXPECT_EQ(stats.coverage.covered, 1u);
  EXPECT_EQ(stats.coverage.rate(), 0.5);
  EXPECT_EQ(summarize({}).mean_points, 0.0);
}

TEST(EventLog, ReplaySumsAndIsIdempotent) {
  std::ostringstream log;
  double expected = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double points = 0.25 * i - 2.0;
    expected += points;
    log << serialize_event_line(choice_event(0.7, i % 3 == 0, points)) << "\n";
    if (i == 10) log << "\n";
  }
  std::istringstream first(log.str());
  std::istringstream second(log.str());
  const SessionStats a = replay(first);
  const SessionStats b = replay(second);
  EXPECT_EQ(a.predictions, 20u);
  EXPECT_DOUBLE_EQ(a.total_points, expected);
  EXPECT_EQ(a, b);
}

TEST(EventLog, CorruptLineIsNamed) {
  std::istringstream log(serialize_event_line(choice_event(0.7, true)) + "\n{not json\n");
  try {
    read_event_log(log);
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptLog);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(EventLog, WriterAppends) {
  TempDir dir;
  const fs::path path = dir.path() / "log.jsonl";
  {
    EventLogWriter writer(path);
    writer.append(choice_event(0.6, true, 1.0));
  }
  {
    EventLogWriter writer(path);
    writer.append(interval_event(1, 2, 3, -4.0));
  }
  const auto events = read_event_log_file(path);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[1], interval_event(1, 2, 3, -4.0));
}

TEST(QuestionOrder, SeededIsDeterministicPermutation) {
  const Deck deck = sample_deck("mixed");
  const auto a = question_order(deck, 42);
  const auto b = question_order(deck, 42);
  EXPECT_EQ(a, b);
  std::multiset<std::string> ids(a.begin(), a.end());
  std::multiset<std::string> expected;
  for (const auto& q : deck.questions) expected.insert(q.id);
  EXPECT_EQ(ids, expected);
  std::vector<std::string> file_order;
  for (const auto& q : deck.questions) file_order.push_back(q.id);
  EXPECT_EQ(question_order(deck, std::nullopt), file_order);
  bool differs = false;
  for (std::uint64_t seed = 0; seed < 10 && !differs; ++seed) differs = question_order(deck, seed) != file_order;
  EXPECT_TRUE(differs);
}

TEST(SessionStore, RecordAndQuery) {
  SessionStore store(std::nullopt, fixed_clock());
  store.attach_deck(sample_deck("true_false"));
  EXPECT_THROW(store.attach_deck(sample_deck("true_false")), Error);
  const SessionInfo info = store.create_session("true-false-basics");
  EXPECT_EQ(store.next_question(info.id)->id, "tf-boil");
  const auto event = store.record_prediction(info.id, "tf-boil", ChoicePrediction{TruthPick{true}, 0.99});
  EXPECT_EQ(event.timestamp, "2023-11-14T22:13:20.000Z");
  EXPECT_NEAR(event.points, 10.0, 1e-12);
  EXPECT_EQ(store.next_question(info.id)->id, "tf-pacific");
  EXPECT_EQ(store.stats(info.id).predictions, 1u);
  EXPECT_EQ(store.calibration(info.id).bins.back().count, 1u);
}

TEST(SessionStore, Errors) {
  SessionStore store;
  store.attach_deck(sample_deck("true_false"));
  const auto expect_code = [](ErrorCode code, auto&& fn) {
    try {
      fn();
      ADD_FAILURE() << "expected throw";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  expect_code(ErrorCode::kNotFound, [&] { store.create_session("nope"); });
  const auto id = store.create_session("true-false-basics").id;
  const ChoicePrediction p{TruthPick{true}, 0.7};
  expect_code(ErrorCode::kNotFound, [&] { store.record_prediction("nope", "tf-boil", p); });
  expect_code(ErrorCode::kNotFound, [&] { store.record_prediction(id, "nope", p); });
  store.record_prediction(id, "tf-boil", p);
  expect_code(ErrorCode::kDuplicate, [&] { store.record_prediction(id, "tf-boil", p); });
  expect_code(ErrorCode::kShapeMismatch,
              [&] { store.record_prediction(id, "tf-pacific", IntervalPrediction{1, 2}); });
  expect_code(ErrorCode::kNotFound, [&] { store.stats("nope"); });
  EXPECT_EQ(store.events(id).size(), 1u);
}

TEST(SessionStore, FinishedSessionHasNoNext) {
  SessionStore store;
  store.attach_deck(sample_deck("choose_k"));
  const auto info = store.create_session("choose-k", 3);
  while (auto q = store.next_question(info.id)) {
    store.record_prediction(info.id, q->id, ChoicePrediction{OptionSet{{0, 1}}, 0.6});
  }
  EXPECT_EQ(store.events(info.id).size(), info.order.size());
}

TEST(SessionStore, PersistsAndReloads) {
  TempDir dir;
  std::string id;
  SessionStats before;
  std::vector<PredictionEvent> events_before;
  {
    SessionStore store(dir.path(), fixed_clock());
    store.attach_deck(sample_deck("mixed"));
    const auto info = store.create_session("mixed-sampler", 9);
    id = info.id;
    int answered = 0;
    while (auto q = store.next_question(id)) {
      if (++answered > 4) break;
      store.record_prediction(id, q->id, simple_prediction(*q));
    }
    before = store.stats(id);
    events_before = store.events(id);
  }
  SessionStore reloaded(dir.path(), fixed_clock());
  reloaded.attach_deck(sample_deck("mixed"));
  EXPECT_EQ(reloaded.load(), 1u);
  EXPECT_EQ(reloaded.stats(id), before);
  EXPECT_EQ(reloaded.events(id), events_before);
  EXPECT_EQ(reloaded.info(id).seed, 9u);
  const auto fresh = reloaded.create_session("mixed-sampler");
  EXPECT_NE(fresh.id, id);
}

TEST(SessionStore, LoadWithoutDeckFails) {
  TempDir dir;
  {
    SessionStore store(dir.path());
    store.attach_deck(sample_deck("true_false"));
    store.create_session("true-false-basics");
  }
  SessionStore empty(dir.path());
  EXPECT_THROW(empty.load(), Error);
}

TEST(SessionStore, ConcurrentSessionsStayIndependent) {
  TempDir dir;
  SessionStore store(dir.path());
  store.attach_deck(sample_deck("true_false"));
  constexpr int kThreads = 4;
  std::vector<std::string> ids;
  for (int i = 0; i < kThreads; ++i) ids.push_back(store.create_session("true-false-basics").id);
  std::vector<std::thread> threads;
  for (int i = 0; i < kThreads; ++i) {
    threads.emplace_back([&, i] {
      while (auto q = store.next_question(ids[i])) {
        store.record_prediction(ids[i], q->id, ChoicePrediction{TruthPick{i % 2 == 0}, 0.8});
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& id : ids) {
    EXPECT_EQ(store.stats(id).predictions, 5u);
    EXPECT_EQ(read_event_log_file(dir.path() / (id + ".jsonl")).size(), 5u);
  }
  EXPECT_EQ(store.stats(ids[0]), store.stats(ids[2]));
}

}  // namespace
}  // namespace calib
