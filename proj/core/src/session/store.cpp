#include "calib/session/store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "calib/error.hpp"
#include "calib/format.hpp"

namespace calib {

namespace fs = std::filesystem;
using nlohmann::json;

struct SessionStore::Session {
  SessionInfo info;
  std::shared_ptr<const Deck> deck;
  mutable std::mutex mutex;
  std::vector<PredictionEvent> events;
  std::map<std::string, std::size_t> answered;  // question id -> event index
  std::unique_ptr<EventLogWriter> log;
};

std::vector<std::string> question_order(const Deck& deck, std::optional<std::uint64_t> seed) {
  std::vector<std::string> order;
  order.reserve(deck.questions.size());
  for (const auto& q : deck.questions) order.push_back(q.id);
  if (!seed) return order;

  std::mt19937_64 engine(*seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::uint64_t range = i;
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw = engine();
    while (draw >= limit) draw = engine();
    std::swap(order[i - 1], order[draw % range]);
  }
  return order;
}

SessionStore::SessionStore(std::optional<fs::path> data_dir, Clock clock)
    : data_dir_(std::move(data_dir)), clock_(std::move(clock)) {
  if (data_dir_) {
    std::error_code ec;
    fs::create_directories(*data_dir_, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create data directory " + data_dir_->string());
  }
}

SessionStore::~SessionStore() = default;

void SessionStore::attach_deck(Deck deck) {
  std::unique_lock lock(mutex_);
  if (decks_.contains(deck.id)) {
    throw Error(ErrorCode::kDuplicate, "deck '" + deck.id + "' already attached");
  }
  const std::string id = deck.id;
  decks_.emplace(id, std::make_shared<const Deck>(std::move(deck)));
}

std::vector<std::shared_ptr<const Deck>> SessionStore::decks() const {
  std::shared_lock lock(mutex_);
  std::vector<std::shared_ptr<const Deck>> out;
  for (const auto& [id, deck] : decks_) out.push_back(deck);
  return out;
}

std::shared_ptr<const Deck> SessionStore::find_deck(const std::string& deck_id) const {
  std::shared_lock lock(mutex_);
  const auto it = decks_.find(deck_id);
  return it == decks_.end() ? nullptr : it->second;
}

std::shared_ptr<const Deck> SessionStore::require_deck(const std::string& deck_id) const {
  auto deck = find_deck(deck_id);
  if (!deck) throw Error(ErrorCode::kNotFound, "unknown deck '" + deck_id + "'");
  return deck;
}

std::shared_ptr<SessionStore::Session> SessionStore::find_session(
    const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown session '" + session_id + "'");
  }
  return it->second;
}

std::string SessionStore::next_session_id() {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "s%06llu", static_cast<unsigned long long>(next_id_++));
  return buffer;
}

SessionInfo SessionStore::create_session(const std::string& deck_id,
                                         std::optional<std::uint64_t> seed) {
  auto deck = require_deck(deck_id);
  auto session = std::make_shared<Session>();
  session->deck = deck;
  session->info.deck_id = deck_id;
  session->info.seed = seed;
  session->info.order = question_order(*deck, seed);

  std::unique_lock lock(mutex_);
  std::string id = next_session_id();
  while (sessions_.contains(id)) id = next_session_id();
  session->info.id = id;

  if (data_dir_) {
    json meta = {{"session_id", id}, {"deck_id", deck_id}, {"order", session->info.order}};
    meta["seed"] = seed ? json(*seed) : json(nullptr);
    const fs::path meta_path = *data_dir_ / (id + ".meta.json");
    std::ofstream out(meta_path);
    out << meta.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + meta_path.string());
    session->log = std::make_unique<EventLogWriter>(*data_dir_ / (id + ".jsonl"));
  }
  sessions_.emplace(id, session);
  return session->info;
}

PredictionEvent SessionStore::record_prediction(const std::string& session_id,
                                                const std::string& question_id,
                                                const Prediction& prediction) {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mutex);

  const Question* question = session->deck->find(question_id);
  if (question == nullptr) {
    throw Error(ErrorCode::kNotFound, "question '" + question_id + "' is not in deck '" +
                                          session->deck->id + "'");
  }
  if (session->answered.contains(question_id)) {
    throw Error(ErrorCode::kDuplicate,
                "question '" + question_id + "' already answered in session " + session_id);
  }

  const ScoredPrediction scored = score_prediction(*session->deck, *question, prediction);
  PredictionEvent event;
  event.timestamp = format_rfc3339(clock_());
  event.session_id = session_id;
  event.question_id = question_id;
  event.question_kind = question->kind;
  event.prediction = prediction;
  event.clamped_confidence = scored.clamped_confidence;
  event.correct = scored.correct;
  event.true_value = scored.true_value;
  event.points = scored.score.points;

  if (session->log) session->log->append(event);
  session->answered.emplace(question_id, session->events.size());
  session->events.push_back(event);
  return event;
}

std::optional<Question> SessionStore::next_question(const std::string& session_id) const {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mutex);
  for (const auto& id : session->info.order) {
    if (session->answered.contains(id)) continue;
    if (const Question* q = session->deck->find(id)) return *q;
  }
  return std::nullopt;
}

SessionInfo SessionStore::info(const std::string& session_id) const {
  return find_session(session_id)->info;
}

std::vector<std::string> SessionStore::session_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, session] : sessions_) ids.push_back(id);
  return ids;
}

std::vector<PredictionEvent> SessionStore::events(const std::string& session_id) const {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mutex);
  return session->events;
}

SessionStats SessionStore::stats(const std::string& session_id) const {
  const auto history = events(session_id);
  return summarize(history);
}

CalibrationCurve SessionStore::calibration(const std::string& session_id,
                                           std::span<const double> edges) const {
  const auto history = events(session_id);
  return calibration_curve(history, edges);
}

std::size_t SessionStore::load() {
  if (!data_dir_) return 0;
  std::vector<fs::path> metas;
  for (const auto& entry : fs::directory_iterator(*data_dir_)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".meta.json")) metas.push_back(entry.path());
  }
  std::sort(metas.begin(), metas.end());

  std::size_t loaded = 0;
  for (const auto& meta_path : metas) {
    std::ifstream in(meta_path);
    const json meta = json::parse(in, nullptr, false);
    if (meta.is_discarded() || !meta.is_object() || !meta.contains("session_id") ||
        !meta["session_id"].is_string() || !meta.contains("deck_id") ||
        !meta["deck_id"].is_string() || !meta.contains("order") || !meta["order"].is_array()) {
      throw Error(ErrorCode::kCorruptLog, "bad session metadata in " + meta_path.string());
    }
    auto session = std::make_shared<Session>();
    session->info.id = meta["session_id"].get<std::string>();
    session->info.deck_id = meta["deck_id"].get<std::string>();
    session->info.order = meta["order"].get<std::vector<std::string>>();
    if (meta.contains("seed") && meta["seed"].is_number_unsigned()) {
      session->info.seed = meta["seed"].get<std::uint64_t>();
    }
    session->deck = require_deck(session->info.deck_id);

    const fs::path log_path = *data_dir_ / (session->info.id + ".jsonl");
    if (fs::exists(log_path)) session->events = read_event_log_file(log_path);
    for (std::size_t i = 0; i < session->events.size(); ++i) {
      session->answered.emplace(session->events[i].question_id, i);
    }
    session->log = std::make_unique<EventLogWriter>(log_path);

    std::unique_lock lock(mutex_);
    if (session->info.id.size() > 1 && session->info.id.front() == 's') {
      try {
        const auto number = std::stoull(session->info.id.substr(1));
        next_id_ = std::max<std::uint64_t>(next_id_, number + 1);
      } catch (const std::exception&) {
      }
    }
    sessions_[session->info.id] = std::move(session);
    ++loaded;
  }
  return loaded;
}

}  // namespace calib
