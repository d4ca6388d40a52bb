#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "calib/deck/deck.hpp"
#include "calib/session/calibration.hpp"
#include "calib/session/event.hpp"
#include "calib/session/event_log.hpp"

namespace calib {

using Clock = std::function<std::chrono::system_clock::time_point()>;

struct SessionInfo {
  std::string id;
  std::string deck_id;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> order;  // question ids in presentation order
};

// Deterministic across platforms: mt19937_64 plus an explicit Fisher-Yates
// with rejection sampling.
std::vector<std::string> question_order(const Deck& deck, std::optional<std::uint64_t> seed);

// Sessions keyed by id. With a data directory every session keeps
// <id>.meta.json and an append-only <id>.jsonl event log, and load() rebuilds
// in-memory state from them. Appends to one session are serialized; distinct
// sessions proceed independently.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> data_dir = std::nullopt,
                        Clock clock = [] { return std::chrono::system_clock::now(); });
  ~SessionStore();

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  // Error(kDuplicate) if a deck with the same id is already attached.
  void attach_deck(Deck deck);
  std::vector<std::shared_ptr<const Deck>> decks() const;
  std::shared_ptr<const Deck> find_deck(const std::string& deck_id) const;

  // Error(kNotFound) for an unknown deck.
  SessionInfo create_session(const std::string& deck_id,
                             std::optional<std::uint64_t> seed = std::nullopt);

  // Errors: kNotFound (session or question), kDuplicate (question already
  // answered in this session), kShapeMismatch / kInvalidInterval (payload).
  PredictionEvent record_prediction(const std::string& session_id, const std::string& question_id,
                                    const Prediction& prediction);

  // First question in presentation order without an answer; empty when done.
  std::optional<Question> next_question(const std::string& session_id) const;
  SessionInfo info(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;
  std::vector<PredictionEvent> events(const std::string& session_id) const;
  SessionStats stats(const std::string& session_id) const;
  CalibrationCurve calibration(const std::string& session_id,
                               std::span<const double> edges = kDefaultBinEdges) const;

  // Replays every session found in the data directory. Returns the count.
  // Sessions whose deck is not attached fail with Error(kNotFound).
  std::size_t load();

 private:
  struct Session;

  std::shared_ptr<Session> find_session(const std::string& session_id) const;
  std::shared_ptr<const Deck> require_deck(const std::string& deck_id) const;
  std::string next_session_id();

  std::optional<std::filesystem::path> data_dir_;
  Clock clock_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Deck>> decks_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace calib
