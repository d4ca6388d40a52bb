#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "calib/deck/deck.hpp"
#include "calib/session/store.hpp"

namespace calib::api {

// Closed set of machine-readable error codes carried by every error body.
enum class ApiErrorCode {
  kBadRequest,
  kInvalidJson,
  kDeckNotFound,
  kSessionNotFound,
  kQuestionNotFound,
  kDuplicateAnswer,
  kInvalidPrediction,
  kInvalidInterval,
  kInvalidEdges,
  kNotFound,
  kMethodNotAllowed,
  kInternal,
};

std::string_view to_string(ApiErrorCode code);
int http_status(ApiErrorCode code);
const std::vector<ApiErrorCode>& all_error_codes();

struct ApiError {
  ApiErrorCode code = ApiErrorCode::kInternal;
  std::string message;
  std::optional<nlohmann::json> detail;
};

nlohmann::json to_json(const ApiError& error);

struct ApiRequest {
  std::string method;
  std::string path;  // without query string
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Splits "/path?a=1&b=2" into path and percent-decoded query parameters.
ApiRequest make_request(std::string method, std::string_view target, std::string body = {});

struct DeckCatalog {
  std::vector<Deck> decks;
  std::vector<std::string> warnings;  // one per skipped file
};

// Loads every *.json deck in the directory (sorted by file name). Files that
// fail to parse or repeat a deck id are skipped with a warning.
DeckCatalog load_deck_directory(const std::filesystem::path& directory);

// Stateless router over a SessionStore. Thread-safe to the extent the store is.
class ApiService {
 public:
  explicit ApiService(SessionStore& store, std::vector<std::string> warnings = {});

  ApiResponse handle(const ApiRequest& request) const;

 private:
  ApiResponse list_decks() const;
  ApiResponse create_session(const ApiRequest& request) const;
  ApiResponse next_question(const std::string& session_id) const;
  ApiResponse submit_answer(const std::string& session_id, const ApiRequest& request) const;
  ApiResponse session_stats(const std::string& session_id) const;
  ApiResponse session_calibration(const std::string& session_id, const ApiRequest& request) const;
  ApiResponse health() const;

  SessionStore& store_;
  std::vector<std::string> warnings_;
};

// Public view of a question: never includes the answer.
nlohmann::json question_view(const Deck& deck, const Question& question);
nlohmann::json deck_summary(const Deck& deck);

}  // namespace calib::api
