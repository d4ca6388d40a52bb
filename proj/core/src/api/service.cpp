#include "calib/api/service.hpp"

#include <algorithm>
#include <fstream>

#include "calib/deck/grading.hpp"
#include "calib/error.hpp"
#include "calib/format.hpp"
#include "calib/session/calibration.hpp"

namespace calib::api {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::kBadRequest: return "bad_request";
    case ApiErrorCode::kInvalidJson: return "invalid_json";
    case ApiErrorCode::kDeckNotFound: return "deck_not_found";
    case ApiErrorCode::kSessionNotFound: return "session_not_found";
    case ApiErrorCode::kQuestionNotFound: return "question_not_found";
    case ApiErrorCode::kDuplicateAnswer: return "duplicate_answer";
    case ApiErrorCode::kInvalidPrediction: return "invalid_prediction";
    case ApiErrorCode::kInvalidInterval: return "invalid_interval";
    case ApiErrorCode::kInvalidEdges: return "invalid_edges";
    case ApiErrorCode::kNotFound: return "not_found";
    case ApiErrorCode::kMethodNotAllowed: return "method_not_allowed";
    case ApiErrorCode::kInternal: return "internal";
  }
  return "internal";
}

int http_status(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::kBadRequest:
    case ApiErrorCode::kInvalidJson:
    case ApiErrorCode::kInvalidEdges:
      return 400;
    case ApiErrorCode::kDeckNotFound:
    case ApiErrorCode::kSessionNotFound:
    case ApiErrorCode::kQuestionNotFound:
    case ApiErrorCode::kNotFound:
      return 404;
    case ApiErrorCode::kMethodNotAllowed:
      return 405;
    case ApiErrorCode::kDuplicateAnswer:
      return 409;
    case ApiErrorCode::kInvalidPrediction:
    case ApiErrorCode::kInvalidInterval:
      return 422;
    case ApiErrorCode::kInternal:
      return 500;
  }
  return 500;
}

const std::vector<ApiErrorCode>& all_error_codes() {
  static const std::vector<ApiErrorCode> codes{
      ApiErrorCode::kBadRequest,        ApiErrorCode::kInvalidJson,
      ApiErrorCode::kDeckNotFound,      ApiErrorCode::kSessionNotFound,
      ApiErrorCode::kQuestionNotFound,  ApiErrorCode::kDuplicateAnswer,
      ApiErrorCode::kInvalidPrediction, ApiErrorCode::kInvalidInterval,
      ApiErrorCode::kInvalidEdges,      ApiErrorCode::kNotFound,
      ApiErrorCode::kMethodNotAllowed,  ApiErrorCode::kInternal,
  };
  return codes;
}

json to_json(const ApiError& error) {
  json body = {{"code", to_string(error.code)}, {"message", error.message}};
  if (error.detail) body["detail"] = *error.detail;
  return {{"error", std::move(body)}};
}

namespace {

ApiResponse fail(ApiErrorCode code, std::string message,
                 std::optional<json> detail = std::nullopt) {
  return {http_status(code), to_json(ApiError{code, std::move(message), std::move(detail)})};
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '+') {
      out.push_back(' ');
    } else if (text[i] == '%' && i + 2 < text.size() && hex_value(text[i + 1]) >= 0 &&
               hex_value(text[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(text[i + 1]) * 16 + hex_value(text[i + 2])));
      i += 2;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto slash = path.find('/', start);
    const auto end = slash == std::string_view::npos ? path.size() : slash;
    if (end > start) parts.emplace_back(percent_decode(path.substr(start, end - start)));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return parts;
}

// Parses the body as a JSON object or returns the error response to send.
std::optional<ApiResponse> parse_object(const std::string& body, json& out) {
  out = json::parse(body.empty() ? std::string("{}") : body, nullptr, false);
  if (out.is_discarded()) return fail(ApiErrorCode::kInvalidJson, "request body is not valid JSON");
  if (!out.is_object()) return fail(ApiErrorCode::kBadRequest, "request body must be a JSON object");
  return std::nullopt;
}

}  // namespace

ApiRequest make_request(std::string method, std::string_view target, std::string body) {
  ApiRequest request;
  request.method = std::move(method);
  request.body = std::move(body);
  const auto question = target.find('?');
  request.path = std::string(target.substr(0, question));
  if (question == std::string_view::npos) return request;
  std::string_view query = target.substr(question + 1);
  while (!query.empty()) {
    const auto amp = query.find('&');
    const std::string_view pair = query.substr(0, amp);
    const auto eq = pair.find('=');
    if (!pair.empty()) {
      request.query[percent_decode(pair.substr(0, eq))] =
          eq == std::string_view::npos ? std::string() : percent_decode(pair.substr(eq + 1));
    }
    if (amp == std::string_view::npos) break;
    query.remove_prefix(amp + 1);
  }
  return request;
}

DeckCatalog load_deck_directory(const fs::path& directory) {
  DeckCatalog catalog;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    catalog.warnings.push_back("deck directory " + directory.string() + " not found");
    return catalog;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    try {
      Deck deck = load_deck_file(file);
      const bool seen = std::any_of(catalog.decks.begin(), catalog.decks.end(),
                                    [&](const Deck& d) { return d.id == deck.id; });
      if (seen) {
        catalog.warnings.push_back(file.filename().string() + ": duplicate deck id '" + deck.id + "'");
        continue;
      }
      catalog.decks.push_back(std::move(deck));
    } catch (const Error& e) {
      catalog.warnings.push_back(file.filename().string() + ": " + e.what());
    }
  }
  return catalog;
}

json deck_summary(const Deck& deck) {
  return {{"id", deck.id},
          {"title", deck.title},
          {"questions", deck.questions.size()},
          {"rule", to_string(deck.rule)}};
}

json question_view(const Deck& deck, const Question& question) {
  json view = {{"id", question.id}, {"prompt", question.prompt}, {"kind", to_string(question.kind)}};
  if (is_choice(question.kind)) {
    const ChoiceScoringParams params = choice_params(deck, question);
    if (!question.options.empty()) view["options"] = question.options;
    if (question.kind == QuestionKind::kChooseKOfN) view["k"] = question.k;
    view["p_rand"] = params.p_rand;
    view["p_max"] = params.p_max;
  } else {
    const IntervalScoringParams params = interval_params(deck, question);
    view["beta"] = question.beta;
    view["c"] = params.c;
    view["positive_only"] = question.kind == QuestionKind::kIntervalMagnitude;
  }
  view["s_max"] = deck.params.s_max;
  return view;
}

ApiService::ApiService(SessionStore& store, std::vector<std::string> warnings)
    : store_(store), warnings_(std::move(warnings)) {}

ApiResponse ApiService::handle(const ApiRequest& request) const {
  try {
    const auto parts = split_path(request.path);
    const auto only = [&](const char* method) { return request.method == method; };
    const auto wrong_method = [&] {
      return fail(ApiErrorCode::kMethodNotAllowed,
                  request.method + " not allowed on " + request.path);
    };

    if (parts.size() == 1 && parts[0] == "health") return only("GET") ? health() : wrong_method();
    if (parts.size() == 1 && parts[0] == "decks") return only("GET") ? list_decks() : wrong_method();
    if (parts.size() == 1 && parts[0] == "sessions") {
      return only("POST") ? create_session(request) : wrong_method();
    }
    if (parts.size() == 3 && parts[0] == "sessions") {
      const std::string& id = parts[1];
      if (parts[2] == "next") return only("GET") ? next_question(id) : wrong_method();
      if (parts[2] == "answers") return only("POST") ? submit_answer(id, request) : wrong_method();
      if (parts[2] == "stats") return only("GET") ? session_stats(id) : wrong_method();
      if (parts[2] == "calibration") {
        return only("GET") ? session_calibration(id, request) : wrong_method();
      }
    }
    return fail(ApiErrorCode::kNotFound, "no route for " + request.path);
  } catch (const std::exception& e) {
    return fail(ApiErrorCode::kInternal, e.what());
  }
}

ApiResponse ApiService::health() const {
  return {200,
          {{"status", "ok"},
           {"decks", store_.decks().size()},
           {"sessions", store_.session_ids().size()},
           {"warnings", warnings_}}};
}

ApiResponse ApiService::list_decks() const {
  json decks = json::array();
  for (const auto& deck : store_.decks()) decks.push_back(deck_summary(*deck));
  return {200, {{"decks", std::move(decks)}}};
}

ApiResponse ApiService::create_session(const ApiRequest& request) const {
  json body;
  if (auto error = parse_object(request.body, body)) return *error;
  if (!body.contains("deck_id") || !body["deck_id"].is_string()) {
    return fail(ApiErrorCode::kBadRequest, "'deck_id' (string) is required");
  }
  std::optional<std::uint64_t> seed;
  if (body.contains("seed") && !body["seed"].is_null()) {
    if (!body["seed"].is_number_unsigned()) {
      return fail(ApiErrorCode::kBadRequest, "'seed' must be a non-negative integer");
    }
    seed = body["seed"].get<std::uint64_t>();
  }
  const std::string deck_id = body["deck_id"].get<std::string>();
  if (!store_.find_deck(deck_id)) {
    return fail(ApiErrorCode::kDeckNotFound, "unknown deck '" + deck_id + "'",
                json{{"deck_id", deck_id}});
  }
  const SessionInfo info = store_.create_session(deck_id, seed);
  return {201,
          {{"session_id", info.id},
           {"deck_id", info.deck_id},
           {"questions", info.order.size()},
           {"stats", to_json(store_.stats(info.id))}}};
}

ApiResponse ApiService::next_question(const std::string& session_id) const {
  SessionInfo info;
  try {
    info = store_.info(session_id);
  } catch (const Error&) {
    return fail(ApiErrorCode::kSessionNotFound, "unknown session '" + session_id + "'");
  }
  const auto deck = store_.find_deck(info.deck_id);
  const auto question = store_.next_question(session_id);
  const std::size_t answered = store_.events(session_id).size();
  json body = {{"session_id", session_id},
               {"answered", answered},
               {"remaining", info.order.size() - std::min(answered, info.order.size())},
               {"done", !question.has_value()}};
  body["question"] = question ? question_view(*deck, *question) : json(nullptr);
  return {200, std::move(body)};
}

ApiResponse ApiService::submit_answer(const std::string& session_id,
                                      const ApiRequest& request) const {
  SessionInfo info;
  try {
    info = store_.info(session_id);
  } catch (const Error&) {
    return fail(ApiErrorCode::kSessionNotFound, "unknown session '" + session_id + "'");
  }
  json body;
  if (auto error = parse_object(request.body, body)) return *error;
  if (!body.contains("question_id") || !body["question_id"].is_string()) {
    return fail(ApiErrorCode::kBadRequest, "'question_id' (string) is required");
  }
  if (!body.contains("prediction")) {
    return fail(ApiErrorCode::kBadRequest, "'prediction' is required");
  }
  const std::string question_id = body["question_id"].get<std::string>();
  const auto deck = store_.find_deck(info.deck_id);
  const Question* question = deck->find(question_id);
  if (question == nullptr) {
    return fail(ApiErrorCode::kQuestionNotFound, "question '" + question_id + "' is not in this session's deck",
                json{{"question_id", question_id}});
  }

  try {
    const Prediction prediction = prediction_from_json(body["prediction"], question->kind);
    const PredictionEvent event = store_.record_prediction(session_id, question_id, prediction);
    json response = {{"event", to_json(event)},
                     {"points", event.points},
                     {"points_display", display_points(event.points)}};
    if (event.correct) response["correct"] = *event.correct;
    if (event.true_value) response["true_value"] = *event.true_value;
    return {200, std::move(response)};
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kDuplicate:
        return fail(ApiErrorCode::kDuplicateAnswer, e.what(), json{{"question_id", question_id}});
      case ErrorCode::kInvalidInterval:
        return fail(ApiErrorCode::kInvalidInterval, e.what());
      case ErrorCode::kShapeMismatch:
      case ErrorCode::kDomain:
      case ErrorCode::kInvalidArgument:
        return fail(ApiErrorCode::kInvalidPrediction, e.what());
      default:
        throw;
    }
  }
}

ApiResponse ApiService::session_stats(const std::string& session_id) const {
  try {
    json body = to_json(store_.stats(session_id));
    body["session_id"] = session_id;
    return {200, std::move(body)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotFound) throw;
    return fail(ApiErrorCode::kSessionNotFound, "unknown session '" + session_id + "'");
  }
}

ApiResponse ApiService::session_calibration(const std::string& session_id,
                                            const ApiRequest& request) const {
  try {
    store_.info(session_id);
  } catch (const Error&) {
    return fail(ApiErrorCode::kSessionNotFound, "unknown session '" + session_id + "'");
  }
  std::vector<double> edges = kDefaultBinEdges;
  if (const auto it = request.query.find("edges"); it != request.query.end()) {
    try {
      edges = parse_bin_edges(it->second);
    } catch (const Error& e) {
      return fail(ApiErrorCode::kInvalidEdges, e.what(), json{{"edges", it->second}});
    }
  }
  json body = to_json(store_.calibration(session_id, edges));
  body["session_id"] = session_id;
  body["edges"] = edges;
  return {200, std::move(body)};
}

}  // namespace calib::api
