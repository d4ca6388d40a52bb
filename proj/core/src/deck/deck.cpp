#include "calib/deck/deck.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <utility>

#include "calib/deck/grading.hpp"

namespace calib {
namespace {

using nlohmann::json;

constexpr const char* kDeckFields[] = {"id", "title", "scoring_rule", "params", "questions"};
constexpr const char* kParamFields[] = {"s_max", "p_max", "s_min", "delta",
                                        "d",     "c",     "beta",  "open_p_rand"};
constexpr const char* kQuestionFields[] = {"id",         "kind", "prompt", "options", "k",
                                           "answer",     "acceptable", "true_value", "beta",
                                           "p_rand",     "c"};

// Accumulates diagnostics while walking a deck document.
class Checker {
 public:
  void fail(std::string question_id, std::string field, std::string message) {
    diagnostics_.push_back({std::move(question_id), std::move(field), std::move(message)});
  }

  void check(bool ok, const std::string& question_id, const std::string& field,
             const std::string& message) {
    if (!ok) fail(question_id, field, message);
  }

  template <std::size_t N>
  void reject_unknown(const json& object, const char* const (&known)[N],
                      const std::string& question_id) {
    for (const auto& [key, value] : object.items()) {
      bool found = false;
      for (const char* name : known) found = found || key == name;
      if (!found) fail(question_id, key, "unknown field");
    }
  }

  std::optional<std::string> string_field(const json& object, const char* name,
                                          const std::string& question_id, bool required) {
    if (!object.contains(name)) {
      if (required) fail(question_id, name, "missing required string");
      return std::nullopt;
    }
    if (!object[name].is_string()) {
      fail(question_id, name, "expected a string");
      return std::nullopt;
    }
    return object[name].get<std::string>();
  }

  std::optional<double> number_field(const json& object, const char* name,
                                     const std::string& question_id, bool required) {
    if (!object.contains(name)) {
      if (required) fail(question_id, name, "missing required number");
      return std::nullopt;
    }
    if (!object[name].is_number()) {
      fail(question_id, name, "expected a number");
      return std::nullopt;
    }
    const double value = object[name].get<double>();
    if (!std::isfinite(value)) {
      fail(question_id, name, "must be finite");
      return std::nullopt;
    }
    return value;
  }

  bool ok() const { return diagnostics_.empty(); }
  std::vector<Diagnostic> take() { return std::move(diagnostics_); }

 private:
  std::vector<Diagnostic> diagnostics_;
};

DeckParams parse_params(const json& document, Checker& checker) {
  DeckParams params;
  if (!document.contains("params")) return params;
  const json& p = document["params"];
  if (!p.is_object()) {
    checker.fail("", "params", "expected an object");
    return params;
  }
  checker.reject_unknown(p, kParamFields, "");
  if (auto v = checker.number_field(p, "s_max", "", false)) params.s_max = *v;
  if (auto v = checker.number_field(p, "p_max", "", false)) params.p_max = *v;
  if (auto v = checker.number_field(p, "s_min", "", false)) params.s_min = *v;
  if (auto v = checker.number_field(p, "delta", "", false)) params.delta = *v;
  if (auto v = checker.number_field(p, "d", "", false)) params.d = *v;
  if (auto v = checker.number_field(p, "c", "", false)) params.c = *v;
  if (auto v = checker.number_field(p, "beta", "", false)) params.beta = *v;
  if (auto v = checker.number_field(p, "open_p_rand", "", false)) params.open_p_rand = *v;

  checker.check(params.s_max > 0.0, "", "params.s_max", "must be positive");
  checker.check(params.p_max > 0.0 && params.p_max < 1.0, "", "params.p_max", "must lie in (0,1)");
  checker.check(params.s_min < 0.0, "", "params.s_min", "must be negative");
  checker.check(params.delta >= 0.0 && params.delta < 1.0, "", "params.delta",
                "must lie in [0,1)");
  checker.check(!params.c || *params.c > 0.0, "", "params.c", "must be positive");
  checker.check(params.beta > 0.0 && params.beta < 1.0, "", "params.beta", "must lie in (0,1)");
  checker.check(params.open_p_rand > 0.0 && params.open_p_rand < params.p_max, "",
                "params.open_p_rand", "must lie in (0, p_max)");
  return params;
}

std::optional<std::size_t> parse_option_answer(const json& q, const Question& question,
                                               Checker& checker) {
  if (!q.contains("answer")) {
    checker.fail(question.id, "answer", "missing the correct option");
    return std::nullopt;
  }
  const json& answer = q["answer"];
  if (answer.is_number_integer() || answer.is_number_unsigned()) {
    const auto index = answer.get<long long>();
    if (index < 0 || static_cast<std::size_t>(index) >= question.options.size()) {
      checker.fail(question.id, "answer", "option index out of range");
      return std::nullopt;
    }
    return static_cast<std::size_t>(index);
  }
  if (answer.is_string()) {
    const auto text = answer.get<std::string>();
    std::optional<std::size_t> match;
    std::size_t matches = 0;
    for (std::size_t i = 0; i < question.options.size(); ++i) {
      if (question.options[i] == text) {
        match = i;
        ++matches;
      }
    }
    if (matches != 1) {
      checker.fail(question.id, "answer", "must name exactly one of the options");
      return std::nullopt;
    }
    return match;
  }
  checker.fail(question.id, "answer", "expected an option index or option text");
  return std::nullopt;
}

std::optional<Question> parse_question(const json& q, std::size_t position, const DeckParams& params,
                                       Checker& checker) {
  const std::string fallback_id = "#" + std::to_string(position);
  if (!q.is_object()) {
    checker.fail(fallback_id, "", "question must be an object");
    return std::nullopt;
  }
  Question question;
  const auto id = checker.string_field(q, "id", fallback_id, true);
  question.id = id.value_or(fallback_id);
  if (id && id->empty()) checker.fail(fallback_id, "id", "must not be empty");
  checker.reject_unknown(q, kQuestionFields, question.id);

  const auto kind_name = checker.string_field(q, "kind", question.id, true);
  if (!kind_name) return std::nullopt;
  const auto kind = question_kind_from_string(*kind_name);
  if (!kind) {
    checker.fail(question.id, "kind", "unknown question kind '" + *kind_name + "'");
    return std::nullopt;
  }
  question.kind = *kind;
  question.prompt = checker.string_field(q, "prompt", question.id, true).value_or("");

  if (q.contains("options")) {
    const json& options = q["options"];
    if (!options.is_array()) {
      checker.fail(question.id, "options", "expected an array of strings");
    } else {
      for (const json& option : options) {
        if (!option.is_string()) {
          checker.fail(question.id, "options", "expected an array of strings");
          break;
        }
        question.options.push_back(option.get<std::string>());
      }
    }
  }

  const bool open_ended =
      question.kind == QuestionKind::kFreeText || question.kind == QuestionKind::kNumericExact;
  if (q.contains("p_rand")) {
    if (!open_ended) {
      checker.fail(question.id, "p_rand", "only open-ended kinds take an explicit p_rand");
    } else {
      question.p_rand = checker.number_field(q, "p_rand", question.id, false);
    }
  }
  if (q.contains("k") && question.kind != QuestionKind::kChooseKOfN) {
    checker.fail(question.id, "k", "only choose_k_of_n takes k");
  }
  if (is_choice(question.kind)) {
    for (const char* field : {"true_value", "beta", "c"}) {
      if (q.contains(field)) checker.fail(question.id, field, "only interval questions take this");
    }
  }

  switch (question.kind) {
    case QuestionKind::kTrueFalse: {
      if (question.options.empty()) question.options = {"True", "False"};
      checker.check(question.options.size() == 2, question.id, "options",
                    "true_false questions have exactly two options");
      if (!q.contains("answer") || !q["answer"].is_boolean()) {
        checker.fail(question.id, "answer", "true_false questions need a boolean answer");
      } else {
        question.answer = TruthAnswer{q["answer"].get<bool>()};
      }
      break;
    }
    case QuestionKind::kChoose1OfN:
    case QuestionKind::kChooseKOfN: {
      if (question.options.size() < 2) {
        checker.fail(question.id, "options", "need at least two options");
        break;
      }
      if (question.kind == QuestionKind::kChooseKOfN) {
        if (!q.contains("k") || !q["k"].is_number_integer()) {
          checker.fail(question.id, "k", "choose_k_of_n needs an integer k");
          break;
        }
        const auto k = q["k"].get<long long>();
        if (k < 1 || static_cast<std::size_t>(k) >= question.options.size()) {
          checker.fail(question.id, "k", "need 1 <= k < number of options");
          break;
        }
        question.k = static_cast<std::size_t>(k);
      }
      if (auto index = parse_option_answer(q, question, checker)) {
        question.answer = OptionAnswer{*index};
      }
      break;
    }
    case QuestionKind::kFreeText: {
      TextAnswer answer;
      if (q.contains("acceptable")) {
        const json& acceptable = q["acceptable"];
        if (!acceptable.is_array()) {
          checker.fail(question.id, "acceptable", "expected an array of strings");
        } else {
          for (const json& a : acceptable) {
            if (!a.is_string() || normalize_answer_text(a.get<std::string>()).empty()) {
              checker.fail(question.id, "acceptable", "entries must be non-blank strings");
              break;
            }
            answer.acceptable.push_back(a.get<std::string>());
          }
        }
      }
      if (q.contains("answer")) {
        if (q["answer"].is_string()) {
          answer.acceptable.insert(answer.acceptable.begin(), q["answer"].get<std::string>());
        } else {
          checker.fail(question.id, "answer", "free_text answer must be a string");
        }
      }
      checker.check(!answer.acceptable.empty(), question.id, "acceptable",
                    "free_text questions need at least one acceptable answer");
      question.answer = std::move(answer);
      break;
    }
    case QuestionKind::kNumericExact: {
      if (auto value = checker.number_field(q, "answer", question.id, true)) {
        question.answer = NumberAnswer{*value};
      }
      break;
    }
    case QuestionKind::kIntervalDistance:
    case QuestionKind::kIntervalMagnitude: {
      for (const char* field : {"answer", "acceptable", "options"}) {
        if (q.contains(field)) checker.fail(question.id, field, "interval questions do not take this");
      }
      if (auto value = checker.number_field(q, "true_value", question.id, true)) {
        if (question.kind == QuestionKind::kIntervalMagnitude && !(*value > 0.0)) {
          checker.fail(question.id, "true_value", "magnitude questions need a positive true value");
        }
        question.answer = IntervalAnswer{*value};
      }
      question.beta = checker.number_field(q, "beta", question.id, false).value_or(params.beta);
      checker.check(question.beta > 0.0 && question.beta < 1.0, question.id, "beta",
                    "must lie in (0,1)");
      question.c = checker.number_field(q, "c", question.id, false);
      checker.check(!question.c || *question.c > 0.0, question.id, "c", "must be positive");
      break;
    }
  }

  if (open_ended) {
    if (!question.p_rand) question.p_rand = params.open_p_rand;
    checker.check(*question.p_rand > 0.0 && *question.p_rand < params.p_max, question.id, "p_rand",
                  "must lie in (0, p_max)");
  } else if (is_choice(question.kind) && question.options.size() >= 2) {
    const double p_rand = derive_p_rand(question);
    checker.check(p_rand < params.p_max, question.id, "options",
                  "uniform-guess probability must stay below p_max");
  }
  return question;
}

bool rule_accepts(DeckRule rule, QuestionKind kind) {
  switch (rule) {
    case DeckRule::kPracticalLog:
      return true;
    case DeckRule::kDistance:
      return kind == QuestionKind::kIntervalDistance;
    case DeckRule::kMagnitude:
      return kind == QuestionKind::kIntervalMagnitude;
  }
  return false;
}

}  // namespace

std::string_view to_string(DeckRule rule) {
  switch (rule) {
    case DeckRule::kPracticalLog: return "practical_log";
    case DeckRule::kDistance: return "distance";
    case DeckRule::kMagnitude: return "magnitude";
  }
  return "unknown";
}

std::optional<DeckRule> deck_rule_from_string(std::string_view name) {
  if (name == "practical_log") return DeckRule::kPracticalLog;
  if (name == "distance") return DeckRule::kDistance;
  if (name == "magnitude") return DeckRule::kMagnitude;
  return std::nullopt;
}

const Question* Deck::find(std::string_view question_id) const {
  for (const Question& question : questions) {
    if (question.id == question_id) return &question;
  }
  return nullptr;
}

std::string Diagnostic::to_string() const {
  std::string where = question_id.empty() ? "deck" : "question '" + question_id + "'";
  if (!field.empty()) where += " field '" + field + "'";
  return where + ": " + message;
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  if (diagnostics.empty()) return "invalid deck";
  std::string message = diagnostics.front().to_string();
  if (diagnostics.size() > 1) {
    message += " (and " + std::to_string(diagnostics.size() - 1) + " more)";
  }
  return message;
}

}  // namespace

DeckError::DeckError(std::vector<Diagnostic> diagnostics)
    : Error(ErrorCode::kInvalidDeck, summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

Deck parse_deck(const json& document) {
  Checker checker;
  if (!document.is_object()) {
    checker.fail("", "", "deck document must be a JSON object");
    throw DeckError(checker.take());
  }
  checker.reject_unknown(document, kDeckFields, "");

  Deck deck;
  deck.id = checker.string_field(document, "id", "", true).value_or("");
  if (document.contains("id") && document["id"].is_string() && deck.id.empty()) {
    checker.fail("", "id", "must not be empty");
  }
  deck.title = checker.string_field(document, "title", "", true).value_or("");
  if (auto rule_name = checker.string_field(document, "scoring_rule", "", true)) {
    if (auto rule = deck_rule_from_string(*rule_name)) {
      deck.rule = *rule;
    } else {
      checker.fail("", "scoring_rule", "expected practical_log, distance or magnitude");
    }
  }
  deck.params = parse_params(document, checker);

  if (!document.contains("questions") || !document["questions"].is_array()) {
    checker.fail("", "questions", "expected an array of questions");
    throw DeckError(checker.take());
  }
  std::set<std::string> seen;
  std::size_t position = 0;
  for (const json& q : document["questions"]) {
    auto question = parse_question(q, position++, deck.params, checker);
    if (!question) continue;
    if (!seen.insert(question->id).second) {
      checker.fail(question->id, "id", "duplicate question id");
    }
    if (!rule_accepts(deck.rule, question->kind)) {
      checker.fail(question->id, "kind",
                   std::string(to_string(question->kind)) + " is not scored by a " +
                       std::string(to_string(deck.rule)) + " deck");
    }
    deck.questions.push_back(std::move(*question));
  }
  if (!checker.ok()) throw DeckError(checker.take());
  return deck;
}

Deck load_deck(std::istream& source) {
  json document;
  try {
    document = json::parse(source);
  } catch (const json::parse_error& e) {
    throw DeckError({Diagnostic{"", "", std::string("malformed JSON: ") + e.what()}});
  }
  return parse_deck(document);
}

Deck load_deck_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read deck file " + path.string());
  return load_deck(in);
}

json serialize_deck(const Deck& deck) {
  json params = {
      {"s_max", deck.params.s_max},   {"p_max", deck.params.p_max}, {"s_min", deck.params.s_min},
      {"delta", deck.params.delta},   {"d", deck.params.d},         {"beta", deck.params.beta},
      {"open_p_rand", deck.params.open_p_rand},
  };
  if (deck.params.c) params["c"] = *deck.params.c;

  json questions = json::array();
  for (const Question& question : deck.questions) {
    json q = {{"id", question.id}, {"kind", to_string(question.kind)}, {"prompt", question.prompt}};
    std::visit(
        [&q](const auto& answer) {
          using T = std::decay_t<decltype(answer)>;
          if constexpr (std::is_same_v<T, TruthAnswer>) {
            q["answer"] = answer.value;
          } else if constexpr (std::is_same_v<T, OptionAnswer>) {
            q["answer"] = answer.index;
          } else if constexpr (std::is_same_v<T, TextAnswer>) {
            q["acceptable"] = answer.acceptable;
          } else if constexpr (std::is_same_v<T, NumberAnswer>) {
            q["answer"] = answer.value;
          } else {
            q["true_value"] = answer.true_value;
          }
        },
        question.answer);
    if (is_choice(question.kind)) q["options"] = question.options;
    if (question.kind == QuestionKind::kChooseKOfN) q["k"] = question.k;
    if (is_interval(question.kind)) {
      q["beta"] = question.beta;
      if (question.c) q["c"] = *question.c;
    }
    if (question.p_rand) q["p_rand"] = *question.p_rand;
    questions.push_back(std::move(q));
  }
  return {{"id", deck.id},
          {"title", deck.title},
          {"scoring_rule", to_string(deck.rule)},
          {"params", std::move(params)},
          {"questions", std::move(questions)}};
}

ChoiceScoringParams choice_params(const Deck& deck, const Question& question) {
  ChoiceScoringParams params;
  params.s_max = deck.params.s_max;
  params.p_max = deck.params.p_max;
  params.p_rand = derive_p_rand(question);
  return params;
}

IntervalScoringParams interval_params(const Deck& deck, const Question& question) {
  IntervalScoringParams params = question.kind == QuestionKind::kIntervalMagnitude
                                     ? IntervalScoringParams::magnitude_defaults()
                                     : IntervalScoringParams::distance_defaults();
  params.s_max = deck.params.s_max;
  params.s_min = deck.params.s_min;
  params.delta = deck.params.delta;
  params.d = deck.params.d;
  if (deck.params.c) params.c = *deck.params.c;
  if (question.c) params.c = *question.c;
  return params;
}

bool operator==(const Question& a, const Question& b) {
  auto answer_equal = [](const AnswerSpec& x, const AnswerSpec& y) {
    if (x.index() != y.index()) return false;
    return std::visit(
        [&y](const auto& lhs) {
          using T = std::decay_t<decltype(lhs)>;
          const T& rhs = std::get<T>(y);
          if constexpr (std::is_same_v<T, TruthAnswer>) return lhs.value == rhs.value;
          if constexpr (std::is_same_v<T, OptionAnswer>) return lhs.index == rhs.index;
          if constexpr (std::is_same_v<T, TextAnswer>) return lhs.acceptable == rhs.acceptable;
          if constexpr (std::is_same_v<T, NumberAnswer>) return lhs.value == rhs.value;
          if constexpr (std::is_same_v<T, IntervalAnswer>) return lhs.true_value == rhs.true_value;
        },
        x);
  };
  return a.id == b.id && a.prompt == b.prompt && a.kind == b.kind && a.options == b.options &&
         a.k == b.k && answer_equal(a.answer, b.answer) && a.beta == b.beta &&
         a.p_rand == b.p_rand && a.c == b.c;
}

bool operator==(const Deck& a, const Deck& b) {
  return a.id == b.id && a.title == b.title && a.rule == b.rule && a.params == b.params &&
         a.questions == b.questions;
}

}  // namespace calib
