#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "calib/deck/question.hpp"
#include "calib/error.hpp"
#include "calib/scoring/types.hpp"

namespace calib {

// practical_log decks may mix every kind: choice questions use the practical-log
// rule and interval questions use the rule named by their kind. distance and
// magnitude decks hold only interval questions of the matching kind.
enum class DeckRule { kPracticalLog, kDistance, kMagnitude };

std::string_view to_string(DeckRule rule);
std::optional<DeckRule> deck_rule_from_string(std::string_view name);

struct DeckParams {
  double s_max = kDefaultSMax;
  double p_max = kDefaultPMax;
  double s_min = kDefaultSMin;
  double delta = kDefaultDelta;
  double d = 0.0;
  std::optional<double> c;           // overrides the per-rule default scale
  double beta = kDefaultBeta;        // default coverage for interval questions
  double open_p_rand = 0.01;         // p_rand for free_text / numeric_exact without their own

  bool operator==(const DeckParams&) const = default;
};

struct Deck {
  std::string id;
  std::string title;
  DeckRule rule = DeckRule::kPracticalLog;
  DeckParams params;
  std::vector<Question> questions;

  const Question* find(std::string_view question_id) const;
};

struct Diagnostic {
  std::string question_id;  // empty for deck-level problems
  std::string field;
  std::string message;

  std::string to_string() const;
};

class DeckError : public Error {
 public:
  explicit DeckError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Parses and validates a deck document, collecting every problem before
// throwing DeckError. Open-ended questions without p_rand receive
// params.open_p_rand, so loaded decks always carry explicit values.
Deck parse_deck(const nlohmann::json& document);
Deck load_deck(std::istream& source);
Deck load_deck_file(const std::filesystem::path& path);

nlohmann::json serialize_deck(const Deck& deck);

ChoiceScoringParams choice_params(const Deck& deck, const Question& question);
IntervalScoringParams interval_params(const Deck& deck, const Question& question);

bool operator==(const Question& a, const Question& b);
bool operator==(const Deck& a, const Deck& b);

}  // namespace calib
