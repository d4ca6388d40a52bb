#include "calib/trainer/cli.hpp"

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "calib/api/service.hpp"
#include "calib/deck/deck.hpp"
#include "calib/error.hpp"
#include "calib/format.hpp"
#include "calib/scoring/choice.hpp"
#include "calib/scoring/interval.hpp"
#include "calib/session/calibration.hpp"
#include "calib/session/event_log.hpp"
#include "calib/session/store.hpp"
#include "calib/trainer/http_server.hpp"
#include "calib/trainer/simulate.hpp"
#include "calib/trainer/verify.hpp"

namespace calib::trainer {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for flag values that parse but make no sense together.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string now_stamp() { return format_rfc3339(std::chrono::system_clock::now()); }

constexpr const char* kFixedStamp = "1970-01-01T00:00:00.000Z";

void write_json_file(const std::string& path, const json& document) {
  std::ofstream file(path);
  file << document.dump(2) << '\n';
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
}

std::string points_line(const std::string& label, double points) {
  return label + "  " + format_number(points) + "  (display " + std::to_string(display_points(points)) + ")\n";
}

std::string calibration_table(const CalibrationCurve& curve) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& bin : curve.bins) {
    rows.push_back({"[" + format_number(bin.lower) + ", " + format_number(bin.upper) + ")",
                    std::to_string(bin.count),
                    bin.mean_confidence ? format_number(*bin.mean_confidence) : "-",
                    bin.frequency_correct ? format_number(*bin.frequency_correct) : "-"});
  }
  std::string text = render_table({"bin", "count", "mean_confidence", "frequency_correct"}, rows);
  if (curve.unbinned > 0) text += "unbinned " + std::to_string(curve.unbinned) + "\n";
  return text;
}

std::string stats_text(const SessionStats& stats) {
  std::string text = "predictions " + std::to_string(stats.predictions) + "\n";
  text += "total_points " + format_number(stats.total_points) + "\n";
  text += "mean_points " + format_number(stats.mean_points) + "\n";
  for (const auto& [kind, entry] : stats.per_kind) {
    text += "  " + kind + ": " + std::to_string(entry.predictions) + " predictions, " +
            format_number(entry.total_points) + " points\n";
  }
  if (const auto rate = stats.coverage.rate()) {
    text += "interval coverage " + format_number(*rate) + " (" + std::to_string(stats.coverage.covered) +
            "/" + std::to_string(stats.coverage.intervals) + ")\n";
  }
  return text;
}

struct ScoreChoiceArgs {
  double p = 0.5;
  bool correct = false;
  bool incorrect = false;
  std::size_t n = 2;
  std::size_t k = 1;
  double p_max = kDefaultPMax;
  double s_max = kDefaultSMax;
};

int score_choice(const ScoreChoiceArgs& a, std::ostream& out) {
  if (a.n < 2) throw UsageError("--n must be at least 2");
  if (a.k < 1 || a.k >= a.n) throw UsageError("--k must satisfy 1 <= k < n");
  ChoiceScoringParams params = ChoiceScoringParams::for_options(a.n, a.k);
  params.p_max = a.p_max;
  params.s_max = a.s_max;
  params.validate();
  const double clamped = clamp_probability(a.p, params);
  out << "p_rand " << format_number(params.p_rand) << "\n";
  if (clamped != a.p) out << "p clamped " << format_number(a.p) << " -> " << format_number(clamped) << "\n";
  if (!a.incorrect) out << points_line("correct", practical_log_choice_score(clamped, true, params).points);
  if (!a.correct) out << points_line("incorrect", practical_log_choice_score(clamped, false, params).points);
  return kExitOk;
}

struct ScoreIntervalArgs {
  std::string rule;
  double l = 0.0;
  double u = 0.0;
  double x = 0.0;
  double beta = kDefaultBeta;
  std::optional<double> c;
  std::optional<double> delta;
  double d = 0.0;
  bool raw = false;
};

int score_interval(const ScoreIntervalArgs& a, std::ostream& out) {
  const IntervalForecast f{a.l, a.u, a.beta};
  IntervalScoringParams params;
  if (a.rule == "magnitude") params = IntervalScoringParams::magnitude_defaults();
  else if (a.rule == "distance") params = IntervalScoringParams::distance_defaults();
  else params.c = 1.0;
  if (a.c) params.c = *a.c;
  if (a.delta) params.delta = *a.delta;
  params.d = a.d;
  if (a.raw && (a.rule == "linear" || a.rule == "log")) {
    throw UsageError("--raw applies to the distance and magnitude rules only");
  }

  if (a.rule == "linear") {
    out << points_line("score", linear_interval_score(a.x, f, params));
  } else if (a.rule == "log") {
    out << points_line("score", log_interval_score(a.x, f, params));
  } else if (a.raw) {
    const double raw = a.rule == "distance" ? dist_score_raw(a.x, f, params) : mag_score_raw(a.x, f, params);
    out << points_line("raw", raw);
  } else {
    const ScoreResult result =
        a.rule == "distance" ? dist_score_final(a.x, f, params) : mag_score_final(a.x, f, params);
    out << points_line("score", result.points);
    if (result.components && result.components->floored) out << "floored at s_min\n";
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string suite;
  std::string json_path;
  std::size_t grid = 201;
  std::uint64_t seed = VerifyOptions{}.seed;
  bool no_timestamp = false;
};

int verify(const VerifyArgs& a, std::ostream& out) {
  VerifyOptions options;
  options.interval_grid_points = a.grid;
  options.seed = a.seed;
  if (a.grid < 2) throw UsageError("--grid must be at least 2");
  const auto report = run_suite(a.suite, options);
  if (!report) throw UsageError("unknown suite '" + a.suite + "'");
  if (!a.no_timestamp) out << "generated " << now_stamp() << "\n";
  out << render_text(*report);
  if (!a.json_path.empty()) {
    json document = to_json(*report);
    if (!a.no_timestamp) document["generated_at"] = now_stamp();
    write_json_file(a.json_path, document);
  }
  return report->passed() ? kExitOk : kExitCheckFailed;
}

struct SimulateArgs {
  std::string deck;
  std::string agent = "calibrated";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string json_path;
  std::optional<double> gamma;
  std::string edges;
  bool no_timestamp = false;
};

int simulate_cmd(const SimulateArgs& a, std::ostream& out) {
  const auto kind = agent_kind_from_string(a.agent);
  if (!kind) throw UsageError("unknown agent '" + a.agent + "'");
  std::vector<double> edges = kDefaultBinEdges;
  if (!a.edges.empty()) {
    try {
      edges = parse_bin_edges(a.edges);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const Deck deck = load_deck_file(a.deck);
  const SimAgent agent = SimAgent::make(*kind, a.seed, a.gamma);
  const SimulationResult result =
      simulate(deck, agent, a.n, a.no_timestamp ? kFixedStamp : now_stamp(), edges);

  if (!a.out_path.empty()) {
    std::ofstream log(a.out_path, std::ios::out | std::ios::trunc);
    for (const auto& event : result.events) log << serialize_event_line(event) << '\n';
    if (!log) throw Error(ErrorCode::kIo, "cannot write " + a.out_path);
  }
  out << "agent " << a.agent << " seed " << a.seed << " rounds " << a.n << "\n";
  out << stats_text(result.stats);
  out << calibration_table(result.curve);
  if (!a.json_path.empty()) {
    json document = {{"agent", a.agent},
                     {"seed", a.seed},
                     {"rounds", a.n},
                     {"stats", to_json(result.stats)},
                     {"calibration", to_json(result.curve)}};
    if (!a.no_timestamp) document["generated_at"] = now_stamp();
    write_json_file(a.json_path, document);
  }
  return kExitOk;
}

int deck_validate(const std::string& path, std::ostream& out) {
  try {
    const Deck deck = load_deck_file(path);
    out << "OK, " << deck.questions.size() << " questions\n";
    return kExitOk;
  } catch (const DeckError& e) {
    for (const auto& diagnostic : e.diagnostics()) out << diagnostic.to_string() << "\n";
    out << e.diagnostics().size() << " problem(s) in " << path << "\n";
    return kExitData;
  }
}

int deck_import(const std::string& path, const std::string& deck_dir, bool force, std::ostream& out) {
  if (deck_dir.empty()) throw UsageError("--deck-dir (or CALIB_DECK_DIR) is required for import");
  if (const int code = deck_validate(path, out); code != kExitOk) return code;
  const Deck deck = load_deck_file(path);
  fs::create_directories(deck_dir);
  const fs::path target = fs::path(deck_dir) / (deck.id + ".json");
  if (fs::exists(target) && !force) {
    throw Error(ErrorCode::kDuplicate, target.string() + " exists (use --force to replace)");
  }
  fs::copy_file(path, target, fs::copy_options::overwrite_existing);
  out << "imported " << deck.id << " -> " << target.string() << "\n";
  return kExitOk;
}

HttpFrontend* g_frontend = nullptr;

extern "C" void stop_on_signal(int) {
  if (g_frontend != nullptr) g_frontend->stop();
}

struct ServeArgs {
  std::string listen = "127.0.0.1:8080";
  std::string deck_dir = "decks";
  std::string data_dir;
};

int serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  ListenAddress address;
  try {
    address = parse_listen_address(a.listen);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  api::DeckCatalog catalog = api::load_deck_directory(a.deck_dir);
  for (const auto& warning : catalog.warnings) err << "warning: " << warning << "\n";

  std::optional<fs::path> data_dir;
  if (!a.data_dir.empty()) data_dir = a.data_dir;
  SessionStore store(data_dir);
  for (auto& deck : catalog.decks) store.attach_deck(std::move(deck));
  const std::size_t restored = store.load();

  api::ApiService service(store, catalog.warnings);
  HttpFrontend frontend(service);
  const int port = frontend.bind(address);
  out << "listening on " << address.host << ":" << port << " (" << store.decks().size() << " decks, "
      << restored << " sessions restored)\n";
  out.flush();
  g_frontend = &frontend;
  std::signal(SIGINT, stop_on_signal);
  std::signal(SIGTERM, stop_on_signal);
  frontend.serve();
  g_frontend = nullptr;
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Calibration training: scoring, verification, simulation and the HTTP API", "calibrate"};
  app.require_subcommand(1);

  ScoreChoiceArgs choice;
  auto* cmd_choice = app.add_subcommand("score-choice", "Practical-log score of one choice prediction");
  cmd_choice->add_option("--p", choice.p, "Stated confidence")->required()->check(CLI::Range(0.0, 1.0));
  auto* correct_flag = cmd_choice->add_flag("--correct", choice.correct, "Score only the correct outcome");
  auto* incorrect_flag = cmd_choice->add_flag("--incorrect", choice.incorrect, "Score only the incorrect outcome");
  correct_flag->excludes(incorrect_flag);
  cmd_choice->add_option("--n", choice.n, "Number of options")->capture_default_str();
  cmd_choice->add_option("--k", choice.k, "Options selected")->capture_default_str();
  cmd_choice->add_option("--p-max", choice.p_max)->capture_default_str();
  cmd_choice->add_option("--s-max", choice.s_max)->capture_default_str();

  ScoreIntervalArgs interval;
  auto* cmd_interval = app.add_subcommand("score-interval", "Score one interval forecast");
  cmd_interval->add_option("--rule", interval.rule)->required()->check(
      CLI::IsMember({"distance", "magnitude", "linear", "log"}));
  cmd_interval->add_option("--l", interval.l, "Lower bound")->required();
  cmd_interval->add_option("--u", interval.u, "Upper bound")->required();
  cmd_interval->add_option("--x", interval.x, "True value")->required();
  cmd_interval->add_option("--beta", interval.beta)->capture_default_str();
  cmd_interval->add_option("--c", interval.c, "Scale (default 100, ln 100 for magnitude, 1 for linear/log)");
  cmd_interval->add_option("--delta", interval.delta, "Expansion before scoring");
  cmd_interval->add_option("--d", interval.d, "Constant bonus for linear/log")->capture_default_str();
  cmd_interval->add_flag("--raw", interval.raw, "Unexpanded, unfloored rule");

  VerifyArgs verify_args;
  auto* cmd_verify = app.add_subcommand("verify", "Run a numerical verification suite");
  cmd_verify->add_option("--suite", verify_args.suite)->required();
  cmd_verify->add_option("--json", verify_args.json_path, "Also write a JSON report here");
  cmd_verify->add_option("--grid", verify_args.grid, "Interval search points per axis")->capture_default_str();
  cmd_verify->add_option("--seed", verify_args.seed)->capture_default_str();
  cmd_verify->add_flag("--no-timestamp", verify_args.no_timestamp);

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Simulate a trainee and report calibration");
  cmd_sim->add_option("--deck", sim.deck)->required();
  cmd_sim->add_option("--agent", sim.agent)->capture_default_str();
  cmd_sim->add_option("--n", sim.n)->capture_default_str();
  cmd_sim->add_option("--seed", sim.seed)->capture_default_str();
  cmd_sim->add_option("--out", sim.out_path, "Event log (JSON lines)");
  cmd_sim->add_option("--json", sim.json_path, "Summary as JSON");
  cmd_sim->add_option("--gamma", sim.gamma, "Distortion exponent for over/underconfident agents");
  cmd_sim->add_option("--edges", sim.edges, "Comma-separated calibration bin edges");
  cmd_sim->add_flag("--no-timestamp", sim.no_timestamp);

  auto* cmd_deck = app.add_subcommand("deck", "Validate or import a deck");
  cmd_deck->require_subcommand(1);
  std::string validate_path;
  auto* cmd_validate = cmd_deck->add_subcommand("validate", "Check a deck file");
  cmd_validate->add_option("path", validate_path)->required();
  std::string import_path;
  std::string import_dir;
  bool import_force = false;
  auto* cmd_import = cmd_deck->add_subcommand("import", "Validate and copy into the deck directory");
  cmd_import->add_option("path", import_path)->required();
  cmd_import->add_option("--deck-dir", import_dir)->envname("CALIB_DECK_DIR");
  cmd_import->add_flag("--force", import_force);

  ServeArgs serve_args;
  auto* cmd_serve = app.add_subcommand("serve", "Run the JSON HTTP API");
  cmd_serve->add_option("--listen", serve_args.listen)->envname("CALIB_LISTEN")->capture_default_str();
  cmd_serve->add_option("--deck-dir", serve_args.deck_dir)->envname("CALIB_DECK_DIR")->capture_default_str();
  cmd_serve->add_option("--data-dir", serve_args.data_dir, "Session logs; in-memory when empty")
      ->envname("CALIB_DATA_DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_choice) return score_choice(choice, out);
    if (*cmd_interval) return score_interval(interval, out);
    if (*cmd_verify) return verify(verify_args, out);
    if (*cmd_sim) return simulate_cmd(sim, out);
    if (*cmd_validate) return deck_validate(validate_path, out);
    if (*cmd_import) return deck_import(import_path, import_dir, import_force, out);
    if (*cmd_serve) return serve(serve_args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kDomain:
      case ErrorCode::kInvalidInterval:
        return kExitUsage;
      default:
        return kExitData;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace calib::trainer
