#include "calib/session/event_log.hpp"

#include "calib/error.hpp"

namespace calib {

std::string serialize_event_line(const PredictionEvent& event) {
  return to_json(event).dump();
}

std::vector<PredictionEvent> read_event_log(std::istream& source) {
  std::vector<PredictionEvent> events;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded()) {
      throw Error(ErrorCode::kCorruptLog,
                  "line " + std::to_string(line_number) + ": not valid JSON");
    }
    try {
      events.push_back(event_from_json(record));
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorruptLog,
                  "line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return events;
}

std::vector<PredictionEvent> read_event_log_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open event log " + path.string());
  return read_event_log(in);
}

SessionStats replay(std::istream& source) {
  const auto events = read_event_log(source);
  return summarize(events);
}

EventLogWriter::EventLogWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::out | std::ios::app) {
  if (!out_) throw Error(ErrorCode::kIo, "cannot open event log " + path.string() + " for append");
}

void EventLogWriter::append(const PredictionEvent& event) {
  out_ << serialize_event_line(event) << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIo, "write to " + path_.string() + " failed");
}

}  // namespace calib
