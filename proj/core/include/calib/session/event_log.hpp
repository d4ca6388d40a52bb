#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "calib/session/calibration.hpp"
#include "calib/session/event.hpp"

namespace calib {

// One compact JSON object, no trailing newline.
std::string serialize_event_line(const PredictionEvent& event);

// Blank lines are skipped. A line that does not parse stops the read with
// Error(kCorruptLog) naming its 1-based line number.
std::vector<PredictionEvent> read_event_log(std::istream& source);
std::vector<PredictionEvent> read_event_log_file(const std::filesystem::path& path);

SessionStats replay(std::istream& source);

// Append-only writer; every append is flushed before returning.
class EventLogWriter {
 public:
  explicit EventLogWriter(const std::filesystem::path& path);

  void append(const PredictionEvent& event);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace calib
