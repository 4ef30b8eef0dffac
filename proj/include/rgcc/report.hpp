#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rgcc/format.hpp"
#include "rgcc/matrix_model.hpp"

namespace rgcc {

enum class RunStatus { kSat, kUnsat, kTimeout };
std::string to_string(RunStatus s);
RunStatus parse_status(const std::string& s);

struct RunReport {
  std::string instance;
  Mode mode = Mode::kDecomp;
  RunStatus status = RunStatus::kTimeout;
  double time_s = 0;
  int64_t nodes = 0;
  int64_t backtracks = 0;
  int64_t failures = 0;
  bool root_failure = false;
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

struct RunResult {
  RunReport report;
  Matrix solution;  // empty unless sat
};

/// Builds the model, searches to the first solution and re-checks it
/// against the instance. Throws std::logic_error when a reported solution
/// fails the re-check.
RunResult run_model(const std::string& id, const MatrixInstance& inst, const ModelOptions& opts,
                    double time_limit_s);

/// Runs a canonical document in `mode`. A roster whose coverage exceeds
/// its staff is reported unsat at the root without building a model.
RunResult run_document(const std::string& id, const Document& doc, Mode mode, bool aggregate_words,
                       double time_limit_s);

/// Tab-separated, one record per line.
std::string report_header();
std::string format_report(const RunReport& r);
RunReport parse_report(const std::string& line);

/// Per status and mode: instances decided, and mean time and backtracks
/// over the instances no mode timed out on.
struct SummaryCell {
  int decided = 0;
  int common = 0;
  double mean_time = 0;
  double mean_backtracks = 0;
};
struct SummaryRow {
  RunStatus status;
  int known = 0;  // instances some mode decided with this status
  std::vector<SummaryCell> cells;  // one per mode, in `modes` order
};
struct Summary {
  std::vector<Mode> modes;
  std::vector<SummaryRow> rows;  // sat, then unsat; empty for no reports
};

Summary summarize(const std::vector<RunReport>& reports, const std::vector<Mode>& modes);
/// Aligned text table: Status, Known, then #Inst, Time, #Bktk per mode.
std::string format_summary(const Summary& s);

}  // namespace rgcc
