#include "rgcc/report.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rgcc {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kSat: return "sat";
    case RunStatus::kUnsat: return "unsat";
    case RunStatus::kTimeout: return "timeout";
  }
  return "?";
}

RunStatus parse_status(const std::string& s) {
  if (s == "sat") return RunStatus::kSat;
  if (s == "unsat") return RunStatus::kUnsat;
  if (s == "timeout") return RunStatus::kTimeout;
  throw InputError("unknown status '" + s + "'");
}

RunResult run_model(const std::string& id, const MatrixInstance& inst, const ModelOptions& opts,
                    double time_limit_s) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  RunReport& r = out.report;
  r.instance = id;
  r.mode = opts.mode;
  MatrixModel model = build_model(inst, opts);
  model.search.time_limit_seconds = time_limit_s;
  const SearchResult res = solve(*model.store, model.search);
  r.nodes = res.stats.nodes;
  r.backtracks = res.stats.backtracks;
  r.failures = res.stats.failures;
  r.root_failure = res.stats.root_failure;
  switch (res.outcome) {
    case Outcome::kSat: r.status = RunStatus::kSat; break;
    case Outcome::kUnsat: r.status = RunStatus::kUnsat; break;
    case Outcome::kTimeout: r.status = RunStatus::kTimeout; break;
  }
  if (r.status == RunStatus::kSat) {
    out.solution.assign(inst.rows, std::vector<int>(inst.cols));
    for (int i = 0; i < inst.rows; ++i)
      for (int k = 0; k < inst.cols; ++k) out.solution[i][k] = static_cast<int>(res.assignment[model.cells[i][k]]);
    if (!inst.satisfied_by(out.solution)) throw std::logic_error(id + ": solution fails the independent check");
  }
  r.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

RunResult run_document(const std::string& id, const Document& doc, Mode mode, bool aggregate_words,
                       double time_limit_s) {
  if (const auto* roster = std::get_if<RosterInstance>(&doc)) {
    if (coverage_exceeds_staff(*roster)) {
      RunResult out;
      out.report.instance = id;
      out.report.mode = mode;
      out.report.status = RunStatus::kUnsat;
      out.report.root_failure = true;
      return out;
    }
    return run_model(id, roster_to_matrix(*roster), roster_options(*roster, mode, aggregate_words), time_limit_s);
  }
  ModelOptions opts;
  opts.mode = mode;
  opts.aggregate_words = aggregate_words;
  return run_model(id, std::get<MatrixInstance>(doc), opts, time_limit_s);
}

std::string report_header() { return "instance\tmode\tstatus\ttime_s\tnodes\tbacktracks\tfailures\troot_failure"; }

std::string format_report(const RunReport& r) {
  char time[32];
  std::snprintf(time, sizeof time, "%.3f", r.time_s);
  std::ostringstream out;
  out << r.instance << '\t' << to_string(r.mode) << '\t' << to_string(r.status) << '\t' << time << '\t' << r.nodes
      << '\t' << r.backtracks << '\t' << r.failures << '\t' << (r.root_failure ? 1 : 0);
  return out.str();
}

RunReport parse_report(const std::string& line) {
  std::vector<std::string> f;
  std::istringstream in(line);
  std::string tok;
  while (std::getline(in, tok, '\t')) f.push_back(tok);
  if (f.size() != 8) throw InputError("report line needs 8 fields");
  RunReport r;
  r.instance = f[0];
  r.mode = parse_mode(f[1]);
  r.status = parse_status(f[2]);
  r.time_s = std::stod(f[3]);
  r.nodes = std::stoll(f[4]);
  r.backtracks = std::stoll(f[5]);
  r.failures = std::stoll(f[6]);
  r.root_failure = f[7] == "1";
  return r;
}

Summary summarize(const std::vector<RunReport>& reports, const std::vector<Mode>& modes) {
  Summary s;
  s.modes = modes;
  if (reports.empty()) return s;
  std::map<std::string, std::map<Mode, const RunReport*>> by_instance;
  for (const auto& r : reports) by_instance[r.instance][r.mode] = &r;
  for (RunStatus status : {RunStatus::kSat, RunStatus::kUnsat}) {
    SummaryRow row{status, 0, std::vector<SummaryCell>(modes.size())};
    for (const auto& [id, runs] : by_instance) {
      bool known = false, common = true;
      for (Mode m : modes) {
        auto it = runs.find(m);
        if (it == runs.end() || it->second->status == RunStatus::kTimeout) {
          common = false;
          continue;
        }
        known |= it->second->status == status;
      }
      if (!known) continue;
      ++row.known;
      for (size_t i = 0; i < modes.size(); ++i) {
        auto it = runs.find(modes[i]);
        if (it == runs.end() || it->second->status != status) continue;
        SummaryCell& c = row.cells[i];
        ++c.decided;
        if (common) {
          ++c.common;
          c.mean_time += it->second->time_s;
          c.mean_backtracks += static_cast<double>(it->second->backtracks);
        }
      }
    }
    for (auto& c : row.cells)
      if (c.common > 0) {
        c.mean_time /= c.common;
        c.mean_backtracks /= c.common;
      }
    s.rows.push_back(row);
  }
  return s;
}

std::string format_summary(const Summary& s) {
  std::ostringstream out;
  char buf[64];
  out << "              ";
  for (Mode m : s.modes) {
    std::snprintf(buf, sizeof buf, " | %-23s", to_string(m).c_str());
    out << buf;
  }
  out << "\nStatus   Known";
  for (size_t i = 0; i < s.modes.size(); ++i) out << " | #Inst   Time     #Bktk";
  out << '\n';
  for (const auto& row : s.rows) {
    std::snprintf(buf, sizeof buf, "%-7s %6d", to_string(row.status).c_str(), row.known);
    out << buf;
    for (const auto& c : row.cells) {
      std::snprintf(buf, sizeof buf, " | %5d %6.2f %9.1f", c.decided, c.mean_time, c.mean_backtracks);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rgcc
