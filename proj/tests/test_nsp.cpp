#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rgcc/format.hpp"
#include "rgcc/generators.hpp"
#include "rgcc/oracle.hpp"
#include "rgcc/report.hpp"
#include "rgcc/roster.hpp"
#include "support.hpp"

using namespace rgcc;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_canonical(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimalRoster =
    "ROSTER 1 1 2\n"
    "COVER 0: 1 0\n"
    "SHIFT_OCC 0 0 1\n"
    "SHIFT_OCC 1 0 1\n"
    "WORK_OCC 0 1\n"
    "SHIFT_STRETCH 0 1 1\n"
    "SHIFT_STRETCH 1 1 1\n"
    "WORK_STRETCH 1 1\n"
    "END\n";

}  // namespace

TEST_CASE("canonical: minimal roster parses") {
  const Document doc = parse_canonical(kMinimalRoster);
  REQUIRE(std::holds_alternative<RosterInstance>(doc));
  const auto& r = std::get<RosterInstance>(doc);
  CHECK(r.nurses == 1);
  CHECK(r.days == 1);
  CHECK(r.shifts == 2);
  CHECK(r.coverage[0] == std::vector<int>{1, 0});
  CHECK(emit_canonical(r) == kMinimalRoster);
}

TEST_CASE("canonical: round trip on random matrices") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    RandomParams p;
    p.rows = 1 + static_cast<int>(rng() % 4);
    p.cols = 1 + static_cast<int>(rng() % 4);
    p.values = 1 + static_cast<int>(rng() % 3);
    p.states = 1 + static_cast<int>(rng() % 4);
    p.tightness = static_cast<double>(rng() % 11) / 10;
    p.holes = static_cast<double>(rng() % 5) / 10;
    p.resources = static_cast<int>(rng() % 3);
    p.seed = rng();
    MatrixInstance inst = gen_random(p);
    if (rng() % 2)
      for (auto& c : inst.columns) c.label_sum = Interval{0, static_cast<int64_t>(rng() % 5)};
    const std::string text = emit_canonical(inst);
    const Document back = parse_canonical(text);
    REQUIRE(std::holds_alternative<MatrixInstance>(back));
    CHECK(std::get<MatrixInstance>(back) == inst);
    CHECK(emit_canonical(back) == text);
  }
}

TEST_CASE("canonical: round trip on reductions and rosters") {
  const Cnf f{3, {{1, -2, 3}, {-1, 2}, {2, 3}}};
  const Matching3d m{2, {{0, 0, 1}, {1, 1, 0}, {0, 1, 1}}};
  const Hypergraph h{3, {{0, 1}, {1, 2}}};
  for (const MatrixInstance& inst : {gen_3sat(f), gen_exact_cover({3, {{1, 2}, {3}, {2, 3}}}), gen_3dm_dc(m),
                                     gen_3dm_bc(m), gen_hitting_set(h, 2, HittingVariant::kGcc),
                                     gen_hitting_set(h, 2, HittingVariant::kSum)})
    CHECK(std::get<MatrixInstance>(parse_canonical(emit_canonical(inst))) == inst);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const RosterInstance r = gen_roster({seed % 2 ? 8 : 5, 7, 3, seed});
    CHECK(std::get<RosterInstance>(parse_canonical(emit_canonical(r))) == r);
  }
}

TEST_CASE("canonical: malformed line reports its number") {
  std::string text = kMinimalRoster;
  text.replace(text.find("WORK_OCC 0 1"), 12, "WORK_OCC x 1");
  CHECK(error_of(text).rfind("line 5:", 0) == 0);
  CHECK(error_of("MATRIX 2 2\n").rfind("line 1:", 0) == 0);
  CHECK(error_of("BOGUS\n").rfind("line 1:", 0) == 0);
}

TEST_CASE("canonical: truncated input names the missing section") {
  const std::string text = kMinimalRoster;
  const std::string cut = text.substr(0, text.find("SHIFT_STRETCH"));
  const std::string msg = error_of(cut);
  CHECK(msg.find("missing") != std::string::npos);
  CHECK(msg.find("SHIFT_STRETCH") != std::string::npos);

  RandomParams p;
  const std::string mtext = emit_canonical(gen_random(p));
  const std::string mcut = mtext.substr(0, mtext.find("END_ROW_DFA"));
  CHECK(error_of(mcut).find("END_ROW_DFA") != std::string::npos);
  CHECK(error_of(mtext + "MATRIX 1 1 1\n").find("after END") != std::string::npos);
}

TEST_CASE("nsp: header and coverage") {
  std::string inst = "25 7 4\n";
  for (int d = 0; d < 7; ++d) inst += "3 2 1 0\n";
  std::string cases;
  for (int s = 0; s < 4; ++s) cases += "0 7 1 7\n";
  cases += "2 5 1 4\n";
  const RosterInstance r = parse_nsp(inst, cases);
  CHECK(r.nurses == 25);
  CHECK(r.days == 7);
  CHECK(r.shifts == 4);
  CHECK(r.coverage[6] == std::vector<int>{3, 2, 1, 0});
  CHECK(r.work_occurrence == Interval{2, 5});
  CHECK(r.work_stretch == Interval{1, 4});
}

TEST_CASE("nsp: coverage line count mismatch fails") {
  std::string cases;
  for (int s = 0; s < 4; ++s) cases += "0 7 1 7\n";
  cases += "0 7 1 7\n";
  std::string few = "25 7 4\n";
  for (int d = 0; d < 6; ++d) few += "1 1 1 0\n";
  CHECK_THROWS_AS(parse_nsp(few, cases), InputError);
  std::string shape = "25 7 4\n";
  for (int d = 0; d < 7; ++d) shape += d == 3 ? "1 1 1\n" : "1 1 1 0\n";
  CHECK_THROWS_AS(parse_nsp(shape, cases), InputError);
  CHECK_THROWS_AS(parse_nsp("25 7\n", cases), InputError);
}

TEST_CASE("nsp: preference block is ignored") {
  std::string inst = "2 2 2\n1 0\n1 0\n\n";
  inst += "# preferences\n1 1 2 2\n3 3 1 1\n";
  const std::string cases = "0 2 1 2\n0 2 1 2\n0 2 1 2\n";
  std::vector<std::string> warnings;
  const RosterInstance r = parse_nsp(inst, cases, &warnings);
  CHECK(r.coverage == std::vector<std::vector<int>>{{1, 0}, {1, 0}});
  CHECK(warnings.size() == 1);
}

TEST_CASE("roster: toy instance is sat and agrees with brute force") {
  RosterInstance r = RosterInstance::unconstrained(2, 2, 2);
  r.coverage = {{1, 0}, {1, 0}};
  const MatrixInstance m = roster_to_matrix(r);
  REQUIRE(brute_find(m).has_value());
  int64_t direct = 0;
  // cells hold shift indices; a day is covered when some nurse works shift 0
  testing::for_each_word(4, 2, [&](const Word& w) {
    if ((w[0] == 0 || w[2] == 0) && (w[1] == 0 || w[3] == 0)) ++direct;
  });
  CHECK(brute_count(m) == direct);
  for (Mode mode : {Mode::kDecomp, Mode::kWa, Mode::kCwa}) {
    const RunResult res = run_model("toy", m, roster_options(r, mode, false, false), 5);
    CHECK(res.report.status == RunStatus::kSat);
    CHECK(m.satisfied_by(res.solution));
  }
}

TEST_CASE("roster: rules match brute-force row checks") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RosterInstance r = gen_roster({2, 4, 3, seed});
    const MatrixInstance m = roster_to_matrix(r);
    const SymbolSet work = r.working_shifts();
    testing::for_each_word(4, 3, [&](const Word& w) {
      bool ok = true;
      auto occ = [&](const SymbolSet& s) {
        int n = 0;
        for (int v : w) n += s.contains(v);
        return n;
      };
      auto lengths_ok = [&](const SymbolSet& s, Interval b) {
        const auto [mn, mx] = testing::stretch_lengths(w, s);
        return mn == 0 || (b.contains(mn) && b.contains(mx));
      };
      for (int s = 0; s < 3; ++s) {
        const SymbolSet one(3, {s});
        ok &= r.shift_occurrence[s].contains(occ(one));
        ok &= lengths_ok(one, r.shift_stretch[s]);
      }
      ok &= r.work_occurrence.contains(occ(work));
      ok &= lengths_ok(work, r.work_stretch);
      CHECK(satisfies(m.row, w) == ok);
    });
  }
}

TEST_CASE("roster: coverage beyond staff is unsat at the root") {
  RosterInstance r = RosterInstance::unconstrained(2, 2, 2);
  r.coverage = {{3, 0}, {0, 0}};
  CHECK(coverage_exceeds_staff(r));
  const MatrixInstance m = roster_to_matrix(r);
  for (Mode mode : {Mode::kDecomp, Mode::kWa, Mode::kCwa}) {
    const RunResult res = run_model("over", m, roster_options(r, mode), 5);
    CHECK(res.report.status == RunStatus::kUnsat);
    CHECK(res.report.root_failure);
    CHECK(res.report.backtracks == 0);
  }
}

TEST_CASE("report: line round trip") {
  RunReport r{"a b", Mode::kCwa, RunStatus::kTimeout, 1.5, 10, 7, 3, false};
  CHECK(parse_report(format_report(r)) == r);
  CHECK(report_header().find("backtracks") != std::string::npos);
}

TEST_CASE("bench: empty run set gives an empty summary") {
  const Summary s = summarize({}, {Mode::kDecomp, Mode::kWa, Mode::kCwa});
  CHECK(s.rows.empty());
}

TEST_CASE("bench: means only over instances no mode timed out on") {
  std::vector<RunReport> reports{
      {"a", Mode::kDecomp, RunStatus::kSat, 1.0, 5, 4, 4, false},
      {"a", Mode::kWa, RunStatus::kSat, 3.0, 3, 2, 2, false},
      {"b", Mode::kDecomp, RunStatus::kTimeout, 9.0, 9, 9, 9, false},
      {"b", Mode::kWa, RunStatus::kSat, 2.0, 1, 100, 0, false},
      {"c", Mode::kDecomp, RunStatus::kUnsat, 1.0, 1, 10, 10, false},
      {"c", Mode::kWa, RunStatus::kUnsat, 0.5, 1, 0, 1, true},
  };
  const Summary s = summarize(reports, {Mode::kDecomp, Mode::kWa});
  REQUIRE(s.rows.size() == 2);
  const SummaryRow& sat = s.rows[0];
  CHECK(sat.known == 2);
  CHECK(sat.cells[0].decided == 1);
  CHECK(sat.cells[1].decided == 2);
  CHECK(sat.cells[1].common == 1);
  CHECK(sat.cells[1].mean_time == doctest::Approx(3.0));
  CHECK(sat.cells[1].mean_backtracks == doctest::Approx(2.0));
  const SummaryRow& unsat = s.rows[1];
  CHECK(unsat.known == 1);
  CHECK(unsat.cells[0].mean_backtracks == doctest::Approx(10.0));
  CHECK(unsat.cells[1].mean_backtracks == doctest::Approx(0.0));
  CHECK(format_summary(s).find("#Bktk") != std::string::npos);
}

TEST_CASE("bench: single-threaded runs are deterministic") {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    const RosterInstance r = gen_roster({5, 7, 3, seed});
    const MatrixInstance m = roster_to_matrix(r);
    for (Mode mode : {Mode::kDecomp, Mode::kWa, Mode::kCwa}) {
      const RunResult a = run_model("d", m, roster_options(r, mode), 5);
      const RunResult b = run_model("d", m, roster_options(r, mode), 5);
      if (a.report.status == RunStatus::kTimeout || b.report.status == RunStatus::kTimeout) continue;
      CHECK(a.report.status == b.report.status);
      CHECK(a.report.nodes == b.report.nodes);
      CHECK(a.report.backtracks == b.report.backtracks);
      CHECK(a.solution == b.solution);
    }
  }
}

TEST_CASE("bench: sat reports pass the independent check") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const RosterInstance r = gen_roster({5, 7, 3, seed});
    const MatrixInstance m = roster_to_matrix(r);
    const RunResult res = run_model("s", m, roster_options(r, Mode::kCwa), 5);
    if (res.report.status == RunStatus::kSat) CHECK(m.satisfied_by(res.solution));
  }
}
