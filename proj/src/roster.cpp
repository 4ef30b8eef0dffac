#include "rgcc/roster.hpp"

#include <random>
#include <sstream>

#include "rgcc/builders.hpp"

namespace rgcc {

RosterInstance RosterInstance::unconstrained(int nurses, int days, int shifts) {
  RosterInstance r;
  r.nurses = nurses;
  r.days = days;
  r.shifts = shifts;
  r.coverage.assign(static_cast<size_t>(days), std::vector<int>(static_cast<size_t>(shifts), 0));
  r.shift_occurrence.assign(static_cast<size_t>(shifts), Interval{0, days});
  r.work_occurrence = {0, days};
  r.shift_stretch.assign(static_cast<size_t>(shifts), Interval{1, days});
  r.work_stretch = {1, days};
  return r;
}

void RosterInstance::validate() const {
  if (nurses < 1 || days < 1) throw InputError("roster needs nurses and days");
  if (shifts < 2) throw InputError("roster needs a working shift and the off-duty shift");
  if (static_cast<int>(coverage.size()) != days) throw InputError("coverage needs one line per day");
  for (const auto& day : coverage) {
    if (static_cast<int>(day.size()) != shifts) throw InputError("coverage needs one number per shift");
    for (int c : day)
      if (c < 0) throw InputError("negative coverage");
  }
  if (static_cast<int>(shift_occurrence.size()) != shifts || static_cast<int>(shift_stretch.size()) != shifts)
    throw InputError("one occurrence and one stretch rule per shift required");
  auto check_occ = [&](Interval b) {
    if (b.lo < 0 || b.hi > days || b.empty()) throw InputError("occurrence bounds outside [0, D]");
  };
  auto check_len = [&](Interval b) {
    if (b.lo < 1 || b.hi > days || b.empty()) throw InputError("stretch bounds outside [1, D]");
  };
  for (auto b : shift_occurrence) check_occ(b);
  check_occ(work_occurrence);
  for (auto b : shift_stretch) check_len(b);
  check_len(work_stretch);
}

SymbolSet RosterInstance::working_shifts() const {
  SymbolSet s(shifts, {});
  for (int v = 0; v + 1 < shifts; ++v) s.insert(v);
  return s;
}

bool coverage_exceeds_staff(const RosterInstance& inst) {
  for (const auto& day : inst.coverage) {
    int64_t total = 0;
    for (int c : day) total += c;
    if (total > inst.nurses) return true;
  }
  return false;
}

MatrixInstance roster_to_matrix(const RosterInstance& inst) {
  inst.validate();
  const int S = inst.shifts, D = inst.days;
  WeightedDfa row = make_weighted(Dfa::universal(S));
  auto add_rule = [&](const SymbolSet& set, Interval len) {
    if (len.lo <= 1 && len.hi >= D) return;
    row = product(row, make_weighted(build_stretch_length_rule(set, static_cast<int>(len.lo), static_cast<int>(len.hi))));
  };
  for (int s = 0; s < S; ++s) add_rule(SymbolSet(S, {s}), inst.shift_stretch[s]);
  add_rule(inst.working_shifts(), inst.work_stretch);

  std::vector<SymbolSet> sets;
  std::vector<Interval> bounds;
  for (int s = 0; s < S; ++s)
    if (inst.shift_occurrence[s] != Interval{0, D}) {
      sets.push_back(SymbolSet(S, {s}));
      bounds.push_back(inst.shift_occurrence[s]);
    }
  if (inst.work_occurrence != Interval{0, D}) {
    sets.push_back(inst.working_shifts());
    bounds.push_back(inst.work_occurrence);
  }
  if (!sets.empty()) {
    WeightedDfa counter = build_occurrence_counter(sets);
    counter.resource_bounds = bounds;
    row = product(row, counter);
  }

  MatrixInstance m = MatrixInstance::unconstrained(inst.nurses, D, S, std::move(row));
  for (int v = 0; v < S; ++v) m.labels[v] = v + 1;
  for (int d = 0; d < D; ++d)
    for (int s = 0; s < S; ++s) m.columns[d].cards[s] = {inst.coverage[d][s], inst.nurses};
  return m;
}

ModelOptions roster_options(const RosterInstance& inst, Mode mode, bool aggregate_words, bool symmetry_breaking) {
  ModelOptions o;
  o.mode = mode;
  o.aggregate_words = aggregate_words;
  o.symmetry_breaking = symmetry_breaking;
  PropertySet props = PropertySet::defaults(inst.shifts);
  props.stretch_sets.push_back(inst.working_shifts());
  props.occurrence_sets.push_back(inst.working_shifts());
  o.properties = props;
  for (int s = 0; s < inst.shifts; ++s)
    o.occurrence_hints.push_back({SymbolSet(inst.shifts, {s}), inst.shift_occurrence[s]});
  o.occurrence_hints.push_back({inst.working_shifts(), inst.work_occurrence});
  for (int s = 0; s < inst.shifts; ++s) o.stretch_hints.push_back({SymbolSet(inst.shifts, {s}), inst.shift_stretch[s]});
  o.stretch_hints.push_back({inst.working_shifts(), inst.work_stretch});
  return o;
}

RosterInstance gen_roster(const RosterParams& p) {
  if (p.nurses < 1 || p.days < 1 || p.shifts < 2) throw InputError("roster parameters must be positive");
  std::mt19937_64 rng(p.seed);
  auto uniform = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1)); };
  const int N = p.nurses, D = p.days, S = p.shifts, W = S - 1;
  RosterInstance r = RosterInstance::unconstrained(N, D, S);

  // case rules
  const int work_hi = uniform(std::max(1, D / 2), std::min(D, D / 2 + 2));
  r.work_occurrence = {uniform(std::max(0, work_hi - 2), work_hi), work_hi};
  r.work_stretch = {uniform(1, 2), uniform(3, std::max(3, D - 2))};
  for (int s = 0; s < W; ++s) {
    r.shift_occurrence[s] = {0, uniform(2, std::max(2, work_hi - 1))};
    r.shift_stretch[s] = {1, uniform(2, 4)};
  }
  r.shift_occurrence[W] = {D - work_hi, D - r.work_occurrence.lo};
  r.shift_stretch[W] = {1, uniform(2, D)};

  // coverage around the working capacity; load > 1 tends to be unsat
  const double load = 0.75 + 0.1 * static_cast<double>(uniform(0, 5));
  const int demand = static_cast<int>(load * N * work_hi);
  std::vector<int> per_day(D, 0);
  for (int i = 0; i < demand; ++i) ++per_day[uniform(0, D - 1)];
  for (int d = 0; d < D; ++d) {
    int left = std::min(per_day[d], N);
    for (int s = 0; s < W && left > 0; ++s) {
      const int c = s + 1 == W ? left : uniform(0, left);
      r.coverage[d][s] = std::min(c, static_cast<int>(r.shift_occurrence[s].hi * N / D + 1));
      left -= r.coverage[d][s];
    }
  }
  return r;
}

namespace {

std::vector<std::vector<int64_t>> numeric_lines(const std::string& text) {
  std::vector<std::vector<int64_t>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<int64_t> nums;
    std::string tok;
    bool numeric = true;
    while (ls >> tok) {
      try {
        size_t used = 0;
        nums.push_back(std::stoll(tok, &used));
        numeric &= used == tok.size();
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!nums.empty() || !numeric) out.push_back(numeric ? nums : std::vector<int64_t>{});
  }
  return out;
}

}  // namespace

RosterInstance parse_nsp(const std::string& instance_text, const std::string& case_text,
                         std::vector<std::string>* warnings) {
  const auto lines = numeric_lines(instance_text);
  if (lines.empty() || lines[0].size() != 3) throw InputError("instance header must be \"N D S\"");
  const int N = static_cast<int>(lines[0][0]), D = static_cast<int>(lines[0][1]), S = static_cast<int>(lines[0][2]);
  if (N < 1 || D < 1 || S < 2) throw InputError("instance header values out of range");
  if (static_cast<int>(lines.size()) < 1 + D) throw InputError("expected " + std::to_string(D) + " coverage lines");
  RosterInstance r = RosterInstance::unconstrained(N, D, S);
  for (int d = 0; d < D; ++d) {
    const auto& l = lines[1 + d];
    if (static_cast<int>(l.size()) != S)
      throw InputError("coverage line " + std::to_string(d + 1) + " needs " + std::to_string(S) + " numbers");
    for (int s = 0; s < S; ++s) r.coverage[d][s] = static_cast<int>(l[s]);
  }
  if (warnings && static_cast<int>(lines.size()) > 1 + D)
    warnings->push_back("ignored " + std::to_string(lines.size() - 1 - D) + " trailing preference lines");

  const auto rules = numeric_lines(case_text);
  if (static_cast<int>(rules.size()) < S + 1)
    throw InputError("case file needs " + std::to_string(S + 1) + " rule lines");
  for (int i = 0; i <= S; ++i) {
    const auto& l = rules[i];
    if (l.size() != 4) throw InputError("case rule line " + std::to_string(i + 1) + " needs 4 numbers");
    const Interval occ{l[0], l[1]}, len{l[2], l[3]};
    if (i < S) {
      r.shift_occurrence[i] = occ;
      r.shift_stretch[i] = len;
    } else {
      r.work_occurrence = occ;
      r.work_stretch = len;
    }
  }
  if (warnings && static_cast<int>(rules.size()) > S + 1) warnings->push_back("ignored trailing case data");
  r.validate();
  return r;
}

}  // namespace rgcc
