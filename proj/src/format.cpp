#include "rgcc/format.hpp"

#include <fstream>
#include <optional>
#include <sstream>

namespace rgcc {
namespace {

std::string bound(int64_t v) {
  if (v >= Interval::kInf) return "inf";
  if (v <= -Interval::kInf) return "-inf";
  return std::to_string(v);
}

struct Line {
  int number;
  std::string text;
  std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

class Reader {
 public:
  explicit Reader(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      lines_.push_back({n, raw, split(raw)});
    }
    last_line_ = n;
  }

  static std::vector<std::string> split(const std::string& s) {
    std::string t = s;
    if (auto hash = t.find('#'); hash != std::string::npos) t.erase(hash);
    std::istringstream in(t);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
  }

  /// Next non-blank line, or nullptr at the end.
  const Line* next() {
    while (pos_ < lines_.size() && lines_[pos_].tokens.empty()) ++pos_;
    return pos_ < lines_.size() ? &lines_[pos_++] : nullptr;
  }
  const Line& expect(const std::string& section) {
    const Line* l = next();
    if (!l) fail(last_line_ + 1, "unexpected end of input: missing " + section);
    return *l;
  }
  /// Raw lines up to the terminator, which is consumed.
  std::pair<std::string, int> block(const std::string& terminator) {
    std::string body;
    const int first = pos_ < lines_.size() ? lines_[pos_].number : last_line_ + 1;
    while (pos_ < lines_.size()) {
      const Line& l = lines_[pos_++];
      if (l.tokens.size() == 1 && l.tokens[0] == terminator) return {body, first};
      body += l.text;
      body += '\n';
    }
    fail(last_line_ + 1, "unexpected end of input: missing " + terminator);
  }

 private:
  std::vector<Line> lines_;
  size_t pos_ = 0;
  int last_line_ = 0;
};

int64_t number(const Line& l, size_t i) {
  if (i >= l.tokens.size()) fail(l.number, "expected a number after '" + l.tokens.back() + "'");
  const std::string& t = l.tokens[i];
  if (t == "inf") return Interval::kInf;
  if (t == "-inf") return -Interval::kInf;
  try {
    size_t used = 0;
    const int64_t v = std::stoll(t, &used);
    if (used == t.size()) return v;
  } catch (const std::exception&) {
  }
  fail(l.number, "expected a number, got '" + t + "'");
}

void arity(const Line& l, size_t n) {
  if (l.tokens.size() != n)
    fail(l.number, "'" + l.tokens[0] + "' takes " + std::to_string(n - 1) + " fields");
}

int index_in(const Line& l, size_t i, int64_t size, const char* what) {
  const int64_t v = number(l, i);
  if (v < 0 || v >= size) fail(l.number, std::string(what) + " " + std::to_string(v) + " out of range");
  return static_cast<int>(v);
}

MatrixInstance parse_matrix(Reader& in, const Line& header) {
  arity(header, 4);
  const int64_t R = number(header, 1), K = number(header, 2), V = number(header, 3);
  if (R < 1 || K < 1 || V < 1 || R > 100000 || K > 100000 || V > 100000)
    fail(header.number, "matrix dimensions out of range");
  MatrixInstance inst = MatrixInstance::unconstrained(static_cast<int>(R), static_cast<int>(K),
                                                      static_cast<int>(V), make_weighted(Dfa::universal(1)));
  const Line& values = in.expect("VALUES");
  if (values.tokens[0] != "VALUES") fail(values.number, "expected VALUES");
  arity(values, static_cast<size_t>(V) + 1);
  for (int v = 0; v < V; ++v) inst.labels[v] = number(values, static_cast<size_t>(v) + 1);

  bool have_dfa = false;
  for (;;) {
    const Line& l = in.expect("END");
    const std::string& key = l.tokens[0];
    if (key == "END") {
      arity(l, 1);
      break;
    }
    if (key == "DOMAIN") {
      if (l.tokens.size() < 4 || l.tokens[2].back() != ':') fail(l.number, "expected 'DOMAIN r k: v...'");
      const int r = index_in(l, 1, R, "row");
      Line kline = l;
      kline.tokens[2].pop_back();
      const int k = index_in(kline, 2, K, "column");
      SymbolSet d(static_cast<int>(V), {});
      for (size_t i = 3; i < l.tokens.size(); ++i) d.insert(index_in(l, i, V, "value"));
      inst.domains[r][k] = d;
    } else if (key == "ROW_DFA") {
      arity(l, 1);
      if (have_dfa) fail(l.number, "duplicate ROW_DFA");
      auto [body, first] = in.block("END_ROW_DFA");
      inst.row = parse_dump(body, first);
      have_dfa = true;
    } else if (key == "COL_GCC") {
      arity(l, 5);
      const int k = index_in(l, 1, K, "column");
      const int v = index_in(l, 2, V, "value");
      inst.columns[k].cards[v] = {number(l, 3), number(l, 4)};
    } else if (key == "COL_SUM") {
      arity(l, 4);
      const int k = index_in(l, 1, K, "column");
      inst.columns[k].label_sum = Interval{number(l, 2), number(l, 3)};
    } else {
      fail(l.number, "unknown section '" + key + "'");
    }
  }
  if (!have_dfa) throw InputError("missing section ROW_DFA");
  try {
    inst.validate();
  } catch (const InputError& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
  return inst;
}

Interval pair_at(const Line& l, size_t i) { return {number(l, i), number(l, i + 1)}; }

RosterInstance parse_roster(Reader& in, const Line& header) {
  arity(header, 4);
  const int64_t N = number(header, 1), D = number(header, 2), S = number(header, 3);
  if (N < 1 || D < 1 || S < 2 || N > 100000 || D > 10000 || S > 1000) fail(header.number, "roster dimensions out of range");
  RosterInstance r = RosterInstance::unconstrained(static_cast<int>(N), static_cast<int>(D), static_cast<int>(S));
  std::vector<bool> covered(static_cast<size_t>(D), false);
  std::vector<bool> occ_seen(static_cast<size_t>(S), false), stretch_seen(static_cast<size_t>(S), false);
  bool work_occ_seen = false, work_stretch_seen = false;
  auto first_missing = [&]() -> std::string {
    for (int64_t d = 0; d < D; ++d)
      if (!covered[d]) return "COVER " + std::to_string(d);
    for (int64_t s = 0; s < S; ++s)
      if (!occ_seen[s]) return "SHIFT_OCC " + std::to_string(s);
    if (!work_occ_seen) return "WORK_OCC";
    for (int64_t s = 0; s < S; ++s)
      if (!stretch_seen[s]) return "SHIFT_STRETCH " + std::to_string(s);
    if (!work_stretch_seen) return "WORK_STRETCH";
    return "";
  };
  for (;;) {
    const std::string missing = first_missing();
    const Line& l = in.expect(missing.empty() ? "END" : missing);
    const std::string& key = l.tokens[0];
    if (key == "END") {
      arity(l, 1);
      if (!missing.empty()) fail(l.number, "missing section " + missing);
      break;
    }
    if (key == "COVER") {
      arity(l, static_cast<size_t>(S) + 2);
      if (l.tokens[1].back() != ':') fail(l.number, "expected 'COVER d: c...'");
      Line dl = l;
      dl.tokens[1].pop_back();
      const int d = index_in(dl, 1, D, "day");
      for (int s = 0; s < S; ++s) r.coverage[d][s] = static_cast<int>(number(l, static_cast<size_t>(s) + 2));
      covered[d] = true;
    } else if (key == "SHIFT_OCC") {
      arity(l, 4);
      const int sh = index_in(l, 1, S, "shift");
      r.shift_occurrence[sh] = pair_at(l, 2);
      occ_seen[sh] = true;
    } else if (key == "SHIFT_STRETCH") {
      arity(l, 4);
      const int sh = index_in(l, 1, S, "shift");
      r.shift_stretch[sh] = pair_at(l, 2);
      stretch_seen[sh] = true;
    } else if (key == "WORK_OCC") {
      arity(l, 3);
      r.work_occurrence = pair_at(l, 1);
      work_occ_seen = true;
    } else if (key == "WORK_STRETCH") {
      arity(l, 3);
      r.work_stretch = pair_at(l, 1);
      work_stretch_seen = true;
    } else {
      fail(l.number, "unknown section '" + key + "'");
    }
  }
  try {
    r.validate();
  } catch (const InputError& e) {
    throw InputError(std::string("roster: ") + e.what());
  }
  return r;
}

}  // namespace

std::string emit_canonical(const MatrixInstance& inst) {
  inst.validate();
  std::ostringstream out;
  out << "MATRIX " << inst.rows << ' ' << inst.cols << ' ' << inst.num_values << '\n';
  out << "VALUES";
  for (int64_t l : inst.labels) out << ' ' << l;
  out << '\n';
  const SymbolSet all = SymbolSet::all(inst.num_values);
  for (int r = 0; r < inst.rows; ++r)
    for (int k = 0; k < inst.cols; ++k) {
      if (inst.domains[r][k] == all) continue;
      out << "DOMAIN " << r << ' ' << k << ':';
      for (int v : inst.domains[r][k].members()) out << ' ' << v;
      out << '\n';
    }
  out << "ROW_DFA\n" << dump(inst.row) << "END_ROW_DFA\n";
  for (int k = 0; k < inst.cols; ++k) {
    const ColumnSpec& c = inst.columns[k];
    for (int v = 0; v < inst.num_values; ++v)
      if (c.cards[v] != Interval{0, inst.rows})
        out << "COL_GCC " << k << ' ' << v << ' ' << bound(c.cards[v].lo) << ' ' << bound(c.cards[v].hi) << '\n';
    if (c.label_sum) out << "COL_SUM " << k << ' ' << bound(c.label_sum->lo) << ' ' << bound(c.label_sum->hi) << '\n';
  }
  out << "END\n";
  return out.str();
}

std::string emit_canonical(const RosterInstance& inst) {
  inst.validate();
  std::ostringstream out;
  out << "ROSTER " << inst.nurses << ' ' << inst.days << ' ' << inst.shifts << '\n';
  for (int d = 0; d < inst.days; ++d) {
    out << "COVER " << d << ':';
    for (int c : inst.coverage[d]) out << ' ' << c;
    out << '\n';
  }
  for (int s = 0; s < inst.shifts; ++s)
    out << "SHIFT_OCC " << s << ' ' << inst.shift_occurrence[s].lo << ' ' << inst.shift_occurrence[s].hi << '\n';
  out << "WORK_OCC " << inst.work_occurrence.lo << ' ' << inst.work_occurrence.hi << '\n';
  for (int s = 0; s < inst.shifts; ++s)
    out << "SHIFT_STRETCH " << s << ' ' << inst.shift_stretch[s].lo << ' ' << inst.shift_stretch[s].hi << '\n';
  out << "WORK_STRETCH " << inst.work_stretch.lo << ' ' << inst.work_stretch.hi << '\n';
  out << "END\n";
  return out.str();
}

std::string emit_canonical(const Document& doc) {
  return std::visit([](const auto& x) { return emit_canonical(x); }, doc);
}

Document parse_canonical(const std::string& text) {
  Reader in(text);
  const Line* header = in.next();
  if (!header) throw InputError("line 1: empty input: missing MATRIX or ROSTER header");
  Document doc;
  if (header->tokens[0] == "MATRIX")
    doc = parse_matrix(in, *header);
  else if (header->tokens[0] == "ROSTER")
    doc = parse_roster(in, *header);
  else
    fail(header->number, "expected MATRIX or ROSTER header");
  if (const Line* extra = in.next()) fail(extra->number, "data after END");
  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_canonical(text.str());
}

MatrixInstance load_matrix(const std::string& path) {
  Document doc = load_document(path);
  if (auto* r = std::get_if<RosterInstance>(&doc)) return roster_to_matrix(*r);
  return std::get<MatrixInstance>(std::move(doc));
}

}  // namespace rgcc
