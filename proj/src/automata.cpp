#include "rgcc/automata.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>
#include <cstdio>

namespace rgcc {

SymbolSet::SymbolSet(int num_symbols, std::initializer_list<int> members)
    : SymbolSet(num_symbols, std::span<const int>(members.begin(), members.size())) {}

SymbolSet::SymbolSet(int num_symbols, std::span<const int> members)
    : mask_(static_cast<size_t>(num_symbols), false) {
  for (int v : members) insert(v);
}

SymbolSet SymbolSet::all(int num_symbols) {
  SymbolSet s;
  s.mask_.assign(static_cast<size_t>(num_symbols), true);
  return s;
}

void SymbolSet::insert(int v) {
  if (v < 0 || v >= universe())
    throw InputError("symbol " + std::to_string(v) + " outside alphabet of size " +
                     std::to_string(universe()));
  mask_[v] = true;
}

int SymbolSet::size() const {
  return static_cast<int>(std::count(mask_.begin(), mask_.end(), true));
}

std::vector<int> SymbolSet::members() const {
  std::vector<int> out;
  for (int v = 0; v < universe(); ++v)
    if (mask_[v]) out.push_back(v);
  return out;
}

SymbolSet SymbolSet::complement() const {
  SymbolSet s = *this;
  s.mask_.flip();
  return s;
}

Dfa::Dfa(int num_states, int num_symbols, int start, std::vector<int> transitions,
         std::vector<bool> accepting)
    : num_states_(num_states),
      num_symbols_(num_symbols),
      start_(start),
      transitions_(std::move(transitions)),
      accepting_(std::move(accepting)) {
  if (num_states_ <= 0 || num_symbols_ <= 0)
    throw InputError("automaton needs at least one state and one symbol");
  if (start_ < 0 || start_ >= num_states_) throw InputError("start state out of range");
  if (transitions_.size() != static_cast<size_t>(num_states_) * num_symbols_)
    throw InputError("transition table is not total");
  if (accepting_.size() != static_cast<size_t>(num_states_))
    throw InputError("accepting flags do not match state count");
  for (int t : transitions_)
    if (t < 0 || t >= num_states_) throw InputError("transition target out of range");
}

int Dfa::run(std::span<const int> word) const {
  int q = start_;
  for (int v : word) {
    if (v < 0 || v >= num_symbols_)
      throw InputError("symbol " + std::to_string(v) + " outside alphabet");
    q = next(q, v);
  }
  return q;
}

bool Dfa::accepts(std::span<const int> word) const { return accepting_[run(word)]; }

Dfa Dfa::universal(int num_symbols) {
  return Dfa(1, num_symbols, 0, std::vector<int>(static_cast<size_t>(num_symbols), 0), {true});
}

CostMatrices::CostMatrices(int num_resources, int num_states, int num_symbols, int horizon)
    : num_resources_(num_resources),
      num_states_(num_states),
      num_symbols_(num_symbols),
      horizon_(horizon),
      cells_(static_cast<size_t>(num_states) * num_symbols * std::max(1, horizon)) {
  if (num_resources < 0 || horizon < 0) throw InputError("negative cost matrix dimension");
}

size_t CostMatrices::cell(int state, int symbol, int position) const {
  if (!positional()) position = 0;
  return (static_cast<size_t>(position) * num_states_ + state) * num_symbols_ + symbol;
}

void CostMatrices::add(int resource, int state, int symbol, int64_t cost, int position) {
  if (resource < 0 || resource >= num_resources_) throw InputError("resource out of range");
  if (state < 0 || state >= num_states_ || symbol < 0 || symbol >= num_symbols_)
    throw InputError("cost entry outside automaton");
  if (positional() ? (position < 0 || position >= horizon_) : position != 0)
    throw InputError("cost position out of range");
  if (cost == 0) return;
  auto& entries = cells_[cell(state, symbol, position)];
  for (auto& e : entries) {
    if (e.resource == resource) {
      e.cost += cost;
      if (e.cost == 0) entries.erase(entries.begin() + (&e - entries.data()));
      return;
    }
  }
  entries.push_back({resource, cost});
}

int64_t CostMatrices::cost(int resource, int state, int symbol, int position) const {
  for (const auto& e : entries(state, symbol, position))
    if (e.resource == resource) return e.cost;
  return 0;
}

std::span<const CostEntry> CostMatrices::entries(int state, int symbol, int position) const {
  if (cells_.empty()) return {};
  if (positional() && (position < 0 || position >= horizon_))
    throw InputError("word longer than positional cost horizon");
  return cells_[cell(state, symbol, position)];
}

bool CostMatrices::all_zero() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const auto& c) { return c.empty(); });
}

void WeightedDfa::validate() const {
  if (costs.num_resources() != static_cast<int>(resource_bounds.size()))
    throw InputError("resource bound count does not match cost matrices");
  if (costs.num_resources() > 0 &&
      (costs.num_states() != dfa.num_states() || costs.num_symbols() != dfa.num_symbols()))
    throw InputError("cost matrices do not match automaton shape");
}

WeightedDfa make_weighted(Dfa dfa) {
  WeightedDfa w;
  w.costs = CostMatrices(0, dfa.num_states(), dfa.num_symbols());
  w.dfa = std::move(dfa);
  return w;
}

WeightedRun run_weighted(const WeightedDfa& wdfa, std::span<const int> word) {
  WeightedRun out;
  out.totals.assign(static_cast<size_t>(wdfa.num_resources()), 0);
  int q = wdfa.dfa.start();
  for (size_t i = 0; i < word.size(); ++i) {
    int v = word[i];
    if (v < 0 || v >= wdfa.dfa.num_symbols())
      throw InputError("symbol " + std::to_string(v) + " outside alphabet");
    if (wdfa.num_resources() > 0)
      for (const auto& e : wdfa.costs.entries(q, v, static_cast<int>(i)))
        out.totals[e.resource] += e.cost;
    q = wdfa.dfa.next(q, v);
  }
  out.accepted = wdfa.dfa.is_accepting(q);
  return out;
}

bool satisfies(const WeightedDfa& wdfa, std::span<const int> word) {
  auto run = run_weighted(wdfa, word);
  if (!run.accepted) return false;
  for (size_t r = 0; r < run.totals.size(); ++r)
    if (!wdfa.resource_bounds[r].contains(run.totals[r])) return false;
  return true;
}

WeightedDfa product(const WeightedDfa& a, const WeightedDfa& b, ResourceMerge merge) {
  const int V = a.dfa.num_symbols();
  if (b.dfa.num_symbols() != V) throw InputError("product of automata over different alphabets");
  const int ra = a.num_resources();
  const int rb = b.num_resources();
  if (merge == ResourceMerge::kSum && ra != rb)
    throw InputError("summed product needs equal resource counts");
  const int horizon_a = a.costs.positional() ? a.costs.horizon() : 0;
  const int horizon_b = b.costs.positional() ? b.costs.horizon() : 0;
  if (horizon_a && horizon_b && horizon_a != horizon_b)
    throw InputError("positional cost horizons differ");
  const int horizon = std::max(horizon_a, horizon_b);
  const int resources = merge == ResourceMerge::kSum ? ra : ra + rb;
  const int offset_b = merge == ResourceMerge::kSum ? 0 : ra;

  // Forward reachability over state pairs.
  std::unordered_map<int64_t, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto id_of = [&](int qa, int qb) {
    int64_t key = static_cast<int64_t>(qa) * b.dfa.num_states() + qb;
    auto [it, inserted] = index.emplace(key, static_cast<int>(pairs.size()));
    if (inserted) pairs.emplace_back(qa, qb);
    return it->second;
  };
  id_of(a.dfa.start(), b.dfa.start());
  std::vector<int> trans;
  for (size_t p = 0; p < pairs.size(); ++p) {
    auto [qa, qb] = pairs[p];
    for (int v = 0; v < V; ++v) trans.push_back(id_of(a.dfa.next(qa, v), b.dfa.next(qb, v)));
  }
  const int n = static_cast<int>(pairs.size());
  std::vector<bool> acc(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p)
    acc[p] = a.dfa.is_accepting(pairs[p].first) && b.dfa.is_accepting(pairs[p].second);

  WeightedDfa out;
  out.dfa = Dfa(n, V, 0, std::move(trans), std::move(acc));
  out.costs = CostMatrices(resources, n, V, horizon);
  const int positions = std::max(1, horizon);
  for (int p = 0; p < n; ++p) {
    auto [qa, qb] = pairs[p];
    for (int v = 0; v < V; ++v) {
      for (int i = 0; i < positions; ++i) {
        const int ia = horizon_a ? i : 0;
        const int ib = horizon_b ? i : 0;
        if (ra > 0)
          for (const auto& e : a.costs.entries(qa, v, ia)) out.costs.add(e.resource, p, v, e.cost, i);
        if (rb > 0)
          for (const auto& e : b.costs.entries(qb, v, ib))
            out.costs.add(e.resource + offset_b, p, v, e.cost, i);
      }
    }
  }
  if (merge == ResourceMerge::kSum) {
    out.resource_bounds.resize(static_cast<size_t>(ra));
    for (int r = 0; r < ra; ++r) out.resource_bounds[r] = a.resource_bounds[r].intersect(b.resource_bounds[r]);
  } else {
    out.resource_bounds = a.resource_bounds;
    out.resource_bounds.insert(out.resource_bounds.end(), b.resource_bounds.begin(),
                               b.resource_bounds.end());
  }
  return out;
}

WeightedDfa unfold_counters(const CounterDfa& cdfa, int max_states) {
  const int m = cdfa.num_counters;
  const int V = cdfa.dfa.num_symbols();
  if (m < 0 || cdfa.range < 1) throw InputError("bad counter description");
  if (m > 0 && !cdfa.update) throw InputError("counters without update rule");

  // State key: automaton state followed by counter values.
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> states;
  auto id_of = [&](std::vector<int> key) {
    auto [it, inserted] = index.emplace(key, static_cast<int>(states.size()));
    if (inserted) {
      if (static_cast<int>(states.size()) >= max_states)
        throw ConstructionError("counter unfolding exceeds state budget");
      states.push_back(std::move(key));
    }
    return it->second;
  };
  std::vector<int> start(static_cast<size_t>(m) + 1, 0);
  start[0] = cdfa.dfa.start();
  id_of(start);

  struct Arc {
    int from, symbol, to;
    std::vector<int> delta;
  };
  std::vector<Arc> arcs;
  std::vector<int> counters(static_cast<size_t>(m));
  for (size_t s = 0; s < states.size(); ++s) {
    for (int v = 0; v < V; ++v) {
      const std::vector<int> cur = states[s];
      std::copy(cur.begin() + 1, cur.end(), counters.begin());
      if (m > 0) cdfa.update(cur[0], v, counters);
      std::vector<int> key(static_cast<size_t>(m) + 1);
      key[0] = cdfa.dfa.next(cur[0], v);
      std::vector<int> delta(static_cast<size_t>(m));
      for (int c = 0; c < m; ++c) {
        if (counters[c] < 0 || counters[c] >= cdfa.range)
          throw ConstructionError("counter " + std::to_string(c) + " leaves its range");
        key[c + 1] = counters[c];
        delta[c] = counters[c] - cur[c + 1];
      }
      int to = id_of(std::move(key));
      arcs.push_back({static_cast<int>(s), v, to, std::move(delta)});
    }
  }

  const int n = static_cast<int>(states.size());
  std::vector<int> trans(static_cast<size_t>(n) * V);
  std::vector<bool> acc(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) acc[s] = cdfa.dfa.is_accepting(states[s][0]);
  WeightedDfa out;
  CostMatrices costs(m, n, V);
  for (const auto& a : arcs) {
    trans[static_cast<size_t>(a.from) * V + a.symbol] = a.to;
    for (int c = 0; c < m; ++c) costs.add(c, a.from, a.symbol, a.delta[c]);
  }
  out.dfa = Dfa(n, V, 0, std::move(trans), std::move(acc));
  out.costs = std::move(costs);
  out.resource_bounds.assign(static_cast<size_t>(m), {0, cdfa.range - 1});
  return out;
}

std::string dump(const Dfa& dfa) { return dump(make_weighted(dfa)); }

std::string dump(const WeightedDfa& w) {
  std::ostringstream os;
  const auto& d = w.dfa;
  os << "dfa states " << d.num_states() << " symbols " << d.num_symbols() << " start "
     << d.start() << " resources " << w.num_resources() << " horizon "
     << (w.costs.positional() ? w.costs.horizon() : 0) << '\n';
  os << "accept";
  for (int q = 0; q < d.num_states(); ++q)
    if (d.is_accepting(q)) os << ' ' << q;
  os << '\n';
  auto bound = [&os](int64_t b) {
    if (b <= -Interval::kInf)
      os << "-inf";
    else if (b >= Interval::kInf)
      os << "inf";
    else
      os << b;
  };
  for (int r = 0; r < w.num_resources(); ++r) {
    os << "bound " << r << ' ';
    bound(w.resource_bounds[r].lo);
    os << ' ';
    bound(w.resource_bounds[r].hi);
    os << '\n';
  }
  const int positions = w.costs.positional() ? w.costs.horizon() : 1;
  for (int q = 0; q < d.num_states(); ++q) {
    for (int v = 0; v < d.num_symbols(); ++v) {
      os << q << ' ' << v << ' ' << d.next(q, v);
      if (w.num_resources() > 0) {
        for (int i = 0; i < positions; ++i) {
          for (const auto& e : w.costs.entries(q, v, i)) {
            os << ' ' << e.resource;
            if (w.costs.positional()) os << '@' << i;
            os << ':' << e.cost;
          }
        }
      }
      os << '\n';
    }
  }
  return os.str();
}

WeightedDfa parse_dump(const std::string& text, int first_line) {
  std::istringstream in(text);
  std::string line;
  int line_no = first_line - 1;
  auto fail = [&](const std::string& what) -> InputError {
    return InputError("line " + std::to_string(line_no) + ": " + what);
  };
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) {
      ++line_no;
      throw fail("unexpected end of automaton");
    }
    ++line_no;
    return std::istringstream(line);
  };
  auto read_bound = [&](std::istringstream& ls) {
    std::string tok;
    if (!(ls >> tok)) throw fail("missing bound");
    if (tok == "inf") return Interval::kInf;
    if (tok == "-inf") return -Interval::kInf;
    try {
      size_t used = 0;
      const int64_t v = std::stoll(tok, &used);
      if (used != tok.size()) throw fail("bad bound '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      throw fail("bad bound '" + tok + "'");
    }
  };

  int Q = 0, V = 0, start = 0, R = 0, H = 0;
  {
    auto ls = next_line();
    std::string kw[6];
    if (!(ls >> kw[0] >> kw[1] >> Q >> kw[2] >> V >> kw[3] >> start >> kw[4] >> R >> kw[5] >> H) ||
        kw[0] != "dfa" || kw[1] != "states" || kw[2] != "symbols" || kw[3] != "start" ||
        kw[4] != "resources" || kw[5] != "horizon")
      throw fail("expected 'dfa states Q symbols V start s resources R horizon H'");
    if (Q < 1 || V < 1 || R < 0 || H < 0 || Q > (1 << 26) || V > (1 << 16)) throw fail("bad automaton size");
  }
  std::vector<bool> acc(static_cast<size_t>(Q), false);
  {
    auto ls = next_line();
    std::string kw;
    if (!(ls >> kw) || kw != "accept") throw fail("expected 'accept'");
    int q;
    while (ls >> q) {
      if (q < 0 || q >= Q) throw fail("accepting state out of range");
      acc[q] = true;
    }
    if (!ls.eof()) throw fail("bad accepting state list");
  }
  std::vector<Interval> bounds;
  for (int r = 0; r < R; ++r) {
    auto ls = next_line();
    std::string kw;
    int idx;
    if (!(ls >> kw >> idx) || kw != "bound" || idx != r) throw fail("expected 'bound " + std::to_string(r) + "'");
    const int64_t lo = read_bound(ls);
    const int64_t hi = read_bound(ls);
    bounds.push_back({lo, hi});
  }
  std::vector<int> trans(static_cast<size_t>(Q) * V, -1);
  CostMatrices costs(R, Q, V, H);
  for (int i = 0; i < Q * V; ++i) {
    auto ls = next_line();
    int q, v, to;
    if (!(ls >> q >> v >> to)) throw fail("expected transition 'q v q'");
    if (q < 0 || q >= Q || v < 0 || v >= V || to < 0 || to >= Q) throw fail("transition out of range");
    if (trans[static_cast<size_t>(q) * V + v] >= 0) throw fail("duplicate transition");
    trans[static_cast<size_t>(q) * V + v] = to;
    std::string tok;
    while (ls >> tok) {
      int r = 0, pos = 0;
      long long c = 0;
      char tail = 0;
      const bool ok = H > 0 ? std::sscanf(tok.c_str(), "%d@%d:%lld%c", &r, &pos, &c, &tail) == 3
                            : std::sscanf(tok.c_str(), "%d:%lld%c", &r, &c, &tail) == 2;
      if (!ok || r < 0 || r >= R || pos < 0 || (H > 0 && pos >= H)) throw fail("bad cost '" + tok + "'");
      costs.add(r, q, v, c, pos);
    }
  }
  WeightedDfa w;
  try {
    w.dfa = Dfa(Q, V, start, std::move(trans), std::move(acc));
  } catch (const InputError& e) {
    throw fail(e.what());
  }
  w.costs = std::move(costs);
  w.resource_bounds = std::move(bounds);
  return w;
}

}  // namespace rgcc
