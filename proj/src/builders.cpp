#include "rgcc/builders.hpp"

#include <array>
#include <map>

namespace rgcc {
namespace {

void check_slot(ResourceSlot slot) {
  if (slot.count < 1 || slot.index < 0 || slot.index >= slot.count)
    throw InputError("resource slot out of range");
}

void check_pattern(const WordPattern& pattern) {
  if (pattern.empty()) throw InputError("empty word pattern");
  for (const auto& s : pattern)
    if (s.universe() != pattern.front().universe())
      throw InputError("word pattern mixes alphabets");
}

}  // namespace

Dfa build_exclusive_pair(int num_symbols, int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= num_symbols || b >= num_symbols)
    throw InputError("exclusive pair needs two distinct symbols of the alphabet");
  constexpr int kStart = 0, kSeenA = 1, kSeenB = 2, kDead = 3;
  std::vector<int> t(static_cast<size_t>(4) * num_symbols);
  for (int v = 0; v < num_symbols; ++v) {
    t[kStart * num_symbols + v] = v == a ? kSeenA : v == b ? kSeenB : kStart;
    t[kSeenA * num_symbols + v] = v == b ? kDead : kSeenA;
    t[kSeenB * num_symbols + v] = v == a ? kDead : kSeenB;
    t[kDead * num_symbols + v] = kDead;
  }
  return Dfa(4, num_symbols, kStart, std::move(t), {true, true, true, false});
}

WeightedDfa build_stretch_count(const SymbolSet& set, ResourceSlot slot) {
  check_slot(slot);
  const int V = set.universe();
  if (set.empty() || set.size() == V)
    throw InputError("stretch set must be a nonempty proper subset of the alphabet");
  std::vector<int> t(static_cast<size_t>(2) * V);
  WeightedDfa w;
  w.costs = CostMatrices(slot.count, 2, V);
  for (int v = 0; v < V; ++v) {
    const bool in = set.contains(v);
    t[0 * V + v] = in ? 1 : 0;
    t[1 * V + v] = in ? 1 : 0;
    if (in) w.costs.add(slot.index, 0, v, 1);
  }
  w.dfa = Dfa(2, V, 0, std::move(t), {true, true});
  w.resource_bounds.assign(static_cast<size_t>(slot.count), Interval::unbounded());
  return w;
}

WeightedDfa build_word_occurrence(const WordPattern& pattern, int start, int word_length,
                                  ResourceSlot slot) {
  check_pattern(pattern);
  check_slot(slot);
  const int m = static_cast<int>(pattern.size());
  if (start < 0 || start + m > word_length)
    throw InputError("word occurrence start position out of range");
  const int V = pattern.front().universe();
  const int success = start + m;
  const int reject = success + 1;
  const int n = reject + 1;
  std::vector<int> t(static_cast<size_t>(n) * V);
  WeightedDfa w;
  w.costs = CostMatrices(slot.count, n, V);
  for (int q = 0; q < n; ++q) {
    for (int v = 0; v < V; ++v) {
      int to;
      if (q < start) {
        to = q + 1;
      } else if (q < success) {
        const int j = q - start;
        if (pattern[j].contains(v)) {
          to = q + 1;
          if (j == m - 1) w.costs.add(slot.index, q, v, 1);
        } else {
          to = reject;
        }
      } else {
        to = q;
      }
      t[static_cast<size_t>(q) * V + v] = to;
    }
  }
  std::vector<bool> acc(static_cast<size_t>(n), false);
  acc[success] = acc[reject] = true;
  w.dfa = Dfa(n, V, 0, std::move(t), std::move(acc));
  w.resource_bounds.assign(static_cast<size_t>(slot.count), Interval::unbounded());
  return w;
}

WeightedDfa build_sliding_word_counter(const WordPattern& pattern, int word_length) {
  check_pattern(pattern);
  const int m = static_cast<int>(pattern.size());
  if (m > word_length) throw InputError("word pattern longer than the word");
  const int V = pattern.front().universe();
  const int resources = word_length - m + 1;

  // Bit j of a mask: the last j+1 symbols match pattern[0..j].
  std::map<uint32_t, int> index;
  std::vector<uint32_t> masks;
  auto id_of = [&](uint32_t mask) {
    auto [it, inserted] = index.emplace(mask, static_cast<int>(masks.size()));
    if (inserted) masks.push_back(mask);
    return it->second;
  };
  if (m - 1 > 31) throw InputError("word pattern too long");
  id_of(0);
  struct Arc {
    int from, symbol, to;
    bool completes;
  };
  std::vector<Arc> arcs;
  for (size_t s = 0; s < masks.size(); ++s) {
    const uint32_t mask = masks[s];
    for (int v = 0; v < V; ++v) {
      const bool completes =
          m == 1 ? pattern[0].contains(v) : ((mask >> (m - 2)) & 1u) && pattern[m - 1].contains(v);
      uint32_t next = 0;
      if (m >= 2 && pattern[0].contains(v)) next |= 1u;
      for (int j = 1; j <= m - 2; ++j)
        if (((mask >> (j - 1)) & 1u) && pattern[j].contains(v)) next |= 1u << j;
      arcs.push_back({static_cast<int>(s), v, id_of(next), completes});
    }
  }
  const int n = static_cast<int>(masks.size());
  std::vector<int> t(static_cast<size_t>(n) * V);
  WeightedDfa w;
  w.costs = CostMatrices(resources, n, V, word_length);
  for (const auto& a : arcs) {
    t[static_cast<size_t>(a.from) * V + a.symbol] = a.to;
    if (!a.completes) continue;
    // Completing at position i means the occurrence starts at i - m + 1.
    for (int i = m - 1; i < word_length; ++i) w.costs.add(i - m + 1, a.from, a.symbol, 1, i);
  }
  w.dfa = Dfa(n, V, 0, std::move(t), std::vector<bool>(static_cast<size_t>(n), true));
  w.resource_bounds.assign(static_cast<size_t>(resources), {0, 1});
  return w;
}

WeightedDfa build_occurrence_counter(const std::vector<SymbolSet>& sets) {
  if (sets.empty()) throw InputError("occurrence counter needs at least one set");
  const int V = sets.front().universe();
  WeightedDfa w;
  w.costs = CostMatrices(static_cast<int>(sets.size()), 1, V);
  for (size_t j = 0; j < sets.size(); ++j) {
    if (sets[j].universe() != V) throw InputError("occurrence sets mix alphabets");
    for (int v : sets[j].members()) w.costs.add(static_cast<int>(j), 0, v, 1);
  }
  w.dfa = Dfa::universal(V);
  w.resource_bounds.assign(sets.size(), Interval::unbounded());
  return w;
}

WeightedDfa build_gcc_weights(int num_symbols) {
  std::vector<SymbolSet> sets;
  for (int v = 0; v < num_symbols; ++v) sets.push_back(SymbolSet(num_symbols, {v}));
  return build_occurrence_counter(sets);
}

CounterDfa build_stretch_length_counters(const SymbolSet& set, int word_length) {
  if (word_length < 1) throw InputError("word length must be positive");
  CounterDfa c;
  c.dfa = Dfa::universal(set.universe());
  c.num_counters = 4;
  c.range = word_length + 1;
  const int cap = word_length;
  c.update = [set, cap](int, int v, std::span<int> d) {
    int& cur = d[0];
    int& done = d[1];
    if (set.contains(v)) {
      cur = std::min(cur + 1, cap);
      d[3] = std::max(d[3], cur);
    } else if (cur > 0) {
      done = done == 0 ? cur : std::min(done, cur);
      cur = 0;
    }
    if (cur > 0)
      d[2] = done == 0 ? cur : std::min(done, cur);
    else
      d[2] = done;
  };
  return c;
}

WeightedDfa build_stretch_length_extractor(const SymbolSet& set, int word_length) {
  WeightedDfa full = unfold_counters(build_stretch_length_counters(set, word_length));
  WeightedDfa w;
  w.dfa = full.dfa;
  w.costs = CostMatrices(2, full.dfa.num_states(), full.dfa.num_symbols());
  for (int q = 0; q < full.dfa.num_states(); ++q)
    for (int v = 0; v < full.dfa.num_symbols(); ++v)
      for (const auto& e : full.costs.entries(q, v))
        if (e.resource >= 2) w.costs.add(e.resource - 2, q, v, e.cost);
  w.resource_bounds.assign(2, {0, word_length});
  return w;
}

Dfa build_stretch_length_rule(const SymbolSet& set, int min_length, int max_length) {
  min_length = std::max(min_length, 1);
  if (max_length < min_length) throw InputError("stretch length bounds are empty");
  const int V = set.universe();
  const int dead = max_length + 1;
  const int n = max_length + 2;
  std::vector<int> t(static_cast<size_t>(n) * V);
  std::vector<bool> acc(static_cast<size_t>(n), false);
  for (int q = 0; q < n; ++q) {
    acc[q] = q == 0 || (q >= min_length && q <= max_length);
    for (int v = 0; v < V; ++v) {
      int to;
      if (q == dead)
        to = dead;
      else if (set.contains(v))
        to = q + 1 <= max_length ? q + 1 : dead;
      else
        to = (q == 0 || q >= min_length) ? 0 : dead;
      t[static_cast<size_t>(q) * V + v] = to;
    }
  }
  return Dfa(n, V, 0, std::move(t), std::move(acc));
}

Dfa build_sequence(const SymbolSet& set, int lo, int hi, int window) {
  if (window < 1 || window > 30 || lo > hi) throw InputError("bad sequence parameters");
  const int V = set.universe();
  // Key: (symbols seen so far capped at window-1, membership bits of them).
  std::map<std::pair<int, uint32_t>, int> index;
  std::vector<std::pair<int, uint32_t>> keys;
  auto id_of = [&](std::pair<int, uint32_t> k) {
    auto [it, inserted] = index.emplace(k, static_cast<int>(keys.size()));
    if (inserted) keys.push_back(k);
    return it->second;
  };
  id_of({0, 0});
  const int dead = -1;
  std::vector<std::array<int, 2>> succ;  // successor on member / non-member
  for (size_t s = 0; s < keys.size(); ++s) {
    auto [len, bits] = keys[s];
    std::array<int, 2> out{};
    for (int member = 0; member < 2; ++member) {
      uint32_t all = (bits << 1) | static_cast<uint32_t>(member);
      int seen = len + 1;
      if (seen >= window) {
        int count = __builtin_popcount(all & ((1u << window) - 1));
        if (count < lo || count > hi) {
          out[member] = dead;
          continue;
        }
      }
      int keep = std::min(seen, window - 1);
      out[member] = id_of({keep, keep == 0 ? 0u : (all & ((1u << keep) - 1))});
    }
    succ.push_back(out);
  }
  const int n = static_cast<int>(keys.size()) + 1;
  const int dead_state = n - 1;
  std::vector<int> t(static_cast<size_t>(n) * V);
  for (int s = 0; s < n; ++s) {
    for (int v = 0; v < V; ++v) {
      int to = dead_state;
      if (s != dead_state) {
        int x = succ[s][set.contains(v) ? 1 : 0];
        to = x == dead ? dead_state : x;
      }
      t[static_cast<size_t>(s) * V + v] = to;
    }
  }
  std::vector<bool> acc(static_cast<size_t>(n), true);
  acc[dead_state] = false;
  return Dfa(n, V, 0, std::move(t), std::move(acc));
}

Dfa build_word_list(int num_symbols, const std::vector<Word>& words) {
  if (words.empty()) throw InputError("word list is empty");
  const size_t len = words.front().size();
  // Trie over the words; node 0 is the root, the last node is dead.
  std::vector<std::vector<int>> child(1, std::vector<int>(static_cast<size_t>(num_symbols), -1));
  std::vector<bool> leaf(1, false);
  for (const auto& w : words) {
    if (w.size() != len) throw InputError("word list mixes lengths");
    int node = 0;
    for (int v : w) {
      if (v < 0 || v >= num_symbols) throw InputError("word symbol outside alphabet");
      if (child[node][v] < 0) {
        child[node][v] = static_cast<int>(child.size());
        child.emplace_back(static_cast<size_t>(num_symbols), -1);
        leaf.push_back(false);
      }
      node = child[node][v];
    }
    leaf[node] = true;
  }
  const int dead = static_cast<int>(child.size());
  const int n = dead + 1;
  std::vector<int> t(static_cast<size_t>(n) * num_symbols, dead);
  for (int q = 0; q < dead; ++q)
    for (int v = 0; v < num_symbols; ++v)
      if (child[q][v] >= 0) t[static_cast<size_t>(q) * num_symbols + v] = child[q][v];
  std::vector<bool> acc = leaf;
  acc.push_back(false);
  return Dfa(n, num_symbols, 0, std::move(t), std::move(acc));
}

}  // namespace rgcc
