#pragma once

#include <functional>
#include <random>
#include <vector>

#include "rgcc/automata.hpp"
#include "rgcc/engine.hpp"
#include "rgcc/generators.hpp"
#include "rgcc/matrix_model.hpp"
#include "rgcc/propagators.hpp"

namespace testing {

using rgcc::Word;

/// Calls f on every word of the cartesian product of `doms`.
inline void for_each_word(const std::vector<std::vector<int>>& doms, const std::function<void(const Word&)>& f) {
  Word w(doms.size());
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == doms.size()) {
      f(w);
      return;
    }
    for (int v : doms[i]) {
      w[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

inline void for_each_word(int length, int symbols, const std::function<void(const Word&)>& f) {
  std::vector<int> all;
  for (int v = 0; v < symbols; ++v) all.push_back(v);
  for_each_word(std::vector<std::vector<int>>(length, all), f);
}

inline Word random_word(std::mt19937_64& rng, int length, int symbols) {
  Word w(length);
  for (int& v : w) v = static_cast<int>(rng() % symbols);
  return w;
}

/// Random complete automaton with `resources` random costs in [-2, 2].
inline rgcc::WeightedDfa random_weighted(std::mt19937_64& rng, int V, int resources) {
  using namespace rgcc;
  const int Q = 1 + static_cast<int>(rng() % 3);
  WeightedDfa w = make_weighted(random_dfa(Q, V, rng()));
  CostMatrices c(resources, Q, V);
  for (int r = 0; r < resources; ++r)
    for (int q = 0; q < Q; ++q)
      for (int v = 0; v < V; ++v) c.add(r, q, v, static_cast<int64_t>(rng() % 5) - 2);
  w.costs = c;
  w.resource_bounds.assign(resources, Interval::unbounded());
  return w;
}

/// Direct simulation of a Dfa, independent of Dfa::run.
inline bool direct_accepts(const rgcc::Dfa& d, const Word& w) {
  int q = d.start();
  for (int v : w) q = d.transitions()[q * d.num_symbols() + v];
  return d.accepting()[q];
}

inline int stretch_count(const Word& w, const rgcc::SymbolSet& s) {
  int n = 0;
  bool in = false;
  for (int v : w) {
    const bool c = s.contains(v);
    if (c && !in) ++n;
    in = c;
  }
  return n;
}

/// (shortest, longest) maximal stretch of `s`; (0, 0) when none.
inline std::pair<int, int> stretch_lengths(const Word& w, const rgcc::SymbolSet& s) {
  int mn = 0, mx = 0, cur = 0;
  auto close = [&] {
    if (cur > 0) {
      mn = mn == 0 ? cur : std::min(mn, cur);
      mx = std::max(mx, cur);
    }
    cur = 0;
  };
  for (int v : w) {
    if (s.contains(v))
      ++cur;
    else
      close();
  }
  close();
  return {mn, mx};
}

inline bool occurs_at(const Word& w, const std::vector<rgcc::SymbolSet>& pat, int k) {
  if (k + pat.size() > w.size()) return false;
  for (size_t j = 0; j < pat.size(); ++j)
    if (!pat[j].contains(w[k + j])) return false;
  return true;
}

inline bool cnf_satisfiable(const rgcc::Cnf& f) {
  for (int mask = 0; mask < (1 << f.num_vars); ++mask) {
    bool all = true;
    for (const auto& c : f.clauses) {
      bool sat = false;
      for (int lit : c) {
        const bool val = (mask >> (std::abs(lit) - 1)) & 1;
        sat |= lit > 0 ? val : !val;
      }
      all &= sat;
    }
    if (all) return true;
  }
  return false;
}

inline bool exact_cover_exists(const rgcc::SetFamily& f) {
  const int n = static_cast<int>(f.sets.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> hits(f.universe + 1, 0);
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1)
        for (int e : f.sets[i]) ++hits[e];
    bool ok = true;
    for (int e = 1; e <= f.universe; ++e) ok &= hits[e] == 1;
    if (ok) return true;
  }
  return false;
}

inline bool matching_exists(const rgcc::Matching3d& m) {
  const int n = static_cast<int>(m.triples.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != m.q) continue;
    std::vector<std::vector<int>> used(3, std::vector<int>(m.q, 0));
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if ((mask >> i) & 1)
        for (int c = 0; c < 3; ++c) ok &= ++used[c][m.triples[i][c]] == 1;
    if (ok) return true;
  }
  return false;
}

inline bool hitting_set_exists(const rgcc::Hypergraph& h, int k) {
  for (int mask = 0; mask < (1 << h.vertices); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    bool ok = true;
    for (const auto& e : h.edges) {
      bool hit = false;
      for (int v : e) hit |= (mask >> v) & 1;
      ok &= hit;
    }
    if (ok) return true;
  }
  return false;
}

/// Domains of a list of store variables as value vectors.
inline std::vector<std::vector<int64_t>> snapshot(const rgcc::Store& s) {
  std::vector<std::vector<int64_t>> out;
  for (int x = 0; x < s.num_vars(); ++x) out.push_back({s.dom(x).min(), s.dom(x).max(), s.dom(x).size()});
  return out;
}

/// Calls f on every formula over 1..max_vars variables with 1..max_clauses
/// clauses, each clause a set of literals over distinct variables, clauses
/// listed in non-decreasing order.
inline void for_each_cnf(int max_vars, int max_clauses, const std::function<void(const rgcc::Cnf&)>& f) {
  for (int nv = 1; nv <= max_vars; ++nv) {
    std::vector<std::vector<int>> clauses;
    // each variable absent, positive or negative
    int total = 1;
    for (int i = 0; i < nv; ++i) total *= 3;
    for (int code = 1; code < total; ++code) {
      std::vector<int> c;
      int x = code;
      for (int v = 1; v <= nv; ++v, x /= 3)
        if (x % 3) c.push_back(x % 3 == 1 ? v : -v);
      clauses.push_back(c);
    }
    const int n = static_cast<int>(clauses.size());
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int from) {
      if (!pick.empty()) {
        rgcc::Cnf cnf{nv, {}};
        for (int i : pick) cnf.clauses.push_back(clauses[i]);
        f(cnf);
      }
      if (static_cast<int>(pick.size()) == max_clauses) return;
      for (int i = from; i < n; ++i) {
        pick.push_back(i);
        rec(i);
        pick.pop_back();
      }
    };
    rec(0);
  }
}

/// Every family of distinct non-empty subsets of {1..u} covering {1..u}, for
/// u in 1..max_universe.
inline void for_each_cover_family(int max_universe, const std::function<void(const rgcc::SetFamily&)>& f) {
  for (int u = 1; u <= max_universe; ++u) {
    const int subsets = (1 << u) - 1;
    for (int fam = 1; fam < (1 << subsets); ++fam) {
      rgcc::SetFamily sf{u, {}};
      int covered = 0;
      for (int s = 0; s < subsets; ++s)
        if ((fam >> s) & 1) {
          const int mask = s + 1;
          covered |= mask;
          std::vector<int> set;
          for (int e = 0; e < u; ++e)
            if ((mask >> e) & 1) set.push_back(e + 1);
          sf.sets.push_back(set);
        }
      if (covered == subsets) f(sf);
    }
  }
}

/// Every set of 1..max_triples distinct triples over {0..q-1}^3, q in 1..max_q.
inline void for_each_matching(int max_q, int max_triples, const std::function<void(const rgcc::Matching3d&)>& f) {
  for (int q = 1; q <= max_q; ++q) {
    const int all = q * q * q;
    for (int mask = 1; mask < (1 << all); ++mask) {
      if (__builtin_popcount(mask) > max_triples) continue;
      rgcc::Matching3d m{q, {}};
      for (int t = 0; t < all; ++t)
        if ((mask >> t) & 1) m.triples.push_back({t / (q * q), (t / q) % q, t % q});
      f(m);
    }
  }
}

/// Every hypergraph on 1..max_vertices vertices with 1..max_edges distinct
/// non-empty edges.
inline void for_each_hypergraph(int max_vertices, int max_edges, const std::function<void(const rgcc::Hypergraph&)>& f) {
  for (int nv = 1; nv <= max_vertices; ++nv) {
    const int subsets = (1 << nv) - 1;
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int from) {
      if (!pick.empty()) {
        rgcc::Hypergraph h{nv, {}};
        for (int s : pick) {
          std::vector<int> e;
          for (int v = 0; v < nv; ++v)
            if (((s + 1) >> v) & 1) e.push_back(v);
          h.edges.push_back(e);
        }
        f(h);
      }
      if (static_cast<int>(pick.size()) == max_edges) return;
      for (int s = from; s < subsets; ++s) {
        pick.push_back(s);
        rec(s + 1);
        pick.pop_back();
      }
    };
    rec(0);
  }
}

/// Partial 5x5 search node: rows 2..4 hold 1 in columns 0 and 2, every other
/// cell is free over {0,1,2}. Word occurrence flags for {2}{2} come from a
/// sliding counter on each row; the counts of 2 per column are given
/// directly. Returns true when the root propagation fails.
inline bool partial_node_root_fails(bool aggregate) {
  using namespace rgcc;
  constexpr int R = 5, K = 5, V = 3;
  Store s;
  const SymbolSet two(V, {2});
  const WeightedDfa slide = build_sliding_word_counter({two, two}, K);
  std::vector<std::vector<VarId>> occurs;
  for (int r = 0; r < R; ++r) {
    std::vector<VarId> row;
    for (int k = 0; k < K; ++k) {
      const bool fixed = r >= 2 && (k == 0 || k == 2);
      row.push_back(s.new_var(fixed ? Domain::set({1}) : Domain::set({0, 1, 2})));
    }
    std::vector<VarId> z;
    for (int k = 0; k + 1 < K; ++k) z.push_back(s.new_var(Domain::interval(0, 1)));
    s.emplace<McrFilter>(row, slide, z);
    occurs.push_back(z);
  }
  const std::vector<Interval> counts{{0, 2}, {3, 5}, {5, 5}, {0, 2}, {0, 5}};
  std::vector<VarId> cards;
  for (auto c : counts) cards.push_back(s.new_var(Domain::interval(c.lo, c.hi)));
  post_word_conditions(s, {cards, cards}, occurs, R, aggregate);
  return s.propagate() == PropagationStatus::kFailed;
}

}  // namespace testing
