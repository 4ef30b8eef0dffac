#include "rgcc/generators.hpp"

#include <random>
#include <set>

namespace rgcc {
namespace {

// Value tables for the {-1, 0, 1} reductions.
constexpr int kMinus = 0, kZero = 1, kPlus = 2;

MatrixInstance signed_instance(int rows, int cols, WeightedDfa row) {
  MatrixInstance inst = MatrixInstance::unconstrained(rows, cols, 3, std::move(row));
  inst.labels = {-1, 0, 1};
  return inst;
}

}  // namespace

MatrixInstance gen_3sat(const Cnf& f) {
  if (f.clauses.empty() || f.num_vars < 1) throw InputError("empty formula");
  const int R = f.num_vars, C = static_cast<int>(f.clauses.size());
  auto inst = signed_instance(R, C, make_weighted(build_exclusive_pair(3, kPlus, kMinus)));
  for (int c = 0; c < C; ++c) {
    if (f.clauses[c].empty() || f.clauses[c].size() > 3) throw InputError("clauses need 1 to 3 literals");
    for (int r = 0; r < R; ++r) inst.domains[r][c] = SymbolSet(3, {kZero});
    for (int lit : f.clauses[c]) {
      const int var = std::abs(lit);
      if (lit == 0 || var > R) throw InputError("literal out of range");
      inst.domains[var - 1][c].insert(lit > 0 ? kPlus : kMinus);
    }
    inst.columns[c].cards[kZero] = {0, R - 1};
  }
  return inst;
}

MatrixInstance gen_exact_cover(const SetFamily& fam) {
  const int U = fam.universe, n = static_cast<int>(fam.sets.size());
  if (U < 1 || n < 1) throw InputError("empty set family");
  std::set<int> covered;
  for (const auto& s : fam.sets)
    for (int e : s) {
      if (e < 1 || e > U) throw InputError("element outside the universe");
      covered.insert(e);
    }
  if (static_cast<int>(covered.size()) != U) throw InputError("family does not cover the universe");
  auto inst = signed_instance(n, U, make_weighted(build_stretch_length_rule(SymbolSet(3, {kZero}), U, U)));
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i < U; ++i) inst.domains[r][i] = SymbolSet(3, {kMinus, kZero});
    for (int e : fam.sets[r]) inst.domains[r][e - 1] = SymbolSet(3, {kZero, kPlus});
  }
  for (int i = 0; i < U; ++i) inst.columns[i].cards[kPlus] = {1, 1};
  return inst;
}

namespace {

void check_matching(const Matching3d& m) {
  if (m.q < 1 || m.triples.empty()) throw InputError("3D matching needs q >= 1 and triples");
  for (const auto& t : m.triples)
    for (int c : t)
      if (c < 0 || c >= m.q) throw InputError("triple coordinate out of range");
}

}  // namespace

MatrixInstance gen_3dm_dc(const Matching3d& mt) {
  check_matching(mt);
  const int q = mt.q, m = static_cast<int>(mt.triples.size());
  const int V = 2 + 3 * q;
  const int zero = 0, t = 1;
  auto sym = [q](int coord, int i) { return 2 + coord * q + i; };
  MatrixInstance inst = MatrixInstance::unconstrained(
      m, 5, V, make_weighted(build_sequence(SymbolSet(V, {zero}), 1, 2, 2)));
  for (int i = 0; i < m; ++i) {
    const auto& tr = mt.triples[i];
    inst.domains[i][0] = SymbolSet(V, {zero, sym(0, tr[0])});
    inst.domains[i][1] = SymbolSet(V, {zero, t});
    inst.domains[i][2] = SymbolSet(V, {zero, sym(1, tr[1])});
    inst.domains[i][3] = SymbolSet(V, {zero, t});
    inst.domains[i][4] = SymbolSet(V, {zero, sym(2, tr[2])});
  }
  for (int coord = 0; coord < 3; ++coord) {
    auto& col = inst.columns[2 * coord];
    for (int i = 0; i < q; ++i) col.cards[sym(coord, i)].lo = 1;
    col.cards[zero].lo = std::max(0, m - q);
  }
  for (int c : {1, 3}) {
    inst.columns[c].cards[t].lo = std::max(0, m - q);
    inst.columns[c].cards[zero].lo = q;
  }
  return inst;
}

MatrixInstance gen_3dm_bc(const Matching3d& mt) {
  check_matching(mt);
  const int q = mt.q, m = static_cast<int>(mt.triples.size());
  std::array<std::vector<int>, 3> occ;
  for (auto& o : occ) o.assign(q, 0);
  for (const auto& tr : mt.triples)
    for (int c = 0; c < 3; ++c) ++occ[c][tr[c]];

  // Symbol order: clone blocks of w_q..w_1, z_q..z_1, y_q..y_1, then 0, t,
  // y_1..y_q, z_1..z_q, w_1..w_q.
  std::array<std::vector<int>, 3> block_start, clones_of;
  std::array<std::vector<std::vector<int>>, 3> clone_syms;
  int next = 0;
  for (int c = 0; c < 3; ++c) {
    block_start[c].assign(q, 0);
    clone_syms[c].assign(q, {});
    for (int i = q - 1; i >= 0; --i) {
      block_start[c][i] = next;
      for (int j = 0; j < std::max(0, occ[c][i] - 1); ++j) clone_syms[c][i].push_back(next++);
    }
  }
  const int zero = next++, t = next++;
  std::array<std::vector<int>, 3> value_sym;
  for (int c : {2, 1, 0}) {
    value_sym[c].assign(q, 0);
    for (int i = 0; i < q; ++i) value_sym[c][i] = next++;
  }
  const int V = next;
  std::vector<int> low;
  for (int s = 0; s <= zero; ++s) low.push_back(s);
  MatrixInstance inst = MatrixInstance::unconstrained(
      m, 5, V, make_weighted(build_sequence(SymbolSet(V, low), 1, 2, 2)));
  auto range = [V](int lo, int hi) {
    SymbolSet s(V, {});
    for (int v = lo; v <= hi; ++v) s.insert(v);
    return s;
  };
  for (int i = 0; i < m; ++i) {
    const auto& tr = mt.triples[i];
    for (int c = 0; c < 3; ++c)
      inst.domains[i][2 * c] = range(block_start[c][tr[c]], value_sym[c][tr[c]]);
    inst.domains[i][1] = range(zero, t);
    inst.domains[i][3] = range(zero, t);
  }
  for (int c = 0; c < 3; ++c) {
    auto& col = inst.columns[2 * c];
    for (int i = 0; i < q; ++i) {
      col.cards[value_sym[c][i]].lo = 1;
      for (int s : clone_syms[c][i]) col.cards[s].lo = 1;
    }
  }
  for (int c : {1, 3}) {
    inst.columns[c].cards[t].lo = std::max(0, m - q);
    inst.columns[c].cards[zero].lo = q;
  }
  return inst;
}

std::vector<std::vector<std::array<int, 2>>> interval_domains(const MatrixInstance& inst) {
  std::vector<std::vector<std::array<int, 2>>> out(inst.rows);
  for (int r = 0; r < inst.rows; ++r)
    for (int k = 0; k < inst.cols; ++k) {
      auto mem = inst.domains[r][k].members();
      out[r].push_back({mem.empty() ? 0 : mem.front(), mem.empty() ? -1 : mem.back()});
    }
  return out;
}

MatrixInstance gen_hitting_set(const Hypergraph& h, int k, HittingVariant variant) {
  if (k < 1) throw InputError("hitting set size must be positive");
  if (h.vertices < 1) throw InputError("hypergraph without vertices");
  const int nv = h.vertices, ne = static_cast<int>(h.edges.size());
  const int len = nv + ne;
  const bool sum = variant == HittingVariant::kSum;
  const int V = sum ? 3 : 2;
  const int off = sum ? kZero : 0, on = sum ? kPlus : 1, marker = sum ? kMinus : 1;
  std::vector<Word> words;
  for (int v = 0; v < nv; ++v) {
    Word w(len, off);
    w[v] = marker;
    for (int j = 0; j < ne; ++j)
      for (int u : h.edges[j]) {
        if (u < 0 || u >= nv) throw InputError("edge vertex out of range");
        if (u == v) w[nv + j] = on;
      }
    words.push_back(w);
  }
  MatrixInstance inst = MatrixInstance::unconstrained(k, len, V, make_weighted(build_word_list(V, words)));
  if (sum) {
    inst.labels = {-1, 0, 1};
    for (int c = 0; c < nv; ++c) inst.columns[c].label_sum = Interval{-1, Interval::kInf};
    for (int c = nv; c < len; ++c) inst.columns[c].label_sum = Interval{1, Interval::kInf};
  } else {
    for (int c = 0; c < nv; ++c) inst.columns[c].cards[1] = {0, 1};
    for (int c = nv; c < len; ++c) inst.columns[c].cards[1] = {1, k};
  }
  return inst;
}

Dfa random_dfa(int states, int symbols, uint64_t seed) {
  if (states < 1 || symbols < 1) throw InputError("random automaton needs states and symbols");
  std::mt19937_64 rng(seed);
  std::vector<int> trans(static_cast<size_t>(states) * symbols, -1);
  for (int q = 1; q < states; ++q) {
    // spanning tree edge from an earlier state keeps every state reachable
    for (;;) {
      const int p = static_cast<int>(rng() % q);
      const int v = static_cast<int>(rng() % symbols);
      if (trans[p * symbols + v] < 0) {
        trans[p * symbols + v] = q;
        break;
      }
    }
  }
  for (int& t : trans)
    if (t < 0) t = static_cast<int>(rng() % states);
  std::vector<bool> acc(states);
  bool any = false;
  for (int q = 0; q < states; ++q) any |= (acc[q] = rng() % 2 == 0);
  if (!any) acc[rng() % states] = true;
  return Dfa(states, symbols, 0, std::move(trans), std::move(acc));
}

MatrixInstance gen_random(const RandomParams& p) {
  if (p.rows < 1 || p.cols < 1 || p.values < 1 || p.states < 1) throw InputError("random parameters must be positive");
  std::mt19937_64 rng(p.seed);
  auto unit = [&] { return static_cast<double>(rng() % 1'000'000) / 1'000'000.0; };
  WeightedDfa row = make_weighted(random_dfa(p.states, p.values, rng()));
  if (p.resources > 0) {
    CostMatrices costs(p.resources, p.states, p.values);
    for (int r = 0; r < p.resources; ++r)
      for (int q = 0; q < p.states; ++q)
        for (int v = 0; v < p.values; ++v)
          if (rng() % 2) costs.add(r, q, v, 1);
    row.costs = costs;
    row.resource_bounds.clear();
    for (int r = 0; r < p.resources; ++r) {
      const int64_t lo = static_cast<int64_t>(rng() % (p.cols + 1));
      const int64_t hi = lo + static_cast<int64_t>(rng() % (p.cols + 1));
      row.resource_bounds.push_back({lo, hi});
    }
  }
  MatrixInstance inst = MatrixInstance::unconstrained(p.rows, p.cols, p.values, std::move(row));
  for (auto& row_doms : inst.domains)
    for (auto& d : row_doms) {
      if (p.holes <= 0) continue;
      std::vector<int> keep;
      for (int v = 0; v < p.values; ++v)
        if (unit() >= p.holes) keep.push_back(v);
      if (keep.empty()) keep.push_back(static_cast<int>(rng() % p.values));
      d = SymbolSet(p.values, keep);
    }
  const int span = static_cast<int>(p.tightness * p.rows);
  for (auto& col : inst.columns)
    for (auto& c : col.cards) {
      if (span <= 0 || unit() >= p.tightness) continue;
      int64_t lo = static_cast<int64_t>(rng() % (span + 1));
      int64_t hi = p.rows - static_cast<int64_t>(rng() % (span + 1));
      if (lo > hi) std::swap(lo, hi);
      c = {lo, hi};
    }
  return inst;
}

Regular2Instance gen_random_regular2(int rows, int cols, int values, int row_states, int col_states,
                                     double holes, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Regular2Instance inst;
  inst.rows = rows;
  inst.cols = cols;
  inst.num_values = values;
  inst.row = random_dfa(row_states, values, rng());
  inst.col = random_dfa(col_states, values, rng());
  inst.domains.assign(rows, std::vector<SymbolSet>(cols, SymbolSet::all(values)));
  for (auto& r : inst.domains)
    for (auto& d : r) {
      std::vector<int> keep;
      for (int v = 0; v < values; ++v)
        if (static_cast<double>(rng() % 1000) / 1000.0 >= holes) keep.push_back(v);
      if (keep.empty()) keep.push_back(static_cast<int>(rng() % values));
      d = SymbolSet(values, keep);
    }
  return inst;
}

}  // namespace rgcc
