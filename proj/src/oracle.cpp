#include "rgcc/oracle.hpp"

#include <atomic>
#include <map>
#include <string>
#include <unordered_set>

#include <omp.h>

#include "rgcc/propagators.hpp"

namespace rgcc {
namespace {

class StepBudget {
 public:
  explicit StepBudget(int64_t cap) : cap_(cap) {}
  void tick() {
    if (used_.fetch_add(1, std::memory_order_relaxed) + 1 > cap_)
      throw OracleRefused("oracle effort cap exceeded");
  }

 private:
  int64_t cap_;
  std::atomic<int64_t> used_{0};
};

std::vector<Word> enumerate_row(const MatrixInstance& inst, int r, StepBudget& budget) {
  const Dfa& dfa = inst.row.dfa;
  const int n = inst.cols, nq = dfa.num_states();
  const auto& doms = inst.domains[r];
  // live[i][q]: some completion from (i, q) ends accepting
  std::vector<std::vector<char>> live(n + 1, std::vector<char>(nq, 0));
  for (int q = 0; q < nq; ++q) live[n][q] = dfa.is_accepting(q);
  for (int i = n - 1; i >= 0; --i)
    for (int q = 0; q < nq; ++q)
      for (int v : doms[i].members())
        if (live[i + 1][dfa.next(q, v)]) {
          live[i][q] = 1;
          break;
        }
  std::vector<Word> out;
  Word w(n);
  auto dfs = [&](auto& self, int i, int q) -> void {
    budget.tick();
    if (i == n) {
      if (satisfies(inst.row, w)) out.push_back(w);
      return;
    }
    for (int v : doms[i].members()) {
      const int to = dfa.next(q, v);
      if (!live[i + 1][to]) continue;
      w[i] = v;
      self(self, i + 1, to);
    }
  };
  if (live[0][dfa.start()]) dfs(dfs, 0, dfa.start());
  return out;
}

/// Row-by-row search over precomputed row words with column-count pruning.
class MatrixSearch {
 public:
  MatrixSearch(const MatrixInstance& inst, const std::vector<std::vector<Word>>& words, StepBudget& budget)
      : inst_(inst), words_(words), budget_(budget) {
    const int R = inst.rows, K = inst.cols, V = inst.num_values;
    rem_.assign(R + 1, std::vector<std::vector<int>>(K, std::vector<int>(V, 0)));
    rem_lo_.assign(R + 1, std::vector<int64_t>(K, 0));
    rem_hi_.assign(R + 1, std::vector<int64_t>(K, 0));
    for (int r = R - 1; r >= 0; --r)
      for (int k = 0; k < K; ++k) {
        rem_[r][k] = rem_[r + 1][k];
        int64_t lo = Interval::kInf, hi = -Interval::kInf;
        for (int v : inst.domains[r][k].members()) {
          ++rem_[r][k][v];
          lo = std::min(lo, inst.labels[v]);
          hi = std::max(hi, inst.labels[v]);
        }
        rem_lo_[r][k] = rem_lo_[r + 1][k] + lo;
        rem_hi_[r][k] = rem_hi_[r + 1][k] + hi;
      }
    counts_.assign(K, std::vector<int>(V, 0));
    sums_.assign(K, 0);
    cur_.assign(R, {});
  }

  /// Enumerates completions from row `r`; `visit` returns false to stop.
  template <class F>
  bool run(int r, F& visit) {
    budget_.tick();
    if (r == inst_.rows) {
      ++found_;
      return visit(cur_);
    }
    // column counts and sums fix which completions remain
    std::string key = state_key(r);
    if (dead_.count(key)) return true;
    const int64_t before = found_;
    for (const Word& w : words_[r]) {
      place(r, w, +1);
      bool keep = true;
      if (feasible(r + 1)) keep = run(r + 1, visit);
      place(r, w, -1);
      if (!keep) return false;
    }
    if (found_ == before) dead_.insert(std::move(key));
    return true;
  }

  std::string state_key(int r) const {
    std::string key(reinterpret_cast<const char*>(&r), sizeof r);
    for (int k = 0; k < inst_.cols; ++k) {
      key.append(reinterpret_cast<const char*>(counts_[k].data()), counts_[k].size() * sizeof(int));
      key.append(reinterpret_cast<const char*>(&sums_[k]), sizeof(int64_t));
    }
    return key;
  }

  void place(int r, const Word& w, int sign) {
    for (int k = 0; k < inst_.cols; ++k) {
      counts_[k][w[k]] += sign;
      sums_[k] += sign * inst_.labels[w[k]];
    }
    cur_[r] = sign > 0 ? w : Word{};
  }

  bool feasible(int next_row) const {
    for (int k = 0; k < inst_.cols; ++k) {
      const ColumnSpec& spec = inst_.columns[k];
      for (int v = 0; v < inst_.num_values; ++v) {
        const int c = counts_[k][v];
        if (c > spec.cards[v].hi || c + rem_[next_row][k][v] < spec.cards[v].lo) return false;
      }
      int64_t missing = 0;
      for (int v = 0; v < inst_.num_values; ++v)
        missing += std::max<int64_t>(0, spec.cards[v].lo - counts_[k][v]);
      if (missing > inst_.rows - next_row) return false;
      if (spec.label_sum) {
        if (sums_[k] + rem_lo_[next_row][k] > spec.label_sum->hi) return false;
        if (sums_[k] + rem_hi_[next_row][k] < spec.label_sum->lo) return false;
      }
    }
    return true;
  }

 private:
  const MatrixInstance& inst_;
  const std::vector<std::vector<Word>>& words_;
  StepBudget& budget_;
  std::vector<std::vector<std::vector<int>>> rem_;
  std::vector<std::vector<int64_t>> rem_lo_, rem_hi_;
  std::vector<std::vector<int>> counts_;
  std::vector<int64_t> sums_;
  Matrix cur_;
  int64_t found_ = 0;
  std::unordered_set<std::string> dead_;
};

std::vector<std::vector<Word>> all_row_words(const MatrixInstance& inst, StepBudget& budget) {
  std::vector<std::vector<Word>> words;
  for (int r = 0; r < inst.rows; ++r) words.push_back(enumerate_row(inst, r, budget));
  return words;
}

CellSets empty_sets(int rows, int cols, int num_values) {
  return CellSets(rows, std::vector<SymbolSet>(cols, SymbolSet(num_values, {})));
}

void absorb(CellSets& sets, const Matrix& m) {
  for (size_t r = 0; r < m.size(); ++r)
    for (size_t k = 0; k < m[r].size(); ++k) sets[r][k].insert(m[r][k]);
}

void merge_into(CellSets& into, const CellSets& from) {
  for (size_t r = 0; r < from.size(); ++r)
    for (size_t k = 0; k < from[r].size(); ++k)
      for (int v : from[r][k].members()) into[r][k].insert(v);
}

/// Runs `visit_root(first_word_index, search)` for each first-row word in
/// parallel; exceptions are rethrown after the loop.
template <class F>
void parallel_first_row(const MatrixInstance& inst, const std::vector<std::vector<Word>>& words,
                        StepBudget& budget, F&& body) {
  const int64_t n = static_cast<int64_t>(words[0].size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < n; ++i) {
    try {
      MatrixSearch search(inst, words, budget);
      body(i, search);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<Word> row_words(const MatrixInstance& inst, int r, const OracleOptions& opts) {
  inst.validate();
  StepBudget budget(opts.cap);
  return enumerate_row(inst, r, budget);
}

std::vector<Matrix> brute_solve(const MatrixInstance& inst, const OracleOptions& opts) {
  inst.validate();
  StepBudget budget(opts.cap);
  auto words = all_row_words(inst, budget);
  MatrixSearch search(inst, words, budget);
  std::vector<Matrix> out;
  auto visit = [&](const Matrix& m) {
    out.push_back(m);
    return true;
  };
  if (search.feasible(0)) search.run(0, visit);
  return out;
}

std::optional<Matrix> brute_find(const MatrixInstance& inst, const OracleOptions& opts) {
  inst.validate();
  StepBudget budget(opts.cap);
  auto words = all_row_words(inst, budget);
  MatrixSearch search(inst, words, budget);
  std::optional<Matrix> out;
  auto visit = [&](const Matrix& m) {
    out = m;
    return false;
  };
  if (search.feasible(0)) search.run(0, visit);
  return out;
}

int64_t brute_count(const MatrixInstance& inst, const OracleOptions& opts) {
  inst.validate();
  StepBudget budget(opts.cap);
  auto words = all_row_words(inst, budget);
  MatrixSearch search(inst, words, budget);
  int64_t n = 0;
  auto visit = [&](const Matrix&) {
    ++n;
    return true;
  };
  if (search.feasible(0)) search.run(0, visit);
  return n;
}

CellSets brute_dc(const MatrixInstance& inst, const OracleOptions& opts) {
  inst.validate();
  StepBudget budget(opts.cap);
  auto words = all_row_words(inst, budget);
  MatrixSearch search(inst, words, budget);
  CellSets sets = empty_sets(inst.rows, inst.cols, inst.num_values);
  auto visit = [&](const Matrix& m) {
    absorb(sets, m);
    return true;
  };
  if (search.feasible(0)) search.run(0, visit);
  return sets;
}

int64_t brute_count_parallel(const MatrixInstance& inst, const OracleOptions& opts) {
  inst.validate();
  if (inst.rows == 0) return brute_count(inst, opts);
  StepBudget budget(opts.cap);
  auto words = all_row_words(inst, budget);
  std::vector<int64_t> per(words[0].size(), 0);
  parallel_first_row(inst, words, budget, [&](int64_t i, MatrixSearch& search) {
    int64_t n = 0;
    auto visit = [&](const Matrix&) {
      ++n;
      return true;
    };
    search.place(0, words[0][i], +1);
    if (search.feasible(1)) search.run(1, visit);
    per[i] = n;
  });
  int64_t total = 0;
  for (int64_t n : per) total += n;
  return total;
}

CellSets brute_dc_parallel(const MatrixInstance& inst, const OracleOptions& opts) {
  inst.validate();
  if (inst.rows == 0) return brute_dc(inst, opts);
  StepBudget budget(opts.cap);
  auto words = all_row_words(inst, budget);
  std::vector<CellSets> per(words[0].size());
  parallel_first_row(inst, words, budget, [&](int64_t i, MatrixSearch& search) {
    CellSets sets = empty_sets(inst.rows, inst.cols, inst.num_values);
    auto visit = [&](const Matrix& m) {
      absorb(sets, m);
      return true;
    };
    search.place(0, words[0][i], +1);
    if (search.feasible(1)) search.run(1, visit);
    per[i] = std::move(sets);
  });
  CellSets out = empty_sets(inst.rows, inst.cols, inst.num_values);
  for (const auto& s : per) merge_into(out, s);
  return out;
}

// ------------------------------------------------------------------ Regular2

CellSets brute_dc(const Regular2Instance& inst, const OracleOptions& opts) {
  StepBudget budget(opts.cap);
  const int R = inst.rows, C = inst.cols;
  std::vector<std::vector<Word>> words(R);
  for (int r = 0; r < R; ++r) {
    Word w(C);
    auto dfs = [&](auto& self, int i, int q) -> void {
      budget.tick();
      if (i == C) {
        if (inst.row.is_accepting(q)) words[r].push_back(w);
        return;
      }
      for (int v : inst.domains[r][i].members()) {
        w[i] = v;
        self(self, i + 1, inst.row.next(q, v));
      }
    };
    dfs(dfs, 0, inst.row.start());
  }
  CellSets sets = empty_sets(R, C, inst.num_values);
  Matrix cur(R);
  std::vector<int> col_state(C, inst.col.start());
  auto dfs = [&](auto& self, int r) -> void {
    budget.tick();
    if (r == R) {
      for (int q : col_state)
        if (!inst.col.is_accepting(q)) return;
      absorb(sets, cur);
      return;
    }
    const auto saved = col_state;
    for (const Word& w : words[r]) {
      for (int k = 0; k < C; ++k) col_state[k] = inst.col.next(saved[k], w[k]);
      cur[r] = w;
      self(self, r + 1);
    }
    col_state = saved;
  };
  dfs(dfs, 0);
  return sets;
}

Dfa encode_matrix_dfa(const Dfa& row, const Dfa& col, int rows, int cols, int max_states) {
  if (row.num_symbols() != col.num_symbols()) throw InputError("row and column alphabets differ");
  if (rows < 0 || cols < 1) throw InputError("matrix needs at least one column");
  const int V = row.num_symbols();
  // key: [j, q, q'_0..q'_{C-1}]
  using Key = std::vector<int>;
  std::map<Key, int> ids;
  std::vector<Key> keys;
  auto id_of = [&](const Key& k) {
    auto [it, fresh] = ids.emplace(k, static_cast<int>(keys.size()));
    if (fresh) {
      keys.push_back(k);
      if (static_cast<int>(keys.size()) > max_states) throw OracleRefused("encoded automaton exceeds state guard");
    }
    return it->second;
  };
  Key start(static_cast<size_t>(cols) + 2, col.start());
  start[0] = 0;
  start[1] = row.start();
  id_of(start);
  std::vector<int> trans;
  const int kDead = -1;
  for (size_t s = 0; s < keys.size(); ++s) {
    for (int v = 0; v < V; ++v) {
      Key k = keys[s];
      const int j = k[0];
      int q = row.next(k[1], v);
      k[2 + j] = col.next(k[2 + j], v);
      if (j == cols - 1) {
        if (!row.is_accepting(q)) {
          trans.push_back(kDead);
          continue;
        }
        q = row.start();
        k[0] = 0;
      } else {
        k[0] = j + 1;
      }
      k[1] = q;
      trans.push_back(id_of(k));
    }
  }
  const int dead = static_cast<int>(keys.size());
  for (int& t : trans)
    if (t == kDead) t = dead;
  for (int v = 0; v < V; ++v) trans.push_back(dead);
  std::vector<bool> accepting(keys.size() + 1, false);
  for (size_t s = 0; s < keys.size(); ++s) {
    bool acc = keys[s][0] == 0;
    for (int c = 0; c < cols && acc; ++c) acc = col.is_accepting(keys[s][2 + c]);
    accepting[s] = acc;
  }
  return Dfa(static_cast<int>(keys.size()) + 1, V, 0, std::move(trans), std::move(accepting));
}

CellSets encoded_dc(const Regular2Instance& inst) {
  const Dfa enc = encode_matrix_dfa(inst.row, inst.col, inst.rows, inst.cols);
  Store store;
  std::vector<VarId> xs;
  for (int r = 0; r < inst.rows; ++r)
    for (int k = 0; k < inst.cols; ++k) {
      auto m = inst.domains[r][k].members();
      std::vector<int64_t> vals(m.begin(), m.end());
      xs.push_back(store.new_var(Domain::set(vals)));
    }
  store.emplace<RegularDc>(xs, enc);
  const bool ok = store.propagate() == PropagationStatus::kStable;
  CellSets out = empty_sets(inst.rows, inst.cols, inst.num_values);
  if (!ok) return out;
  for (int r = 0; r < inst.rows; ++r)
    for (int k = 0; k < inst.cols; ++k)
      for (int64_t v : store.dom(xs[r * inst.cols + k]).values()) out[r][k].insert(static_cast<int>(v));
  return out;
}

}  // namespace rgcc
