#include "rgcc/matrix_model.hpp"

#include <map>

#include "rgcc/expr.hpp"
#include "rgcc/propagators.hpp"

namespace rgcc {

// ---------------------------------------------------------------- instance

MatrixInstance MatrixInstance::unconstrained(int rows, int cols, int num_values, WeightedDfa row) {
  MatrixInstance inst;
  inst.rows = rows;
  inst.cols = cols;
  inst.num_values = num_values;
  for (int v = 0; v < num_values; ++v) inst.labels.push_back(v);
  inst.domains.assign(static_cast<size_t>(rows),
                      std::vector<SymbolSet>(static_cast<size_t>(cols), SymbolSet::all(num_values)));
  inst.row = std::move(row);
  inst.columns.assign(static_cast<size_t>(cols),
                      ColumnSpec{std::vector<Interval>(static_cast<size_t>(num_values), Interval{0, rows}), {}});
  return inst;
}

void MatrixInstance::validate() const {
  if (rows < 0 || cols < 0 || num_values < 1) throw InputError("matrix dimensions must be positive");
  if (static_cast<int>(labels.size()) != num_values) throw InputError("one label per value required");
  if (static_cast<int>(domains.size()) != rows) throw InputError("domain rows mismatch");
  for (const auto& row_doms : domains) {
    if (static_cast<int>(row_doms.size()) != cols) throw InputError("domain columns mismatch");
    for (const auto& d : row_doms)
      if (d.universe() != num_values) throw InputError("domain universe differs from value count");
  }
  row.validate();
  if (row.dfa.num_symbols() != num_values) throw InputError("row automaton alphabet differs from value count");
  if (row.costs.positional() && row.costs.horizon() < cols)
    throw InputError("positional row costs shorter than the row");
  if (static_cast<int>(columns.size()) != cols) throw InputError("one column spec per column required");
  for (const auto& c : columns)
    if (static_cast<int>(c.cards.size()) != num_values) throw InputError("one card interval per value required");
}

bool MatrixInstance::satisfied_by(const Matrix& m) const {
  if (static_cast<int>(m.size()) != rows) return false;
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(m[r].size()) != cols) return false;
    for (int k = 0; k < cols; ++k)
      if (!domains[r][k].contains(m[r][k])) return false;
    if (!satisfies(row, m[r])) return false;
  }
  for (int k = 0; k < cols; ++k) {
    std::vector<int64_t> count(static_cast<size_t>(num_values), 0);
    int64_t sum = 0;
    for (int r = 0; r < rows; ++r) {
      ++count[m[r][k]];
      sum += labels[m[r][k]];
    }
    for (int v = 0; v < num_values; ++v)
      if (!columns[k].cards[v].contains(count[v])) return false;
    if (columns[k].label_sum && !columns[k].label_sum->contains(sum)) return false;
  }
  return true;
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::kDecomp: return "decomp";
    case Mode::kWa: return "wa";
    case Mode::kCwa: return "cwa";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "decomp") return Mode::kDecomp;
  if (s == "wa") return Mode::kWa;
  if (s == "cwa") return Mode::kCwa;
  throw InputError("unknown mode '" + s + "'");
}

PropertySet PropertySet::defaults(int num_values) {
  PropertySet p;
  for (int v = 0; v < num_values; ++v) {
    SymbolSet s(num_values, {v});
    p.stretch_sets.push_back(s);
    p.words.push_back({s});
    p.words.push_back({s, s});
  }
  return p;
}

Matrix MatrixModel::read_matrix() const {
  Matrix m(cells.size());
  for (size_t r = 0; r < cells.size(); ++r)
    for (VarId x : cells[r]) m[r].push_back(static_cast<int>(store->value(x)));
  return m;
}

CellSets root_cell_domains(MatrixModel& m) {
  const int V = m.instance.num_values;
  const bool ok = m.store->propagate() == PropagationStatus::kStable;
  CellSets out(m.cells.size());
  for (size_t r = 0; r < m.cells.size(); ++r)
    for (VarId x : m.cells[r]) {
      SymbolSet set(V, {});
      if (ok)
        for (int64_t v : m.store->dom(x).values()) set.insert(static_cast<int>(v));
      out[r].push_back(set);
    }
  return out;
}

// -------------------------------------------------------------- pure bounds

WordBounds compute_word_bounds(std::span<const Interval> letter_counts, int rows) {
  if (letter_counts.empty()) throw InputError("empty word");
  const int64_t slack = static_cast<int64_t>(letter_counts.size() - 1) * rows;
  int64_t slo = 0, shi = 0;
  Interval upper{Interval::kInf, Interval::kInf};
  for (const Interval& c : letter_counts) {
    slo += c.lo;
    shi += c.hi;
    upper = {std::min(upper.lo, c.lo), std::min(upper.hi, c.hi)};
  }
  return {{std::max<int64_t>(slo - slack, 0), std::max<int64_t>(shi - slack, 0)}, upper};
}

StretchBounds compute_stretch_bounds(Interval prev, Interval cur, Interval next, int rows) {
  StretchBounds b;
  b.ls_plus = {std::max<int64_t>(0, cur.lo - prev.hi), std::max<int64_t>(0, cur.hi - prev.lo)};
  b.ls_minus = {std::max<int64_t>(0, cur.lo - next.hi), std::max<int64_t>(0, cur.hi - next.lo)};
  // c - max(0, p + c - R) = min(c, R - p)
  b.us_plus = {std::min<int64_t>(cur.lo, rows - prev.hi), std::min<int64_t>(cur.hi, rows - prev.lo)};
  b.us_minus = {std::min<int64_t>(cur.lo, rows - next.hi), std::min<int64_t>(cur.hi, rows - next.lo)};
  return b;
}

// --------------------------------------------------------------- conditions

void post_word_conditions(Store& store, const std::vector<std::vector<VarId>>& letter_cards,
                          const std::vector<std::vector<VarId>>& occurs, int rows, bool aggregate) {
  const int m = static_cast<int>(letter_cards.size());
  if (m == 0) throw InputError("empty word");
  const int cols = static_cast<int>(letter_cards[0].size());
  const int starts = cols - m + 1;
  if (starts <= 0) return;
  for (const auto& row : occurs)
    if (static_cast<int>(row.size()) != starts) throw InputError("occurrence vars do not match word starts");
  const int64_t slack = static_cast<int64_t>(m - 1) * rows;

  if (!aggregate) {
    for (int k = 0; k < starts; ++k) {
      std::vector<VarId> vars;
      std::vector<int64_t> coeffs;
      for (int j = 0; j < m; ++j) {
        vars.push_back(letter_cards[j][k + j]);
        coeffs.push_back(1);
      }
      for (const auto& row : occurs) {
        vars.push_back(row[k]);
        coeffs.push_back(-1);
      }
      // lower word bound: sum of letter counts - (m-1)R <= occurrences
      store.emplace<LinearSumBc>(vars, coeffs, Interval{-Interval::kInf, slack});
      // upper word bound: occurrences <= every letter count
      for (int j = 0; j < m; ++j) {
        std::vector<VarId> vs{letter_cards[j][k + j]};
        std::vector<int64_t> cs{1};
        for (const auto& row : occurs) {
          vs.push_back(row[k]);
          cs.push_back(-1);
        }
        store.emplace<LinearSumBc>(vs, cs, Interval{0, Interval::kInf});
      }
    }
    return;
  }

  Expr lower, upper;
  std::vector<Expr::Node> lw_terms, occ_lower, uw_terms, occ_upper;
  const auto zero_l = lower.constant(0);
  for (int k = 0; k < starts; ++k) {
    std::vector<Expr::Node> letters;
    for (int j = 0; j < m; ++j) letters.push_back(lower.var(letter_cards[j][k + j]));
    letters.push_back(lower.constant(-slack));
    lw_terms.push_back(lower.max(lower.sum(letters), zero_l));
    Expr::Node mn = upper.var(letter_cards[0][k]);
    for (int j = 1; j < m; ++j) mn = upper.min(mn, upper.var(letter_cards[j][k + j]));
    uw_terms.push_back(mn);
  }
  for (const auto& row : occurs)
    for (VarId z : row) {
      occ_lower.push_back(lower.var(z));
      occ_upper.push_back(upper.var(z));
    }
  auto lsum = lower.sum(lw_terms);
  auto lroot = lower.sub(lsum, lower.sum(occ_lower));
  store.emplace<ExprBounds>(std::move(lower), lroot, Interval{-Interval::kInf, 0}, "word-lower-aggregate");
  auto usum = upper.sum(uw_terms);
  auto uroot = upper.sub(upper.sum(occ_upper), usum);
  store.emplace<ExprBounds>(std::move(upper), uroot, Interval{-Interval::kInf, 0}, "word-upper-aggregate");
}

void post_stretch_count_conditions(Store& store, const std::vector<VarId>& set_cards,
                                   const std::vector<VarId>& counts, int rows) {
  const int cols = static_cast<int>(set_cards.size());
  for (int dir = 0; dir < 2; ++dir) {
    // dir 0: stretches starting at k (neighbour k-1); dir 1: ending at k (k+1)
    Expr lower, upper;
    std::vector<Expr::Node> ls, us, zl, zu;
    for (int k = 0; k < cols; ++k) {
      const int nb = dir == 0 ? k - 1 : k + 1;
      const bool edge = nb < 0 || nb >= cols;
      auto cur_l = lower.var(set_cards[k]);
      auto nb_l = edge ? lower.constant(0) : lower.var(set_cards[nb]);
      ls.push_back(lower.max(lower.sub(cur_l, nb_l), lower.constant(0)));
      auto cur_u = upper.var(set_cards[k]);
      auto nb_u = edge ? upper.constant(0) : upper.var(set_cards[nb]);
      us.push_back(upper.min(cur_u, upper.sub(upper.constant(rows), nb_u)));
    }
    for (VarId z : counts) {
      zl.push_back(lower.var(z));
      zu.push_back(upper.var(z));
    }
    auto lroot = lower.sub(lower.sum(ls), lower.sum(zl));
    store.emplace<ExprBounds>(std::move(lower), lroot, Interval{-Interval::kInf, 0}, "stretch-count-lower");
    auto uroot = upper.sub(upper.sum(zu), upper.sum(us));
    store.emplace<ExprBounds>(std::move(upper), uroot, Interval{-Interval::kInf, 0}, "stretch-count-upper");
  }
}

namespace {

/// Coverage and separation conditions for stretch lengths in
/// [global_min, global_max], evaluated at the weakest endpoints.
class StretchLengthCondition final : public Propagator {
 public:
  StretchLengthCondition(std::vector<VarId> cards, VarId gmin, VarId gmax, int rows)
      : cards_(std::move(cards)), gmin_(gmin), gmax_(gmax), rows_(rows) {}
  std::string name() const override { return "stretch-length"; }
  std::vector<VarId> scope() const override {
    auto s = cards_;
    s.push_back(gmin_);
    s.push_back(gmax_);
    return s;
  }
  bool idempotent() const override { return true; }

  bool propagate(Store& store) override {
    for (;;) {
      bool changed = false;
      if (!pass(store, changed)) return false;
      if (!changed) return true;
    }
  }

  bool check(const Store& store) const override {
    // Re-run the pass on exact values: it must neither fail nor tighten.
    const int K = static_cast<int>(cards_.size());
    const int64_t gmax = store.value(gmax_);
    if (gmax <= 0) return true;
    const int64_t zmin = std::max<int64_t>(1, store.value(gmin_));
    std::vector<int64_t> s(K);
    for (int k = 0; k < K; ++k) s[k] = store.value(cards_[k]);
    auto at = [&](int k) { return k < 0 || k >= K ? 0 : s[k]; };
    for (int k = 0; k < K; ++k) {
      int64_t need_p = 0, need_m = 0;
      for (int j = std::max<int64_t>(0, k - zmin + 1); j <= k; ++j) need_p += std::max<int64_t>(0, at(j) - at(j - 1));
      for (int j = k; j <= std::min<int64_t>(K - 1, k + zmin - 1); ++j) need_m += std::max<int64_t>(0, at(j) - at(j + 1));
      if (need_p > s[k] || need_m > s[k]) return false;
    }
    for (int k = 0; k + gmax < K; ++k) {
      int64_t free = 0;
      for (int64_t j = zmin; j <= gmax; ++j) free += rows_ - at(static_cast<int>(k + j));
      if (std::max<int64_t>(0, at(k) - at(k - 1)) > free) return false;
    }
    for (int k = static_cast<int>(gmax); k < K; ++k) {
      int64_t free = 0;
      for (int64_t j = zmin; j <= gmax; ++j) free += rows_ - at(static_cast<int>(k - j));
      if (std::max<int64_t>(0, at(k) - at(k + 1)) > free) return false;
    }
    return true;
  }

 private:
  bool pass(Store& store, bool& changed) {
    const int K = static_cast<int>(cards_.size());
    const int64_t gmax = store.dom(gmax_).max();
    if (gmax <= 0) return true;
    const int64_t zmin = std::max<int64_t>(1, store.dom(gmin_).min());
    if (zmin > gmax) return true;
    std::vector<int64_t> lo(K), hi(K);
    for (int k = 0; k < K; ++k) {
      lo[k] = store.dom(cards_[k]).min();
      hi[k] = store.dom(cards_[k]).max();
    }
    auto hi_at = [&](int k) { return k < 0 || k >= K ? int64_t{0} : hi[k]; };
    std::vector<int64_t> lsp(K), lsm(K);
    for (int k = 0; k < K; ++k) {
      lsp[k] = std::max<int64_t>(0, lo[k] - hi_at(k - 1));
      lsm[k] = std::max<int64_t>(0, lo[k] - hi_at(k + 1));
    }
    auto raise = [&](int k, int64_t need) {
      if (need <= store.dom(cards_[k]).min()) return true;
      changed = true;
      return store.set_min(cards_[k], need);
    };
    // every stretch starting within zmin-1 columns before k covers k
    for (int k = 0; k < K; ++k) {
      int64_t need = 0;
      for (int64_t j = std::max<int64_t>(0, k - zmin + 1); j <= k; ++j) need += lsp[j];
      if (!raise(k, need)) return false;
      need = 0;
      for (int64_t j = k; j <= std::min<int64_t>(K - 1, k + zmin - 1); ++j) need += lsm[j];
      if (!raise(k, need)) return false;
    }
    // a stretch starting at k (ending at k) is closed by a cell outside the
    // set at distance zmin..gmax
    auto separate = [&](int64_t starts, const std::vector<int>& cover) {
      if (starts <= 0) return true;
      int64_t free = 0;
      for (int c : cover) free += rows_ - lo[c];
      if (starts > free) return false;
      for (int c : cover) {
        const int64_t others = free - (rows_ - lo[c]);
        const int64_t cap = rows_ - (starts - others);
        if (cap < store.dom(cards_[c]).max()) {
          changed = true;
          if (!store.set_max(cards_[c], cap)) return false;
        }
      }
      return true;
    };
    for (int k = 0; k + gmax < K; ++k) {
      std::vector<int> cover;
      for (int64_t j = zmin; j <= gmax; ++j) cover.push_back(static_cast<int>(k + j));
      if (!separate(lsp[k], cover)) return false;
    }
    for (int k = static_cast<int>(gmax); k < K; ++k) {
      std::vector<int> cover;
      for (int64_t j = zmin; j <= gmax; ++j) cover.push_back(static_cast<int>(k - j));
      if (!separate(lsm[k], cover)) return false;
    }
    return true;
  }

  std::vector<VarId> cards_;
  VarId gmin_, gmax_;
  int rows_;
};

class StretchLengthLink final : public Propagator {
 public:
  StretchLengthLink(std::vector<VarId> row_min, std::vector<VarId> row_max, VarId gmin, VarId gmax)
      : row_min_(std::move(row_min)), row_max_(std::move(row_max)), gmin_(gmin), gmax_(gmax) {}
  std::string name() const override { return "stretch-length-link"; }
  std::vector<VarId> scope() const override {
    auto s = row_min_;
    s.insert(s.end(), row_max_.begin(), row_max_.end());
    s.push_back(gmin_);
    s.push_back(gmax_);
    return s;
  }
  bool idempotent() const override { return true; }

  bool propagate(Store& store) override {
    for (;;) {
      bool changed = false;
      if (!pass(store, changed)) return false;
      if (!changed) return true;
    }
  }

  bool check(const Store& store) const override {
    int64_t mx = 0, mn = 0;
    for (size_t r = 0; r < row_max_.size(); ++r) {
      mx = std::max(mx, store.value(row_max_[r]));
      const int64_t m = store.value(row_min_[r]);
      if (m > 0 && (mn == 0 || m < mn)) mn = m;
    }
    return store.value(gmax_) == mx && store.value(gmin_) == mn;
  }

 private:
  bool pass(Store& store, bool& changed) {
    auto tighten = [&](VarId x, int64_t lo, int64_t hi) {
      const int64_t before_lo = store.dom(x).min(), before_hi = store.dom(x).max(), before_sz = store.dom(x).size();
      if (!store.set_min(x, lo) || !store.set_max(x, hi)) return false;
      if (store.dom(x).min() != before_lo || store.dom(x).max() != before_hi || store.dom(x).size() != before_sz) changed = true;
      return true;
    };
    auto drop = [&](VarId x, int64_t v) {
      if (!store.dom(x).contains(v)) return true;
      changed = true;
      return store.remove(x, v);
    };
    const size_t n = row_max_.size();
    int64_t maxlo = 0, maxhi = 0;
    for (VarId x : row_max_) {
      maxlo = std::max(maxlo, store.dom(x).min());
      maxhi = std::max(maxhi, store.dom(x).max());
    }
    if (!tighten(gmax_, maxlo, maxhi)) return false;
    const int64_t ghi = store.dom(gmax_).max(), glo = store.dom(gmax_).min();
    int reaching = 0;
    size_t witness = 0;
    for (size_t r = 0; r < n; ++r) {
      if (!tighten(row_max_[r], 0, ghi)) return false;
      if (store.dom(row_max_[r]).max() >= glo) {
        ++reaching;
        witness = r;
      }
    }
    if (reaching == 0) return false;
    if (reaching == 1 && !tighten(row_max_[witness], glo, Interval::kInf)) return false;

    bool possible = false, certain = false;
    int64_t posmin = Interval::kInf, certain_hi = Interval::kInf;
    for (size_t r = 0; r < n; ++r) {
      if (store.dom(row_max_[r]).max() <= 0) continue;
      possible = true;
      for (int64_t v : store.dom(row_min_[r]).values())
        if (v > 0) {
          posmin = std::min(posmin, v);
          break;
        }
      if (store.dom(row_max_[r]).min() > 0) {
        certain = true;
        certain_hi = std::min(certain_hi, store.dom(row_min_[r]).max());
      }
    }
    if (!possible) return tighten(gmin_, 0, 0);
    if (posmin == Interval::kInf) return tighten(gmin_, 0, 0);
    if (certain) {
      if (!tighten(gmin_, posmin, certain_hi)) return false;
    } else {
      for (int64_t v = 1; v < posmin; ++v)
        if (!drop(gmin_, v)) return false;
    }
    const int64_t gmin_lo = store.dom(gmin_).min();
    if (gmin_lo >= 1) {
      for (VarId x : row_min_)
        for (int64_t v = 1; v < gmin_lo; ++v)
          if (!drop(x, v)) return false;
    }
    if (store.dom(gmin_).assigned() && store.value(gmin_) == 0) {
      for (VarId x : row_max_)
        if (!tighten(x, 0, 0)) return false;
    }
    return true;
  }

  std::vector<VarId> row_min_, row_max_;
  VarId gmin_, gmax_;
};

}  // namespace

void post_stretch_length_conditions(Store& store, const std::vector<VarId>& set_cards,
                                    VarId global_min, VarId global_max, int rows) {
  store.emplace<StretchLengthCondition>(set_cards, global_min, global_max, rows);
}

void post_stretch_length_link(Store& store, const std::vector<VarId>& row_min,
                              const std::vector<VarId>& row_max, VarId global_min,
                              VarId global_max) {
  store.emplace<StretchLengthLink>(row_min, row_max, global_min, global_max);
}

// ------------------------------------------------------------------- model

namespace {

struct Builder {
  MatrixModel& m;
  Store& s;
  const MatrixInstance& inst;
  std::map<std::vector<int>, std::vector<VarId>> set_cards_cache;

  /// #^{set}_k for every column: a card var for singletons, otherwise a
  /// derived sum.
  const std::vector<VarId>& set_cards(const SymbolSet& set) {
    auto key = set.members();
    auto it = set_cards_cache.find(key);
    if (it != set_cards_cache.end()) return it->second;
    std::vector<VarId> out;
    for (int k = 0; k < inst.cols; ++k) {
      if (key.size() == 1) {
        out.push_back(m.cards[key[0]][k]);
        continue;
      }
      VarId sum = s.new_var(Domain::interval(0, inst.rows), "#set" + std::to_string(k));
      m.search.auxiliary.push_back(sum);
      std::vector<VarId> vars{sum};
      std::vector<int64_t> coeffs{-1};
      for (int v : key) {
        vars.push_back(m.cards[v][k]);
        coeffs.push_back(1);
      }
      s.emplace<LinearSumBc>(vars, coeffs, Interval{0, 0});
      out.push_back(sum);
    }
    return set_cards_cache.emplace(key, std::move(out)).first->second;
  }

  std::vector<VarId> resource_vars(int row, const std::vector<Interval>& bounds, const std::string& tag) {
    std::vector<VarId> zs;
    for (size_t i = 0; i < bounds.size(); ++i) {
      const Interval b = bounds[i];
      const bool small = b.lo >= 0 && b.hi <= inst.cols;
      Domain d = small ? Domain::full_set(b.lo, b.hi) : Domain::interval(b.lo, b.hi);
      zs.push_back(s.new_var(d, tag + std::to_string(row) + "_" + std::to_string(i)));
      m.search.auxiliary.push_back(zs.back());
    }
    return zs;
  }

  /// Property automata waiting to be crossed with the row automaton.
  struct Pending {
    WeightedDfa prop;
    std::vector<std::vector<VarId>> zs;  // per row
  };
  std::vector<Pending> bundle;

  /// Posts `prop` on every row with zs[r] as its resource variables. In CWA
  /// mode a crossable property joins the row product instead.
  void attach(const WeightedDfa& prop, const std::vector<std::vector<VarId>>& zs, bool crossable) {
    if (m.options.mode == Mode::kCwa && crossable) {
      bundle.push_back({prop, zs});
      return;
    }
    for (int r = 0; r < inst.rows; ++r) s.emplace<McrFilter>(m.cells[r], prop, zs[r]);
  }

  void post_row(int r, const WeightedDfa& row, std::vector<VarId> zs) {
    if (row.num_resources() == 0)
      s.emplace<RegularDc>(m.cells[r], row.dfa);
    else
      s.emplace<McrFilter>(m.cells[r], row, std::move(zs));
  }

  WeightedDfa with_bounds(WeightedDfa w, const std::vector<Interval>& bounds) {
    w.resource_bounds = bounds;
    return w;
  }
};

}  // namespace

MatrixModel build_model(const MatrixInstance& inst, const ModelOptions& opts) {
  inst.validate();
  MatrixModel m;
  m.instance = inst;
  m.options = opts;
  m.store = std::make_unique<Store>();
  Store& s = *m.store;
  Builder b{m, s, m.instance, {}, {}};
  const int R = inst.rows, K = inst.cols, V = inst.num_values;

  m.cells.assign(R, {});
  for (int r = 0; r < R; ++r)
    for (int k = 0; k < K; ++k) {
      auto vals = inst.domains[r][k].members();
      std::vector<int64_t> v64(vals.begin(), vals.end());
      m.cells[r].push_back(s.new_var(Domain::set(v64), "M" + std::to_string(r) + "_" + std::to_string(k)));
      m.search.branching.push_back(m.cells[r].back());
    }

  m.cards.assign(V, {});
  for (int v = 0; v < V; ++v)
    for (int k = 0; k < K; ++k) {
      const Interval c = inst.columns[k].cards[v].intersect({0, R});
      if (c.empty()) {
        s.fail();
      }
      m.cards[v].push_back(s.new_var(Domain::interval(std::max<int64_t>(c.lo, 0), std::max<int64_t>(c.hi, 0)),
                                     "#" + std::to_string(v) + "_" + std::to_string(k)));
      m.search.auxiliary.push_back(m.cards[v].back());
    }

  // DECOMP: rows, columns, channeling
  for (int r = 0; r < R; ++r) {
    m.row_resources.push_back(b.resource_vars(r, inst.row.resource_bounds, "zrow"));
    if (opts.mode != Mode::kCwa) b.post_row(r, inst.row, m.row_resources[r]);
  }
  for (int k = 0; k < K; ++k) {
    std::vector<VarId> column, cards;
    for (int r = 0; r < R; ++r) column.push_back(m.cells[r][k]);
    for (int v = 0; v < V; ++v) cards.push_back(m.cards[v][k]);
    s.emplace<GccBc>(column, cards);
    s.emplace<LinearSumBc>(cards, std::vector<int64_t>(cards.size(), 1), Interval{R, R});
    if (inst.columns[k].label_sum) s.emplace<LabelSumBc>(column, inst.labels, *inst.columns[k].label_sum);
  }
  if (opts.symmetry_breaking) post_lex_chain(s, m.cells);
  if (opts.mode == Mode::kDecomp) return m;

  const PropertySet props = opts.properties ? *opts.properties : PropertySet::defaults(V);

  std::vector<SymbolSet> occ_sets;
  if (props.occurrences)
    for (int v = 0; v < V; ++v) occ_sets.push_back(SymbolSet(V, {v}));
  for (const SymbolSet& set : props.occurrence_sets) {
    if (set.universe() != V) throw InputError("occurrence set over a different alphabet");
    occ_sets.push_back(set);
  }
  if (!occ_sets.empty()) {
    std::vector<Interval> bounds;
    for (const SymbolSet& set : occ_sets) {
      Interval b{0, K};
      for (const auto& h : opts.occurrence_hints)
        if (h.set == set) b = b.intersect(h.count);
      bounds.push_back(b);
    }
    WeightedDfa occ = b.with_bounds(build_occurrence_counter(occ_sets), bounds);
    for (int r = 0; r < R; ++r) m.occurrences.push_back(b.resource_vars(r, occ.resource_bounds, "zocc"));
    b.attach(occ, m.occurrences, true);
    for (size_t i = 0; i < occ_sets.size(); ++i) {
      std::vector<VarId> vars;
      std::vector<int64_t> coeffs;
      for (int r = 0; r < R; ++r) {
        vars.push_back(m.occurrences[r][i]);
        coeffs.push_back(1);
      }
      for (VarId c : b.set_cards(occ_sets[i])) {
        vars.push_back(c);
        coeffs.push_back(-1);
      }
      s.emplace<LinearSumBc>(vars, coeffs, Interval{0, 0});
    }
  }

  for (const SymbolSet& set : props.stretch_sets) {
    if (set.universe() != V) throw InputError("stretch set over a different alphabet");
    if (set.empty() || set.size() == V) continue;
    StretchVars sv;
    sv.set = set;
    WeightedDfa count = b.with_bounds(build_stretch_count(set), {Interval{0, (K + 1) / 2}});
    WeightedDfa lengths = build_stretch_length_extractor(set, K);
    Interval hint{0, K};
    for (const auto& h : opts.stretch_hints)
      if (h.set == set) hint = hint.intersect(h.length);
    std::vector<std::vector<VarId>> count_z, length_z;
    for (int r = 0; r < R; ++r) {
      count_z.push_back(b.resource_vars(r, count.resource_bounds, "zstr"));
      sv.count.push_back(count_z.back()[0]);
      length_z.push_back(b.resource_vars(r, lengths.resource_bounds, "zlen"));
      sv.row_min.push_back(length_z.back()[0]);
      sv.row_max.push_back(length_z.back()[1]);
    }
    b.attach(count, count_z, true);
    // length extractors stay uncrossed
    b.attach(lengths, length_z, false);
    sv.global_min = s.new_var(Domain::full_set(0, K), "zmin");
    sv.global_max = s.new_var(Domain::full_set(0, K), "zmax");
    m.search.auxiliary.push_back(sv.global_min);
    m.search.auxiliary.push_back(sv.global_max);
    for (VarId x : {sv.global_min, sv.global_max}) {
      for (int64_t v = 1; v < std::min<int64_t>(hint.lo, K + 1); ++v) s.remove(x, v);
      s.set_max(x, hint.hi);
    }
    const auto& cards = b.set_cards(set);
    post_stretch_count_conditions(s, cards, sv.count, R);
    post_stretch_length_link(s, sv.row_min, sv.row_max, sv.global_min, sv.global_max);
    post_stretch_length_conditions(s, cards, sv.global_min, sv.global_max, R);
    m.stretches.push_back(std::move(sv));
  }

  for (const WordPattern& w : props.words) {
    const int len = static_cast<int>(w.size());
    if (len == 0 || len > K) continue;
    WordVars wv;
    wv.pattern = w;
    WeightedDfa counter = build_sliding_word_counter(w, K);
    for (int r = 0; r < R; ++r) wv.occurs.push_back(b.resource_vars(r, counter.resource_bounds, "zw"));
    b.attach(counter, wv.occurs, false);
    std::vector<std::vector<VarId>> letters;
    for (const SymbolSet& set : w) letters.push_back(b.set_cards(set));
    post_word_conditions(s, letters, wv.occurs, R, opts.aggregate_words);
    m.words.push_back(std::move(wv));
  }

  // CWA: one product of the row automaton with every crossable property
  WeightedDfa crossed = inst.row;
  for (const auto& p : b.bundle) crossed = product(crossed, p.prop, ResourceMerge::kConcatenate);
  for (int r = 0; r < R && opts.mode == Mode::kCwa; ++r) {
    std::vector<VarId> zs = m.row_resources[r];
    for (const auto& p : b.bundle) zs.insert(zs.end(), p.zs[r].begin(), p.zs[r].end());
    b.post_row(r, crossed, zs);
  }
  return m;
}

}  // namespace rgcc
