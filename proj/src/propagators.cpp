#include "rgcc/propagators.hpp"

#include <limits>

namespace rgcc {
namespace {

constexpr int64_t kNone = std::numeric_limits<int64_t>::max() / 4;

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

std::vector<int64_t> word_of(const Store& store, std::span<const VarId> xs) {
  std::vector<int64_t> w;
  w.reserve(xs.size());
  for (VarId x : xs) w.push_back(store.value(x));
  return w;
}

}  // namespace

// ------------------------------------------------------------ LayeredGraph

bool LayeredGraph::build(const Store& store, std::span<const VarId> xs, const Dfa& dfa) {
  dfa_ = &dfa;
  n_ = static_cast<int>(xs.size());
  nq_ = dfa.num_states();
  nv_ = dfa.num_symbols();
  symbols_.resize(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    symbols_[i].clear();
    const Domain& d = store.dom(xs[i]);
    for (int64_t v = std::max<int64_t>(d.min(), 0); v <= std::min<int64_t>(d.max(), nv_ - 1); ++v)
      if (d.contains(v)) symbols_[i].push_back(static_cast<int>(v));
  }
  removed_.assign(static_cast<size_t>(n_) * nq_ * nv_, 0);
  return trim();
}

bool LayeredGraph::trim() {
  const size_t nodes = static_cast<size_t>(n_ + 1) * nq_;
  fwd_.assign(nodes, 0);
  bwd_.assign(nodes, 0);
  reach_.resize(static_cast<size_t>(n_) + 1);
  for (auto& layer : reach_) layer.clear();
  fwd_[idx(0, dfa_->start())] = 1;
  reach_[0].push_back(dfa_->start());
  for (int i = 0; i < n_; ++i) {
    for (int q : reach_[i]) {
      for (int v : symbols_[i]) {
        if (removed_[arc_idx(i, q, v)]) continue;
        const int to = dfa_->next(q, v);
        auto& f = fwd_[idx(i + 1, to)];
        if (!f) {
          f = 1;
          reach_[i + 1].push_back(to);
        }
      }
    }
  }
  for (int q : reach_[n_])
    if (dfa_->is_accepting(q)) bwd_[idx(n_, q)] = 1;
  for (int i = n_ - 1; i >= 0; --i) {
    for (int q : reach_[i]) {
      for (int v : symbols_[i]) {
        if (!removed_[arc_idx(i, q, v)] && bwd_[idx(i + 1, dfa_->next(q, v))]) {
          bwd_[idx(i, q)] = 1;
          break;
        }
      }
    }
  }
  return bwd_[idx(0, dfa_->start())];
}

bool LayeredGraph::arc_alive(int layer, int q, int v) const {
  return fwd_[idx(layer, q)] && bwd_[idx(layer, q)] && !removed_[arc_idx(layer, q, v)] &&
         bwd_[idx(layer + 1, dfa_->next(q, v))];
}

void LayeredGraph::supported(int layer, std::vector<char>& out) const {
  out.assign(static_cast<size_t>(nv_), 0);
  for (int q : reach_[layer]) {
    if (!bwd_[idx(layer, q)]) continue;
    for (int v : symbols_[layer])
      if (!out[v] && arc_alive(layer, q, v)) out[v] = 1;
  }
}

namespace {

bool prune_unsupported(Store& store, std::span<const VarId> xs, const LayeredGraph& g) {
  std::vector<char> sup;
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
    g.supported(i, sup);
    const int64_t lo = store.dom(xs[i]).min(), hi = store.dom(xs[i]).max();
    for (int64_t v = lo; v <= hi; ++v) {
      if (!store.dom(xs[i]).contains(v)) continue;
      if (v >= 0 && v < static_cast<int64_t>(sup.size()) && sup[v]) continue;
      if (!store.remove(xs[i], v)) return false;
    }
  }
  return true;
}

}  // namespace

// --------------------------------------------------------------- RegularDc

RegularDc::RegularDc(std::vector<VarId> xs, Dfa dfa) : xs_(std::move(xs)), dfa_(std::move(dfa)) {}

bool RegularDc::propagate(Store& store) {
  if (!graph_.build(store, xs_, dfa_)) return false;
  return prune_unsupported(store, xs_, graph_);
}

bool RegularDc::check(const Store& store) const {
  auto w = word_of(store, xs_);
  std::vector<int> word(w.begin(), w.end());
  for (int v : word)
    if (v < 0 || v >= dfa_.num_symbols()) return false;
  return dfa_.accepts(word);
}

// --------------------------------------------------------------- McrFilter

McrFilter::McrFilter(std::vector<VarId> xs, WeightedDfa wdfa, std::vector<VarId> zs)
    : xs_(std::move(xs)), wdfa_(std::move(wdfa)), zs_(std::move(zs)) {
  wdfa_.validate();
  if (static_cast<int>(zs_.size()) != wdfa_.num_resources())
    throw InputError("resource variable count does not match automaton resources");
  if (wdfa_.costs.positional() && wdfa_.costs.horizon() < static_cast<int>(xs_.size()))
    throw InputError("positional costs shorter than the variable sequence");
  const int n = static_cast<int>(xs_.size());
  const int nq = wdfa_.dfa.num_states(), nv = wdfa_.dfa.num_symbols();
  const int layers = wdfa_.costs.positional() ? n : 1;
  cost_offsets_.reserve(static_cast<size_t>(layers) * nq * nv + 1);
  cost_offsets_.push_back(0);
  for (int i = 0; i < layers; ++i)
    for (int q = 0; q < nq; ++q)
      for (int v = 0; v < nv; ++v) {
        for (const CostEntry& e : wdfa_.costs.entries(q, v, i)) cost_flat_.push_back(e);
        cost_offsets_.push_back(static_cast<uint32_t>(cost_flat_.size()));
      }
  cost_.assign(zs_.size(), 0);
}
std::vector<VarId> McrFilter::scope() const {
  std::vector<VarId> s = xs_;
  s.insert(s.end(), zs_.begin(), zs_.end());
  return s;
}

bool McrFilter::propagate(Store& store) {
  const Dfa& dfa = wdfa_.dfa;
  if (!graph_.build(store, xs_, dfa)) return false;
  const int n = static_cast<int>(xs_.size());
  const int nq = dfa.num_states();
  const int nv = dfa.num_symbols();
  const int nr = static_cast<int>(zs_.size());
  if (nr == 0) return prune_unsupported(store, xs_, graph_);
  const bool positional = wdfa_.costs.positional();
  const size_t cells = static_cast<size_t>(n + 1) * nq * nr;
  auto at = [nq, nr](int layer, int q) { return (static_cast<size_t>(layer) * nq + q) * nr; };
  auto load = [&](const Arc& a) {
    for (uint32_t k = a.cost_begin; k < a.cost_end; ++k) cost_[cost_flat_[k].resource] += cost_flat_[k].cost;
  };
  auto unload = [&](const Arc& a) {
    for (uint32_t k = a.cost_begin; k < a.cost_end; ++k) cost_[cost_flat_[k].resource] = 0;
  };

  for (auto* buf : {&fmin_, &fmax_, &bmin_, &bmax_})
    if (buf->size() < cells) buf->resize(cells);
  for (;;) {
    arcs_.clear();
    for (int i = 0; i < n; ++i)
      for (int q : graph_.layer_states(i)) {
        if (!graph_.node_alive(i, q)) continue;
        for (int v : graph_.symbols(i)) {
          if (!graph_.arc_alive(i, q, v)) continue;
          const size_t c = (static_cast<size_t>(positional ? i : 0) * nq + q) * nv + v;
          arcs_.push_back({i, q, v, at(i, q), at(i + 1, dfa.next(q, v)), cost_offsets_[c], cost_offsets_[c + 1]});
        }
      }
    for (int i = 0; i <= n; ++i)
      for (int q : graph_.layer_states(i)) {
        const size_t c = at(i, q);
        std::fill_n(fmin_.begin() + c, nr, kNone);
        std::fill_n(fmax_.begin() + c, nr, -kNone);
        std::fill_n(bmin_.begin() + c, nr, kNone);
        std::fill_n(bmax_.begin() + c, nr, -kNone);
      }
    std::fill_n(fmin_.begin() + at(0, dfa.start()), nr, 0);
    std::fill_n(fmax_.begin() + at(0, dfa.start()), nr, 0);
    for (const Arc& a : arcs_) {
      load(a);
      int64_t* tmin = &fmin_[a.to];
      int64_t* tmax = &fmax_[a.to];
      const int64_t* smin = &fmin_[a.from];
      const int64_t* smax = &fmax_[a.from];
      for (int r = 0; r < nr; ++r) {
        tmin[r] = std::min(tmin[r], smin[r] + cost_[r]);
        tmax[r] = std::max(tmax[r], smax[r] + cost_[r]);
      }
      unload(a);
    }
    for (int q : graph_.layer_states(n))
      if (graph_.node_alive(n, q)) {
        std::fill_n(bmin_.begin() + at(n, q), nr, 0);
        std::fill_n(bmax_.begin() + at(n, q), nr, 0);
      }
    for (auto it = arcs_.rbegin(); it != arcs_.rend(); ++it) {
      const Arc& a = *it;
      load(a);
      int64_t* smin = &bmin_[a.from];
      int64_t* smax = &bmax_[a.from];
      const int64_t* tmin = &bmin_[a.to];
      const int64_t* tmax = &bmax_[a.to];
      for (int r = 0; r < nr; ++r) {
        smin[r] = std::min(smin[r], tmin[r] + cost_[r]);
        smax[r] = std::max(smax[r], tmax[r] + cost_[r]);
      }
      unload(a);
    }

    const size_t root = at(0, dfa.start());
    tight_.clear();
    for (int r = 0; r < nr; ++r) {
      if (!store.set_min(zs_[r], bmin_[root + r]) || !store.set_max(zs_[r], bmax_[root + r])) return false;
      if (store.dom(zs_[r]).min() > bmin_[root + r] || store.dom(zs_[r]).max() < bmax_[root + r])
        tight_.push_back(r);
    }
    if (tight_.empty()) break;

    bool removed_any = false;
    for (const Arc& a : arcs_) {
      load(a);
      for (int r : tight_) {
        if (fmin_[a.from + r] + cost_[r] + bmin_[a.to + r] > store.dom(zs_[r]).max() ||
            fmax_[a.from + r] + cost_[r] + bmax_[a.to + r] < store.dom(zs_[r]).min()) {
          graph_.remove_arc(a.layer, a.q, a.v);
          removed_any = true;
          break;
        }
      }
      unload(a);
    }
    if (!removed_any) break;
    if (!graph_.trim()) return false;
  }
  return prune_unsupported(store, xs_, graph_);
}

bool McrFilter::check(const Store& store) const {
  auto w = word_of(store, xs_);
  std::vector<int> word(w.begin(), w.end());
  for (int v : word)
    if (v < 0 || v >= wdfa_.dfa.num_symbols()) return false;
  auto run = run_weighted(wdfa_, word);
  if (!run.accepted) return false;
  for (size_t r = 0; r < zs_.size(); ++r)
    if (run.totals[r] != store.value(zs_[r])) return false;
  return true;
}

// ------------------------------------------------------------------- GccBc

GccBc::GccBc(std::vector<VarId> column, std::vector<VarId> cards)
    : column_(std::move(column)), cards_(std::move(cards)) {}

std::vector<VarId> GccBc::scope() const {
  std::vector<VarId> s = column_;
  s.insert(s.end(), cards_.begin(), cards_.end());
  return s;
}

bool GccBc::propagate(Store& store) {
  const int nvals = static_cast<int>(cards_.size());
  const int64_t rows = static_cast<int64_t>(column_.size());
  for (;;) {
    bool changed = false;
    std::vector<int64_t> fixed(static_cast<size_t>(nvals), 0), possible(static_cast<size_t>(nvals), 0);
    for (VarId x : column_) {
      const Domain& d = store.dom(x);
      for (int64_t v : d.values()) {
        if (v < 0 || v >= nvals) {
          if (!store.remove(x, v)) return false;
          changed = true;
          continue;
        }
        ++possible[v];
        if (d.assigned()) ++fixed[v];
      }
    }
    int64_t sum_lo = 0, sum_hi = 0;
    for (int v = 0; v < nvals; ++v) {
      const int64_t before_lo = store.dom(cards_[v]).min(), before_hi = store.dom(cards_[v]).max();
      if (!store.set_min(cards_[v], fixed[v]) || !store.set_max(cards_[v], possible[v])) return false;
      if (store.dom(cards_[v]).min() != before_lo || store.dom(cards_[v]).max() != before_hi) changed = true;
      sum_lo += store.dom(cards_[v]).min();
      sum_hi += store.dom(cards_[v]).max();
    }
    if (sum_lo > rows || sum_hi < rows) return false;
    for (int v = 0; v < nvals; ++v) {
      const Domain& card = store.dom(cards_[v]);
      if (fixed[v] == card.max() && possible[v] > fixed[v]) {
        for (VarId x : column_) {
          const Domain& d = store.dom(x);
          if (!d.assigned() && d.contains(v)) {
            if (!store.remove(x, v)) return false;
            changed = true;
          }
        }
      } else if (possible[v] == card.min() && possible[v] > fixed[v]) {
        for (VarId x : column_) {
          const Domain& d = store.dom(x);
          if (!d.assigned() && d.contains(v)) {
            if (!store.assign(x, v)) return false;
            changed = true;
          }
        }
      }
    }
    if (!changed) return true;
  }
}

bool GccBc::check(const Store& store) const {
  std::vector<int64_t> count(cards_.size(), 0);
  for (VarId x : column_) {
    int64_t v = store.value(x);
    if (v < 0 || v >= static_cast<int64_t>(cards_.size())) return false;
    ++count[v];
  }
  for (size_t v = 0; v < cards_.size(); ++v)
    if (store.value(cards_[v]) != count[v]) return false;
  return true;
}

// ------------------------------------------------------------- LinearSumBc

LinearSumBc::LinearSumBc(std::vector<VarId> vars, std::vector<int64_t> coeffs, Interval bounds)
    : vars_(std::move(vars)), coeffs_(std::move(coeffs)), bounds_(bounds) {
  if (vars_.size() != coeffs_.size()) throw InputError("linear sum arity mismatch");
}

bool LinearSumBc::propagate(Store& store) {
  if (bounds_.empty()) return false;
  for (;;) {
    int64_t smin = 0, smax = 0;
    for (size_t i = 0; i < vars_.size(); ++i) {
      const Domain& d = store.dom(vars_[i]);
      const int64_t a = coeffs_[i];
      smin += a > 0 ? a * d.min() : a * d.max();
      smax += a > 0 ? a * d.max() : a * d.min();
    }
    if (smin > bounds_.hi || smax < bounds_.lo) return false;
    bool changed = false;
    for (size_t i = 0; i < vars_.size(); ++i) {
      const int64_t a = coeffs_[i];
      if (a == 0) continue;
      const int64_t dmin = store.dom(vars_[i]).min(), dmax = store.dom(vars_[i]).max();
      const int64_t own_min = a > 0 ? a * dmin : a * dmax;
      const int64_t own_max = a > 0 ? a * dmax : a * dmin;
      // a * x in [lo - (smax - own_max), hi - (smin - own_min)]
      const int64_t lo = bounds_.lo - (smax - own_max);
      const int64_t hi = bounds_.hi - (smin - own_min);
      int64_t xlo, xhi;
      if (a > 0) {
        xlo = ceil_div(lo, a);
        xhi = floor_div(hi, a);
      } else {
        xlo = ceil_div(hi, a);
        xhi = floor_div(lo, a);
      }
      if (!store.set_min(vars_[i], xlo) || !store.set_max(vars_[i], xhi)) return false;
      if (store.dom(vars_[i]).min() != dmin || store.dom(vars_[i]).max() != dmax) changed = true;
    }
    if (!changed) return true;
  }
}

bool LinearSumBc::check(const Store& store) const {
  int64_t s = 0;
  for (size_t i = 0; i < vars_.size(); ++i) s += coeffs_[i] * store.value(vars_[i]);
  return bounds_.contains(s);
}

// -------------------------------------------------------------- LabelSumBc

LabelSumBc::LabelSumBc(std::vector<VarId> vars, std::vector<int64_t> labels, Interval bounds)
    : vars_(std::move(vars)), labels_(std::move(labels)), bounds_(bounds) {}

bool LabelSumBc::propagate(Store& store) {
  auto label = [&](int64_t v) { return labels_.at(static_cast<size_t>(v)); };
  for (;;) {
    int64_t smin = 0, smax = 0;
    std::vector<std::pair<int64_t, int64_t>> range;
    for (VarId x : vars_) {
      int64_t lo = kNone, hi = -kNone;
      for (int64_t v : store.dom(x).values()) {
        lo = std::min(lo, label(v));
        hi = std::max(hi, label(v));
      }
      range.emplace_back(lo, hi);
      smin += lo;
      smax += hi;
    }
    if (smin > bounds_.hi || smax < bounds_.lo) return false;
    bool changed = false;
    for (size_t i = 0; i < vars_.size(); ++i) {
      const int64_t lo = bounds_.lo - (smax - range[i].second);
      const int64_t hi = bounds_.hi - (smin - range[i].first);
      for (int64_t v : store.dom(vars_[i]).values()) {
        if (label(v) < lo || label(v) > hi) {
          if (!store.remove(vars_[i], v)) return false;
          changed = true;
        }
      }
    }
    if (!changed) return true;
  }
}

bool LabelSumBc::check(const Store& store) const {
  int64_t s = 0;
  for (VarId x : vars_) s += labels_.at(static_cast<size_t>(store.value(x)));
  return bounds_.contains(s);
}

// ---------------------------------------------------------------- NotEqual

bool NotEqual::propagate(Store& store) {
  if (store.dom(x_).assigned() && !store.remove(y_, store.value(x_))) return false;
  if (store.dom(y_).assigned() && !store.remove(x_, store.value(y_))) return false;
  return true;
}

// ------------------------------------------------------------------ LexLeq

LexLeq::LexLeq(std::vector<VarId> x, std::vector<VarId> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw InputError("lex constraint on rows of different lengths");
}

std::vector<VarId> LexLeq::scope() const {
  std::vector<VarId> s = x_;
  s.insert(s.end(), y_.begin(), y_.end());
  return s;
}

bool LexLeq::propagate(Store& store) {
  const size_t n = x_.size();
  for (;;) {
    size_t a = 0;
    while (a < n && store.dom(x_[a]).assigned() && store.dom(y_[a]).assigned() &&
           store.value(x_[a]) == store.value(y_[a]))
      ++a;
    if (a == n) return true;
    const Domain& dx = store.dom(x_[a]);
    const Domain& dy = store.dom(y_[a]);
    // When the suffix after `a` is already forced to be lex-greater, equality
    // at `a` is ruled out.
    bool strict = false;
    if (a + 1 == n) {
      strict = false;
    } else {
      for (size_t j = a + 1; j < n; ++j) {
        const int64_t xl = store.dom(x_[j]).min();
        const int64_t yh = store.dom(y_[j]).max();
        if (xl > yh) {
          strict = true;
          break;
        }
        if (xl < yh) break;
      }
    }
    const int64_t ymax = dy.max() - (strict ? 1 : 0);
    const int64_t xmin = dx.min() + (strict ? 1 : 0);
    const Domain bx = dx, by = dy;
    if (!store.set_max(x_[a], ymax) || !store.set_min(y_[a], xmin)) return false;
    const bool moved = !(store.dom(x_[a]) == bx) || !(store.dom(y_[a]) == by);
    const bool now_equal = store.dom(x_[a]).assigned() && store.dom(y_[a]).assigned() &&
                           store.value(x_[a]) == store.value(y_[a]);
    if (!moved && !now_equal) return true;
  }
}

bool LexLeq::check(const Store& store) const {
  for (size_t i = 0; i < x_.size(); ++i) {
    if (store.value(x_[i]) < store.value(y_[i])) return true;
    if (store.value(x_[i]) > store.value(y_[i])) return false;
  }
  return true;
}

void post_lex_chain(Store& store, const std::vector<std::vector<VarId>>& rows) {
  for (size_t i = 0; i + 1 < rows.size(); ++i) store.emplace<LexLeq>(rows[i], rows[i + 1]);
}

}  // namespace rgcc
