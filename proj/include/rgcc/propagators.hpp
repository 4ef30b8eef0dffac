#pragma once

#include <vector>

#include "rgcc/automata.hpp"
#include "rgcc/engine.hpp"

namespace rgcc {

/// Unfolding of an automaton over a variable sequence: node (i, q) for each
/// layer i in [0, n] and state q; arc (i, q, v) for v in dom(x_i). After
/// build() only nodes on some start-to-accepting path are alive.
class LayeredGraph {
 public:
  /// Returns false when no accepted word fits the domains.
  bool build(const Store& store, std::span<const VarId> xs, const Dfa& dfa);
  /// Recomputes reachability after remove_arc calls.
  bool trim();

  int layers() const { return n_; }
  bool node_alive(int layer, int q) const { return fwd_[idx(layer, q)] && bwd_[idx(layer, q)]; }
  const std::vector<int>& layer_states(int layer) const { return reach_[layer]; }
  const std::vector<int>& symbols(int layer) const { return symbols_[layer]; }
  bool arc_alive(int layer, int q, int v) const;
  void remove_arc(int layer, int q, int v) { removed_[arc_idx(layer, q, v)] = 1; }
  const Dfa& dfa() const { return *dfa_; }

  /// Values of x_i carried by at least one alive arc.
  void supported(int layer, std::vector<char>& out) const;

 private:
  size_t idx(int layer, int q) const { return static_cast<size_t>(layer) * nq_ + q; }
  size_t arc_idx(int layer, int q, int v) const {
    return (static_cast<size_t>(layer) * nq_ + q) * nv_ + v;
  }

  const Dfa* dfa_ = nullptr;
  int n_ = 0, nq_ = 0, nv_ = 0;
  std::vector<std::vector<int>> symbols_;
  std::vector<std::vector<int>> reach_;  // forward-reachable states per layer
  std::vector<uint8_t> fwd_, bwd_, removed_;
};

/// Domain-consistent Regular(X, A).
class RegularDc final : public Propagator {
 public:
  RegularDc(std::vector<VarId> xs, Dfa dfa);
  std::string name() const override { return "regular"; }
  std::vector<VarId> scope() const override { return xs_; }
  bool propagate(Store& store) override;
  bool check(const Store& store) const override;
  bool idempotent() const override { return true; }
  int priority() const override { return 1; }

 private:
  std::vector<VarId> xs_;
  Dfa dfa_;
  LayeredGraph graph_;
};

/// multicostRegular(X, Z, A, c) filtered with per-resource shortest and
/// longest paths over the layered graph, iterated to a local fixpoint.
class McrFilter final : public Propagator {
 public:
  McrFilter(std::vector<VarId> xs, WeightedDfa wdfa, std::vector<VarId> zs);
  std::string name() const override { return "multicost-regular"; }
  std::vector<VarId> scope() const override;
  bool propagate(Store& store) override;
  bool check(const Store& store) const override;
  bool idempotent() const override { return true; }
  int priority() const override { return 1; }
  const WeightedDfa& automaton() const { return wdfa_; }

 private:
  std::vector<VarId> xs_;
  WeightedDfa wdfa_;
  std::vector<VarId> zs_;
  struct Arc {
    int layer, q, v;
    size_t from, to;
    uint32_t cost_begin, cost_end;
  };
  LayeredGraph graph_;
  std::vector<uint32_t> cost_offsets_;
  std::vector<CostEntry> cost_flat_;
  std::vector<Arc> arcs_;
  std::vector<int64_t> cost_;
  std::vector<int> tight_;
  std::vector<int64_t> fmin_, fmax_, bmin_, bmax_;
};

/// Counting filter for a global cardinality constraint over `column`: the
/// number of variables equal to v is cards[v], for v in [0, cards.size()).
class GccBc final : public Propagator {
 public:
  GccBc(std::vector<VarId> column, std::vector<VarId> cards);
  std::string name() const override { return "gcc"; }
  std::vector<VarId> scope() const override;
  bool propagate(Store& store) override;
  bool check(const Store& store) const override;
  bool idempotent() const override { return true; }

 private:
  std::vector<VarId> column_;
  std::vector<VarId> cards_;
};

/// Bounds reasoning for sum(coeffs[i] * vars[i]) in bounds.
class LinearSumBc final : public Propagator {
 public:
  LinearSumBc(std::vector<VarId> vars, std::vector<int64_t> coeffs, Interval bounds);
  std::string name() const override { return "linear"; }
  std::vector<VarId> scope() const override { return vars_; }
  bool propagate(Store& store) override;
  bool check(const Store& store) const override;
  bool idempotent() const override { return true; }

 private:
  std::vector<VarId> vars_;
  std::vector<int64_t> coeffs_;
  Interval bounds_;
};

/// sum(labels[x_i]) in bounds, where each x_i holds a symbol index.
class LabelSumBc final : public Propagator {
 public:
  LabelSumBc(std::vector<VarId> vars, std::vector<int64_t> labels, Interval bounds);
  std::string name() const override { return "label-sum"; }
  std::vector<VarId> scope() const override { return vars_; }
  bool propagate(Store& store) override;
  bool check(const Store& store) const override;
  bool idempotent() const override { return true; }

 private:
  std::vector<VarId> vars_;
  std::vector<int64_t> labels_;
  Interval bounds_;
};

class NotEqual final : public Propagator {
 public:
  NotEqual(VarId x, VarId y) : x_(x), y_(y) {}
  std::string name() const override { return "not-equal"; }
  std::vector<VarId> scope() const override { return {x_, y_}; }
  bool propagate(Store& store) override;
  bool check(const Store& store) const override { return store.value(x_) != store.value(y_); }
  bool idempotent() const override { return true; }

 private:
  VarId x_, y_;
};

/// x <=_lex y on bounds.
class LexLeq final : public Propagator {
 public:
  LexLeq(std::vector<VarId> x, std::vector<VarId> y);
  std::string name() const override { return "lex-leq"; }
  std::vector<VarId> scope() const override;
  bool propagate(Store& store) override;
  bool check(const Store& store) const override;
  bool idempotent() const override { return true; }

 private:
  std::vector<VarId> x_, y_;
};

/// rows[0] <=_lex rows[1] <=_lex ... as a chain of pairwise LexLeq.
void post_lex_chain(Store& store, const std::vector<std::vector<VarId>>& rows);

}  // namespace rgcc
