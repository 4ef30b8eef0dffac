#pragma once

#include <vector>

#include "rgcc/engine.hpp"

namespace rgcc {

/// Integer expression DAG over store variables. Nodes are appended in
/// construction order, so children always precede their parents.
class Expr {
 public:
  using Node = int;
  enum class Op { kVar, kConst, kSum, kNeg, kScale, kMax, kMin };

  Node var(VarId x);
  Node constant(int64_t c);
  Node sum(std::vector<Node> terms);
  Node neg(Node a);
  /// k * a with k > 0.
  Node scale(int64_t k, Node a);
  Node max(Node a, Node b);
  Node min(Node a, Node b);
  Node sub(Node a, Node b) { return sum({a, neg(b)}); }

  int size() const { return static_cast<int>(nodes_.size()); }
  std::vector<VarId> variables() const;
  /// Exact value on a store where every variable is assigned.
  int64_t evaluate(const Store& store, Node root) const;

 private:
  friend class ExprBounds;
  struct NodeData {
    Op op;
    int64_t k = 0;  // constant, scale factor or variable id
    std::vector<Node> kids;
  };
  Node add(NodeData n);
  std::vector<NodeData> nodes_;
};

/// expr(root) in bounds, filtered by forward interval evaluation and backward
/// projection (HC4-revise) repeated until no variable bound moves.
class ExprBounds final : public Propagator {
 public:
  ExprBounds(Expr expr, Expr::Node root, Interval bounds, std::string label = "expr");
  std::string name() const override { return label_; }
  std::vector<VarId> scope() const override { return expr_.variables(); }
  bool propagate(Store& store) override;
  bool check(const Store& store) const override;
  bool idempotent() const override { return true; }

 private:
  bool revise(Store& store, bool& moved);

  Expr expr_;
  Expr::Node root_;
  Interval bounds_;
  std::string label_;
  std::vector<Interval> box_;
};

}  // namespace rgcc
