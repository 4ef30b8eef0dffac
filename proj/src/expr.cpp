#include "rgcc/expr.hpp"

#include <algorithm>
#include <set>

namespace rgcc {
namespace {

constexpr int64_t kInf = Interval::kInf;

int64_t clamp(int64_t v) { return std::clamp(v, -kInf, kInf); }
int64_t add_sat(int64_t a, int64_t b) { return clamp(a + b); }
int64_t mul_sat(int64_t k, int64_t a) {
  if (a >= kInf / k) return kInf;
  if (a <= -kInf / k) return -kInf;
  return k * a;
}
int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

}  // namespace

Expr::Node Expr::add(NodeData n) {
  for (Node c : n.kids)
    if (c < 0 || c >= size()) throw InputError("expression child out of range");
  nodes_.push_back(std::move(n));
  return size() - 1;
}

Expr::Node Expr::var(VarId x) { return add({Op::kVar, x, {}}); }
Expr::Node Expr::constant(int64_t c) { return add({Op::kConst, c, {}}); }
Expr::Node Expr::sum(std::vector<Node> terms) { return add({Op::kSum, 0, std::move(terms)}); }
Expr::Node Expr::neg(Node a) { return add({Op::kNeg, 0, {a}}); }
Expr::Node Expr::scale(int64_t k, Node a) {
  if (k <= 0) throw InputError("scale factor must be positive");
  return add({Op::kScale, k, {a}});
}
Expr::Node Expr::max(Node a, Node b) { return add({Op::kMax, 0, {a, b}}); }
Expr::Node Expr::min(Node a, Node b) { return add({Op::kMin, 0, {a, b}}); }

std::vector<VarId> Expr::variables() const {
  std::set<VarId> vs;
  for (const auto& n : nodes_)
    if (n.op == Op::kVar) vs.insert(static_cast<VarId>(n.k));
  return {vs.begin(), vs.end()};
}

int64_t Expr::evaluate(const Store& store, Node root) const {
  std::vector<int64_t> val(static_cast<size_t>(root) + 1);
  for (Node i = 0; i <= root; ++i) {
    const auto& n = nodes_[i];
    switch (n.op) {
      case Op::kVar: val[i] = store.value(static_cast<VarId>(n.k)); break;
      case Op::kConst: val[i] = n.k; break;
      case Op::kSum:
        val[i] = 0;
        for (Node c : n.kids) val[i] += val[c];
        break;
      case Op::kNeg: val[i] = -val[n.kids[0]]; break;
      case Op::kScale: val[i] = n.k * val[n.kids[0]]; break;
      case Op::kMax: val[i] = std::max(val[n.kids[0]], val[n.kids[1]]); break;
      case Op::kMin: val[i] = std::min(val[n.kids[0]], val[n.kids[1]]); break;
    }
  }
  return val[root];
}

ExprBounds::ExprBounds(Expr expr, Expr::Node root, Interval bounds, std::string label)
    : expr_(std::move(expr)), root_(root), bounds_(bounds), label_(std::move(label)) {
  if (root_ < 0 || root_ >= expr_.size()) throw InputError("expression root out of range");
}

bool ExprBounds::revise(Store& store, bool& moved) {
  using Op = Expr::Op;
  const auto& nodes = expr_.nodes_;
  box_.assign(static_cast<size_t>(root_) + 1, Interval{0, 0});
  for (Expr::Node i = 0; i <= root_; ++i) {
    const auto& n = nodes[i];
    Interval& b = box_[i];
    switch (n.op) {
      case Op::kVar: {
        const Domain& d = store.dom(static_cast<VarId>(n.k));
        b = {d.min(), d.max()};
        break;
      }
      case Op::kConst: b = {n.k, n.k}; break;
      case Op::kSum:
        b = {0, 0};
        for (auto c : n.kids) b = {add_sat(b.lo, box_[c].lo), add_sat(b.hi, box_[c].hi)};
        break;
      case Op::kNeg: b = {-box_[n.kids[0]].hi, -box_[n.kids[0]].lo}; break;
      case Op::kScale: b = {mul_sat(n.k, box_[n.kids[0]].lo), mul_sat(n.k, box_[n.kids[0]].hi)}; break;
      case Op::kMax:
        b = {std::max(box_[n.kids[0]].lo, box_[n.kids[1]].lo), std::max(box_[n.kids[0]].hi, box_[n.kids[1]].hi)};
        break;
      case Op::kMin:
        b = {std::min(box_[n.kids[0]].lo, box_[n.kids[1]].lo), std::min(box_[n.kids[0]].hi, box_[n.kids[1]].hi)};
        break;
    }
  }
  box_[root_] = box_[root_].intersect(bounds_);
  if (box_[root_].empty()) return false;

  for (Expr::Node i = root_; i >= 0; --i) {
    const auto& n = nodes[i];
    const Interval b = box_[i];
    if (b.empty()) return false;
    auto narrow = [&](Expr::Node c, Interval with) {
      box_[c] = box_[c].intersect(with);
      return !box_[c].empty();
    };
    switch (n.op) {
      case Op::kVar: {
        const VarId x = static_cast<VarId>(n.k);
        const int64_t before_lo = store.dom(x).min(), before_hi = store.dom(x).max(), before_sz = store.dom(x).size();
        if (!store.set_min(x, b.lo) || !store.set_max(x, b.hi)) return false;
        if (store.dom(x).min() != before_lo || store.dom(x).max() != before_hi || store.dom(x).size() != before_sz) moved = true;
        break;
      }
      case Op::kConst:
        if (!b.contains(n.k)) return false;
        break;
      case Op::kSum: {
        int64_t slo = 0, shi = 0;
        for (auto c : n.kids) {
          slo = add_sat(slo, box_[c].lo);
          shi = add_sat(shi, box_[c].hi);
        }
        for (auto c : n.kids) {
          const int64_t rest_lo = std::abs(slo) >= kInf ? -kInf : slo - box_[c].lo;
          const int64_t rest_hi = std::abs(shi) >= kInf ? kInf : shi - box_[c].hi;
          const Interval want{add_sat(b.lo, -rest_hi), add_sat(b.hi, -rest_lo)};
          const Interval old = box_[c];
          if (!narrow(c, want)) return false;
          slo = add_sat(slo, box_[c].lo - old.lo);
          shi = add_sat(shi, box_[c].hi - old.hi);
        }
        break;
      }
      case Op::kNeg:
        if (!narrow(n.kids[0], {-b.hi, -b.lo})) return false;
        break;
      case Op::kScale:
        if (!narrow(n.kids[0], {ceil_div(b.lo, n.k), floor_div(b.hi, n.k)})) return false;
        break;
      case Op::kMax: {
        const auto a = n.kids[0], c = n.kids[1];
        if (!narrow(a, {-kInf, b.hi}) || !narrow(c, {-kInf, b.hi})) return false;
        if (box_[a].hi < b.lo && !narrow(c, {b.lo, kInf})) return false;
        if (box_[c].hi < b.lo && !narrow(a, {b.lo, kInf})) return false;
        break;
      }
      case Op::kMin: {
        const auto a = n.kids[0], c = n.kids[1];
        if (!narrow(a, {b.lo, kInf}) || !narrow(c, {b.lo, kInf})) return false;
        if (box_[a].lo > b.hi && !narrow(c, {-kInf, b.hi})) return false;
        if (box_[c].lo > b.hi && !narrow(a, {-kInf, b.hi})) return false;
        break;
      }
    }
  }
  return true;
}

bool ExprBounds::propagate(Store& store) {
  for (;;) {
    bool moved = false;
    if (!revise(store, moved)) return false;
    if (!moved) return true;
  }
}

bool ExprBounds::check(const Store& store) const {
  return bounds_.contains(expr_.evaluate(store, root_));
}

}  // namespace rgcc
