#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgcc/automata.hpp"

namespace rgcc {

using VarId = int;

enum class DomainKind {
  kSet,       // explicit finite set, supports holes (domain consistency)
  kInterval,  // bounds only; interior removals are ignored
};

/// Finite integer domain. Set domains use a bitset anchored at the initial
/// minimum; interval domains store bounds only.
class Domain {
 public:
  static Domain set(std::span<const int64_t> values);
  static Domain set(std::initializer_list<int64_t> values);
  static Domain interval(int64_t lo, int64_t hi);
  /// Set domain holding every value of [lo, hi].
  static Domain full_set(int64_t lo, int64_t hi);

  DomainKind kind() const { return kind_; }
  int64_t min() const { return lo_; }
  int64_t max() const { return hi_; }
  int64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool assigned() const { return size_ == 1; }
  bool contains(int64_t v) const;
  /// Values in increasing order. Intervals are expanded; keep them small.
  std::vector<int64_t> values() const;
  std::string to_string() const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  friend class Store;
  bool remove(int64_t v);
  bool set_min(int64_t v);
  bool set_max(int64_t v);
  void normalize();

  DomainKind kind_ = DomainKind::kInterval;
  int64_t lo_ = 0;
  int64_t hi_ = -1;
  int64_t size_ = 0;
  int64_t base_ = 0;
  std::vector<uint64_t> bits_;
};

class Store;

/// A filtering algorithm registered with a Store. `propagate` returns false
/// when it detects failure; `check` decides the constraint on a store where
/// every scope variable is assigned.
class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual std::string name() const = 0;
  virtual std::vector<VarId> scope() const = 0;
  virtual bool propagate(Store& store) = 0;
  virtual bool check(const Store& store) const = 0;
  /// Running twice in a row never prunes on the second run.
  virtual bool idempotent() const { return false; }
  /// 0 runs before 1. Does not change the fixpoint.
  virtual int priority() const { return 0; }
};

struct SearchStats {
  int64_t nodes = 0;
  int64_t backtracks = 0;
  int64_t failures = 0;
  int64_t propagations = 0;
  double wall_seconds = 0;
  bool root_failure = false;
};

enum class PropagationStatus { kStable, kFailed };

/// Variables, trail and propagation queue. Single-threaded.
class Store {
 public:
  Store() = default;
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  VarId new_var(Domain d, std::string name = {});
  int num_vars() const { return static_cast<int>(domains_.size()); }
  const Domain& dom(VarId x) const { return domains_[x]; }
  const std::string& var_name(VarId x) const { return names_[x]; }
  int64_t value(VarId x) const { return domains_[x].min(); }

  /// Registers and schedules a propagator; returns its index.
  int post(std::unique_ptr<Propagator> p);
  template <class P, class... Args>
  P& emplace(Args&&... args) {
    auto p = std::make_unique<P>(std::forward<Args>(args)...);
    P& ref = *p;
    post(std::move(p));
    return ref;
  }
  int num_propagators() const { return static_cast<int>(props_.size()); }
  const Propagator& propagator(int i) const { return *props_[i]; }

  // Domain updates. Each returns false iff the domain became empty; the store
  // is then failed until the level is popped.
  bool remove(VarId x, int64_t v);
  bool set_min(VarId x, int64_t v);
  bool set_max(VarId x, int64_t v);
  bool assign(VarId x, int64_t v);
  bool restrict_to(VarId x, Interval bounds) { return set_min(x, bounds.lo) && set_max(x, bounds.hi); }
  bool failed() const { return failed_; }
  void fail() { failed_ = true; }

  PropagationStatus propagate();

  void push_level();
  void pop_level();
  int level() const { return static_cast<int>(level_marks_.size()); }

  /// Every propagator's check() holds (all scopes must be assigned).
  bool check_all() const;

  SearchStats& stats() { return stats_; }
  const SearchStats& stats() const { return stats_; }

 private:
  void save(VarId x);
  void touched(VarId x);
  void schedule(int prop);

  std::vector<Domain> domains_;
  std::vector<std::string> names_;
  std::vector<int> saved_level_;
  struct TrailEntry {
    VarId var;
    int saved_level;
    Domain before;
  };
  std::vector<TrailEntry> trail_;
  std::vector<size_t> level_marks_;

  std::vector<std::unique_ptr<Propagator>> props_;
  std::vector<std::vector<int>> watchers_;
  std::vector<std::vector<int>> queues_{2};
  std::vector<size_t> queue_heads_{0, 0};
  std::vector<bool> queued_;
  int running_ = -1;
  bool failed_ = false;
  SearchStats stats_;
};

enum class Outcome { kSat, kUnsat, kTimeout };
std::string to_string(Outcome o);

struct SearchConfig {
  /// Decision variables in row-major order. Ties on domain size go to the
  /// first variable in this list.
  std::vector<VarId> branching;
  /// Variables labelled after `branching` once those are all fixed.
  std::vector<VarId> auxiliary;
  double time_limit_seconds = 0;  // 0: no limit
  int64_t node_limit = 0;
  int64_t backtrack_limit = 0;
};

struct SearchResult {
  Outcome outcome = Outcome::kUnsat;
  std::vector<int64_t> assignment;  // value of every store variable when sat
  SearchStats stats;
  int64_t solutions = 0;
};

/// Depth-first search, smallest domain first (ties row-wise), smallest value
/// first, binary branching x = v / x != v with chronological backtracking.
/// When `on_solution` is given it is called for every solution and search
/// continues while it returns true.
SearchResult solve(Store& store, const SearchConfig& cfg,
                   const std::function<bool(const Store&)>& on_solution = {});

}  // namespace rgcc
