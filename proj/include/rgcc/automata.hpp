#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgcc {

/// Thrown for malformed automata, words or builder arguments.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed integer interval. Empty when lo > hi.
struct Interval {
  int64_t lo = 0;
  int64_t hi = 0;

  static constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
  static Interval unbounded() { return {-kInf, kInf}; }

  bool empty() const { return lo > hi; }
  bool contains(int64_t v) const { return lo <= v && v <= hi; }
  Interval intersect(Interval o) const {
    return {std::max(lo, o.lo), std::min(hi, o.hi)};
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

using Word = std::vector<int>;

/// Set of symbols represented as a membership mask over 0..num_symbols-1.
class SymbolSet {
 public:
  SymbolSet() = default;
  SymbolSet(int num_symbols, std::initializer_list<int> members);
  SymbolSet(int num_symbols, std::span<const int> members);
  static SymbolSet all(int num_symbols);

  int universe() const { return static_cast<int>(mask_.size()); }
  bool contains(int v) const { return v >= 0 && v < universe() && mask_[v]; }
  void insert(int v);
  int size() const;
  bool empty() const { return size() == 0; }
  std::vector<int> members() const;
  SymbolSet complement() const;

  friend bool operator==(const SymbolSet&, const SymbolSet&) = default;

 private:
  std::vector<bool> mask_;
};

/// Complete deterministic automaton over symbols 0..num_symbols-1.
/// Transitions are total; dead states are explicit.
class Dfa {
 public:
  Dfa() = default;
  Dfa(int num_states, int num_symbols, int start, std::vector<int> transitions,
      std::vector<bool> accepting);

  int num_states() const { return num_states_; }
  int num_symbols() const { return num_symbols_; }
  int start() const { return start_; }
  int next(int state, int symbol) const {
    return transitions_[static_cast<size_t>(state) * num_symbols_ + symbol];
  }
  bool is_accepting(int state) const { return accepting_[state]; }
  const std::vector<int>& transitions() const { return transitions_; }
  const std::vector<bool>& accepting() const { return accepting_; }

  /// Follows the run of `word` from the start state. Throws InputError on a
  /// symbol outside the alphabet.
  int run(std::span<const int> word) const;
  bool accepts(std::span<const int> word) const;

  /// One-state automaton accepting every word.
  static Dfa universal(int num_symbols);

  friend bool operator==(const Dfa&, const Dfa&) = default;

 private:
  int num_states_ = 0;
  int num_symbols_ = 0;
  int start_ = 0;
  std::vector<int> transitions_;
  std::vector<bool> accepting_;
};

struct CostEntry {
  int resource = 0;
  int64_t cost = 0;
  friend bool operator==(const CostEntry&, const CostEntry&) = default;
};

/// Sparse family of cost matrices c^r(q, v) or, when positional, c^r(q, v, i)
/// for positions i in [0, horizon). Absent entries cost 0.
class CostMatrices {
 public:
  CostMatrices() = default;
  CostMatrices(int num_resources, int num_states, int num_symbols, int horizon = 0);

  int num_resources() const { return num_resources_; }
  int num_states() const { return num_states_; }
  int num_symbols() const { return num_symbols_; }
  bool positional() const { return horizon_ > 0; }
  int horizon() const { return horizon_; }

  /// Adds `cost` to c^r(q, v[, position]). Position is ignored (must be 0)
  /// for non-positional matrices.
  void add(int resource, int state, int symbol, int64_t cost, int position = 0);
  int64_t cost(int resource, int state, int symbol, int position = 0) const;
  std::span<const CostEntry> entries(int state, int symbol, int position = 0) const;
  bool all_zero() const;

  friend bool operator==(const CostMatrices&, const CostMatrices&) = default;

 private:
  size_t cell(int state, int symbol, int position) const;

  int num_resources_ = 0;
  int num_states_ = 0;
  int num_symbols_ = 0;
  int horizon_ = 0;
  std::vector<std::vector<CostEntry>> cells_;
};

/// A Dfa with resource costs and static bounds on each resource total.
struct WeightedDfa {
  Dfa dfa;
  CostMatrices costs;
  std::vector<Interval> resource_bounds;

  int num_resources() const { return costs.num_resources(); }
  void validate() const;
  friend bool operator==(const WeightedDfa&, const WeightedDfa&) = default;
};

WeightedDfa make_weighted(Dfa dfa);

struct WeightedRun {
  bool accepted = false;
  std::vector<int64_t> totals;
};

WeightedRun run_weighted(const WeightedDfa& wdfa, std::span<const int> word);

/// Accepted and every resource total inside its bound.
bool satisfies(const WeightedDfa& wdfa, std::span<const int> word);

enum class ResourceMerge {
  kConcatenate,  // resources of b are renumbered after those of a
  kSum,          // resource r of the product costs c^{a,r} + c^{b,r}
};

/// Cross product restricted to states reachable from the start pair.
/// Accepting iff both components accept. With kSum the bounds of a shared
/// resource are the intersection of both factors' bounds.
WeightedDfa product(const WeightedDfa& a, const WeightedDfa& b,
                    ResourceMerge merge = ResourceMerge::kConcatenate);

/// Counter-annotated automaton. Counters start at 0 and live in
/// [0, range). `update` rewrites the counter vector in place on the
/// transition (state, symbol).
struct CounterDfa {
  using Update = std::function<void(int state, int symbol, std::span<int> counters)>;

  Dfa dfa;
  int num_counters = 0;
  int range = 1;
  Update update;
};

/// Thrown when a counter update leaves [0, range) or the unfolding exceeds
/// its state budget.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replaces counters by states of Q x {0..range-1}^m (reachable part only) and
/// one resource per counter whose cost is the counter delta, so resource
/// totals equal final counter values.
WeightedDfa unfold_counters(const CounterDfa& cdfa, int max_states = 1 << 22);

/// Textual dump, one transition per line. See docs/automaton_dump.md.
std::string dump(const WeightedDfa& wdfa);
std::string dump(const Dfa& dfa);

/// Inverse of dump. Errors name the offending line, counted from
/// `first_line`.
WeightedDfa parse_dump(const std::string& text, int first_line = 1);

}  // namespace rgcc
