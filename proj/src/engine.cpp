#include "rgcc/engine.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace rgcc {

// ---------------------------------------------------------------- Domain

Domain Domain::set(std::span<const int64_t> values) {
  Domain d;
  d.kind_ = DomainKind::kSet;
  if (values.empty()) return d;
  int64_t lo = *std::min_element(values.begin(), values.end());
  int64_t hi = *std::max_element(values.begin(), values.end());
  d.base_ = lo;
  d.bits_.assign(static_cast<size_t>((hi - lo) / 64 + 1), 0);
  for (int64_t v : values) {
    uint64_t off = static_cast<uint64_t>(v - lo);
    d.bits_[off / 64] |= uint64_t{1} << (off % 64);
  }
  d.lo_ = lo;
  d.hi_ = hi;
  d.normalize();
  return d;
}

Domain Domain::set(std::initializer_list<int64_t> values) {
  return set(std::span<const int64_t>(values.begin(), values.size()));
}

Domain Domain::interval(int64_t lo, int64_t hi) {
  Domain d;
  d.kind_ = DomainKind::kInterval;
  d.lo_ = lo;
  d.hi_ = hi;
  d.size_ = hi >= lo ? hi - lo + 1 : 0;
  return d;
}

Domain Domain::full_set(int64_t lo, int64_t hi) {
  std::vector<int64_t> v;
  for (int64_t x = lo; x <= hi; ++x) v.push_back(x);
  return set(v);
}

bool Domain::contains(int64_t v) const {
  if (v < lo_ || v > hi_) return false;
  if (kind_ == DomainKind::kInterval) return true;
  uint64_t off = static_cast<uint64_t>(v - base_);
  return (bits_[off / 64] >> (off % 64)) & 1u;
}

std::vector<int64_t> Domain::values() const {
  std::vector<int64_t> out;
  for (int64_t v = lo_; v <= hi_; ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

std::string Domain::to_string() const {
  std::ostringstream os;
  if (empty()) return "{}";
  if (kind_ == DomainKind::kInterval) {
    os << '[' << lo_ << ".." << hi_ << ']';
    return os.str();
  }
  os << '{';
  bool first = true;
  for (int64_t v : values()) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << '}';
  return os.str();
}

void Domain::normalize() {
  if (kind_ == DomainKind::kInterval) {
    size_ = hi_ >= lo_ ? hi_ - lo_ + 1 : 0;
    return;
  }
  while (lo_ <= hi_ && !contains(lo_)) ++lo_;
  while (hi_ >= lo_ && !contains(hi_)) --hi_;
  size_ = 0;
  if (lo_ > hi_) return;
  for (uint64_t w : bits_) size_ += std::popcount(w);
  // Bits outside [lo_, hi_] are always cleared when bounds move.
}

bool Domain::remove(int64_t v) {
  if (!contains(v)) return false;
  if (kind_ == DomainKind::kInterval) {
    if (v == lo_) ++lo_;
    else if (v == hi_) --hi_;
    else return false;
    normalize();
    return true;
  }
  uint64_t off = static_cast<uint64_t>(v - base_);
  bits_[off / 64] &= ~(uint64_t{1} << (off % 64));
  --size_;
  if (size_ == 0) {
    lo_ = 1;
    hi_ = 0;
  } else {
    while (!contains(lo_)) ++lo_;
    while (!contains(hi_)) --hi_;
  }
  return true;
}

bool Domain::set_min(int64_t v) {
  if (v <= lo_) return false;
  if (kind_ == DomainKind::kInterval) {
    lo_ = v;
    normalize();
    return true;
  }
  for (int64_t x = lo_; x < v && x <= hi_; ++x)
    if (contains(x)) remove(x);
  if (size_ == 0) {
    lo_ = 1;
    hi_ = 0;
  }
  return true;
}

bool Domain::set_max(int64_t v) {
  if (v >= hi_) return false;
  if (kind_ == DomainKind::kInterval) {
    hi_ = v;
    normalize();
    return true;
  }
  for (int64_t x = hi_; x > v && x >= lo_; --x)
    if (contains(x)) remove(x);
  if (size_ == 0) {
    lo_ = 1;
    hi_ = 0;
  }
  return true;
}

// ----------------------------------------------------------------- Store

VarId Store::new_var(Domain d, std::string name) {
  domains_.push_back(std::move(d));
  names_.push_back(std::move(name));
  saved_level_.push_back(-1);
  watchers_.emplace_back();
  if (domains_.back().empty()) failed_ = true;
  return static_cast<VarId>(domains_.size() - 1);
}

int Store::post(std::unique_ptr<Propagator> p) {
  const int id = static_cast<int>(props_.size());
  for (VarId x : p->scope()) {
    auto& w = watchers_.at(x);
    if (w.empty() || w.back() != id) w.push_back(id);
  }
  props_.push_back(std::move(p));
  queued_.push_back(false);
  schedule(id);
  return id;
}

void Store::save(VarId x) {
  if (saved_level_[x] == level()) return;
  trail_.push_back({x, saved_level_[x], domains_[x]});
  saved_level_[x] = level();
}

void Store::touched(VarId x) {
  for (int p : watchers_[x]) {
    if (p == running_ && props_[p]->idempotent()) continue;
    schedule(p);
  }
}

void Store::schedule(int prop) {
  if (queued_[prop]) return;
  queued_[prop] = true;
  int pr = std::clamp(props_[prop]->priority(), 0, 1);
  queues_[pr].push_back(prop);
}

bool Store::remove(VarId x, int64_t v) {
  if (failed_) return false;
  Domain& d = domains_[x];
  if (!d.contains(v)) return true;
  if (d.kind() == DomainKind::kInterval && v != d.min() && v != d.max()) return true;
  save(x);
  d.remove(v);
  if (d.empty()) {
    failed_ = true;
    return false;
  }
  touched(x);
  return true;
}

bool Store::set_min(VarId x, int64_t v) {
  if (failed_) return false;
  Domain& d = domains_[x];
  if (v <= d.min()) return true;
  save(x);
  d.set_min(v);
  if (d.empty()) {
    failed_ = true;
    return false;
  }
  touched(x);
  return true;
}

bool Store::set_max(VarId x, int64_t v) {
  if (failed_) return false;
  Domain& d = domains_[x];
  if (v >= d.max()) return true;
  save(x);
  d.set_max(v);
  if (d.empty()) {
    failed_ = true;
    return false;
  }
  touched(x);
  return true;
}

bool Store::assign(VarId x, int64_t v) {
  if (!domains_[x].contains(v)) {
    if (!failed_) save(x);
    failed_ = true;
    return false;
  }
  return set_min(x, v) && set_max(x, v);
}

PropagationStatus Store::propagate() {
  while (!failed_) {
    int next = -1;
    for (size_t pr = 0; pr < queues_.size() && next < 0; ++pr) {
      if (queue_heads_[pr] < queues_[pr].size()) next = queues_[pr][queue_heads_[pr]++];
    }
    if (next < 0) break;
    queued_[next] = false;
    running_ = next;
    ++stats_.propagations;
    const bool ok = props_[next]->propagate(*this);
    running_ = -1;
    if (!ok) failed_ = true;
  }
  for (size_t pr = 0; pr < queues_.size(); ++pr) {
    for (size_t i = queue_heads_[pr]; i < queues_[pr].size(); ++i) queued_[queues_[pr][i]] = false;
    queues_[pr].clear();
    queue_heads_[pr] = 0;
  }
  if (failed_) {
    ++stats_.failures;
    return PropagationStatus::kFailed;
  }
  return PropagationStatus::kStable;
}

void Store::push_level() { level_marks_.push_back(trail_.size()); }

void Store::pop_level() {
  if (level_marks_.empty()) throw std::logic_error("pop_level at root");
  const size_t mark = level_marks_.back();
  level_marks_.pop_back();
  while (trail_.size() > mark) {
    auto& e = trail_.back();
    domains_[e.var] = std::move(e.before);
    saved_level_[e.var] = e.saved_level;
    trail_.pop_back();
  }
  failed_ = false;
}

bool Store::check_all() const {
  for (const auto& p : props_) {
    for (VarId x : p->scope())
      if (!domains_[x].assigned()) return false;
    if (!p->check(*this)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Search

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kSat: return "sat";
    case Outcome::kUnsat: return "unsat";
    case Outcome::kTimeout: return "timeout";
  }
  return "?";
}

namespace {

class Search {
 public:
  Search(Store& store, const SearchConfig& cfg, const std::function<bool(const Store&)>& cb)
      : store_(store), cfg_(cfg), on_solution_(cb), start_(std::chrono::steady_clock::now()) {}

  SearchResult run() {
    SearchResult res;
    const auto before = store_.stats();
    if (store_.propagate() == PropagationStatus::kFailed) {
      store_.stats().root_failure = true;
      res.outcome = Outcome::kUnsat;
    } else {
      Step s = dfs();
      if (s == Step::kStop && limit_hit_) res.outcome = Outcome::kTimeout;
      else if (solutions_ > 0) res.outcome = Outcome::kSat;
      else res.outcome = limit_hit_ ? Outcome::kTimeout : Outcome::kUnsat;
    }
    res.assignment = std::move(first_solution_);
    res.solutions = solutions_;
    res.stats = store_.stats();
    res.stats.nodes -= before.nodes;
    res.stats.backtracks -= before.backtracks;
    res.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    store_.stats().wall_seconds = res.stats.wall_seconds;
    return res;
  }

 private:
  enum class Step { kFail, kStop };

  VarId select() const {
    VarId best = -1;
    int64_t best_size = 0;
    for (VarId x : cfg_.branching) {
      const auto& d = store_.dom(x);
      if (d.size() > 1 && (best < 0 || d.size() < best_size)) {
        best = x;
        best_size = d.size();
      }
    }
    if (best >= 0) return best;
    for (VarId x : cfg_.auxiliary)
      if (store_.dom(x).size() > 1) return x;
    return -1;
  }

  bool out_of_budget() {
    if (cfg_.node_limit > 0 && store_.stats().nodes >= cfg_.node_limit) return true;
    if (cfg_.backtrack_limit > 0 && store_.stats().backtracks >= cfg_.backtrack_limit) return true;
    if (cfg_.time_limit_seconds > 0 && (store_.stats().nodes & 15) == 0) {
      double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (t > cfg_.time_limit_seconds) return true;
    }
    return false;
  }

  // Called on a propagated, non-failed store. Returns kFail when the subtree
  // is exhausted and kStop when search must end.
  Step dfs() {
    for (;;) {
      VarId x = select();
      if (x < 0) {
        if (!store_.check_all())
          throw std::logic_error("search reached an assignment that violates a constraint");
        ++solutions_;
        if (first_solution_.empty()) {
          for (VarId y = 0; y < store_.num_vars(); ++y) first_solution_.push_back(store_.value(y));
        }
        if (!on_solution_ || !on_solution_(store_)) return Step::kStop;
        return Step::kFail;
      }
      if (out_of_budget()) {
        limit_hit_ = true;
        return Step::kStop;
      }
      const int64_t v = store_.dom(x).min();
      ++store_.stats().nodes;
      store_.push_level();
      Step s = Step::kFail;
      if (store_.assign(x, v) && store_.propagate() == PropagationStatus::kStable) s = dfs();
      store_.pop_level();
      if (s == Step::kStop) return s;
      ++store_.stats().backtracks;
      if (!store_.remove(x, v) || store_.propagate() == PropagationStatus::kFailed) return Step::kFail;
    }
  }

  Store& store_;
  const SearchConfig& cfg_;
  const std::function<bool(const Store&)>& on_solution_;
  std::chrono::steady_clock::time_point start_;
  std::vector<int64_t> first_solution_;
  int64_t solutions_ = 0;
  bool limit_hit_ = false;
};

}  // namespace

SearchResult solve(Store& store, const SearchConfig& cfg,
                   const std::function<bool(const Store&)>& on_solution) {
  return Search(store, cfg, on_solution).run();
}

}  // namespace rgcc
