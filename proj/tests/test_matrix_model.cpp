#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rgcc/builders.hpp"
#include "rgcc/generators.hpp"
#include "rgcc/matrix_model.hpp"
#include "rgcc/oracle.hpp"
#include "support.hpp"

using namespace rgcc;

namespace {

Interval fixed(int64_t v) { return {v, v}; }

bool subset(const CellSets& a, const CellSets& b) {
  for (size_t r = 0; r < a.size(); ++r)
    for (size_t k = 0; k < a[r].size(); ++k)
      for (int v : a[r][k].members())
        if (!b[r][k].contains(v)) return false;
  return true;
}

RandomParams small_params(std::mt19937_64& rng, uint64_t seed) {
  RandomParams p;
  p.rows = 1 + static_cast<int>(rng() % 4);
  p.cols = 1 + static_cast<int>(rng() % 4);
  p.values = 1 + static_cast<int>(rng() % 3);
  p.states = 1 + static_cast<int>(rng() % 3);
  p.tightness = static_cast<double>(rng() % 4) / 3.0;
  p.holes = static_cast<double>(rng() % 3) / 5.0;
  p.resources = static_cast<int>(rng() % 2);
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("word bounds from letter counts") {
  const std::vector<Interval> two{fixed(4), fixed(3)};
  auto b = compute_word_bounds(two, 5);
  CHECK(b.lower == fixed(2));
  CHECK(b.upper == fixed(3));

  const std::vector<Interval> counts{{3, 5}, fixed(5)};
  CHECK(compute_word_bounds(counts, 5).lower == Interval{3, 5});

  const std::vector<Interval> single{{1, 4}};
  b = compute_word_bounds(single, 5);
  CHECK(b.lower == Interval{1, 4});
  CHECK(b.upper == Interval{1, 4});

  const std::vector<Interval> low{fixed(1), fixed(1), fixed(2)};
  CHECK(compute_word_bounds(low, 3).lower == fixed(0));
}

TEST_CASE("stretch start and end bounds") {
  auto b = compute_stretch_bounds(fixed(2), fixed(4), fixed(0), 5);
  CHECK(b.ls_plus == fixed(2));
  CHECK(b.us_plus == fixed(3));
  CHECK(b.ls_minus == fixed(4));
  CHECK(b.us_minus == fixed(4));

  b = compute_stretch_bounds(fixed(0), fixed(3), fixed(1), 5);
  CHECK(b.ls_plus == fixed(3));
  CHECK(b.us_plus == fixed(3));

  b = compute_stretch_bounds(fixed(3), fixed(0), fixed(2), 5);
  CHECK(b.ls_plus == fixed(0));
  CHECK(b.us_plus == fixed(0));
  CHECK(b.ls_minus == fixed(0));
  CHECK(b.us_minus == fixed(0));
}

TEST_CASE("word and stretch bounds hold on every matrix") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int R = 1 + static_cast<int>(rng() % 4), K = 1 + static_cast<int>(rng() % 5), V = 2;
    Matrix m(R, std::vector<int>(K));
    for (auto& row : m)
      for (auto& c : row) c = static_cast<int>(rng() % V);
    const SymbolSet one(V, {1});
    std::vector<int64_t> col(K, 0);
    for (auto& row : m)
      for (int k = 0; k < K; ++k) col[k] += row[k];
    // stretches
    int64_t stretches = 0;
    for (auto& row : m) stretches += testing::stretch_count(row, one);
    int64_t lp = 0, up = 0, lm = 0, um = 0;
    for (int k = 0; k < K; ++k) {
      auto b = compute_stretch_bounds(fixed(k > 0 ? col[k - 1] : 0), fixed(col[k]),
                                      fixed(k + 1 < K ? col[k + 1] : 0), R);
      lp += b.ls_plus.lo;
      up += b.us_plus.lo;
      lm += b.ls_minus.lo;
      um += b.us_minus.lo;
    }
    CHECK(lp <= stretches);
    CHECK(stretches <= up);
    CHECK(lm <= stretches);
    CHECK(stretches <= um);
    // words
    if (K >= 2) {
      const WordPattern w{one, one};
      for (int k = 0; k + 1 < K; ++k) {
        int64_t occ = 0;
        for (auto& row : m) occ += testing::occurs_at(row, w, k);
        const std::vector<Interval> letters{fixed(col[k]), fixed(col[k + 1])};
        auto b = compute_word_bounds(letters, R);
        CHECK(b.lower.lo <= occ);
        CHECK(occ <= b.upper.hi);
      }
    }
  }
}

TEST_CASE("per-position word conditions catch the partial search node") {
  CHECK(testing::partial_node_root_fails(false));
  CHECK_FALSE(testing::partial_node_root_fails(true));
}

TEST_CASE("word conditions on free variables prune nothing") {
  Store s;
  const int R = 3, K = 4;
  std::vector<VarId> cards;
  for (int k = 0; k < K; ++k) cards.push_back(s.new_var(Domain::interval(0, R)));
  std::vector<std::vector<VarId>> occ(R);
  for (auto& row : occ)
    for (int k = 0; k + 1 < K; ++k) row.push_back(s.new_var(Domain::interval(0, 1)));
  post_word_conditions(s, {cards, cards}, occ, R, false);
  const auto before = testing::snapshot(s);
  REQUIRE(s.propagate() == PropagationStatus::kStable);
  CHECK(testing::snapshot(s) == before);
}

TEST_CASE("stretch count conditions") {
  // feasible iff the stretch counts per row are compatible with the column counts
  auto feasible = [](const std::vector<int64_t>& counts, const std::vector<int64_t>& z) {
    Store s;
    std::vector<VarId> cards, zs;
    for (auto c : counts) cards.push_back(s.new_var(Domain::interval(c, c)));
    for (auto v : z) zs.push_back(s.new_var(Domain::interval(v, v)));
    post_stretch_count_conditions(s, cards, zs, static_cast<int>(z.size()));
    return s.propagate() == PropagationStatus::kStable;
  };
  CHECK(feasible({3, 3, 3, 3}, {1, 1, 1}));
  CHECK_FALSE(feasible({3, 3, 3, 3}, {1, 1, 0}));
  CHECK_FALSE(feasible({3, 3, 3, 3}, {2, 1, 1}));
  CHECK(feasible({0, 0, 0}, {0, 0, 0}));
  CHECK_FALSE(feasible({0, 0, 0}, {0, 1, 0}));
  CHECK(feasible({2, 0}, {1, 1}));
  CHECK_FALSE(feasible({2, 0}, {1, 0}));
  CHECK_FALSE(feasible({2, 0}, {2, 1}));

  // every 2x2 0/1 matrix with column counts (2, 0) has two stretches of 1
  int64_t lo = 100, hi = -1;
  testing::for_each_word(4, 2, [&](const Word& w) {
    if (w[0] + w[2] != 2 || w[1] + w[3] != 0) return;
    const SymbolSet one(2, {1});
    const int64_t c = testing::stretch_count({w[0], w[1]}, one) + testing::stretch_count({w[2], w[3]}, one);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  });
  CHECK(lo == 2);
  CHECK(hi == 2);
}

TEST_CASE("stretch length conditions") {
  SUBCASE("stretches of length K cover every column") {
    Store s;
    const int K = 4, R = 5;
    std::vector<VarId> cards{s.new_var(Domain::interval(2, 2))};
    for (int k = 1; k < K; ++k) cards.push_back(s.new_var(Domain::interval(0, R)));
    VarId zmin = s.new_var(Domain::interval(K, K)), zmax = s.new_var(Domain::interval(K, K));
    post_stretch_length_conditions(s, cards, zmin, zmax, R);
    REQUIRE(s.propagate() == PropagationStatus::kStable);
    for (int k = 1; k < K; ++k) CHECK(s.dom(cards[k]).min() >= 2);
  }
  SUBCASE("unit stretches cannot fill three adjacent columns") {
    Store s;
    std::vector<VarId> cards;
    for (int k = 0; k < 3; ++k) cards.push_back(s.new_var(Domain::interval(1, 1)));
    VarId zmin = s.new_var(Domain::interval(1, 1)), zmax = s.new_var(Domain::interval(1, 1));
    post_stretch_length_conditions(s, cards, zmin, zmax, 1);
    CHECK(s.propagate() == PropagationStatus::kFailed);
  }
  SUBCASE("minimum length one leaves the counts alone") {
    Store s;
    std::vector<VarId> cards;
    for (int k = 0; k < 4; ++k) cards.push_back(s.new_var(Domain::interval(0, 3)));
    VarId zmin = s.new_var(Domain::interval(1, 1)), zmax = s.new_var(Domain::interval(1, 4));
    post_stretch_length_conditions(s, cards, zmin, zmax, 3);
    const auto before = testing::snapshot(s);
    REQUIRE(s.propagate() == PropagationStatus::kStable);
    CHECK(testing::snapshot(s) == before);
  }
}

TEST_CASE("stretch length conditions are sound") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int R = 1 + static_cast<int>(rng() % 3), K = 1 + static_cast<int>(rng() % 5);
    Matrix m(R, std::vector<int>(K));
    for (auto& row : m)
      for (auto& c : row) c = static_cast<int>(rng() % 2);
    const SymbolSet one(2, {1});
    int gmin = 0, gmax = 0;
    for (auto& row : m) {
      auto [lo, hi] = testing::stretch_lengths(row, one);
      if (lo > 0) gmin = gmin == 0 ? lo : std::min(gmin, lo);
      gmax = std::max(gmax, hi);
    }
    Store s;
    std::vector<VarId> cards;
    for (int k = 0; k < K; ++k) {
      int64_t c = 0;
      for (auto& row : m) c += row[k];
      cards.push_back(s.new_var(Domain::interval(c, c)));
    }
    VarId zmin = s.new_var(Domain::interval(gmin, gmin)), zmax = s.new_var(Domain::interval(gmax, gmax));
    post_stretch_length_conditions(s, cards, zmin, zmax, R);
    CHECK(s.propagate() == PropagationStatus::kStable);
  }
}

TEST_CASE("decomposition refutes p and not p by search") {
  const auto inst = gen_3sat(Cnf{1, {{1}, {-1}}});
  auto model = build_model(inst, {});
  auto res = solve(*model.store, model.search);
  CHECK(res.outcome == Outcome::kUnsat);
  CHECK(brute_count(inst) == 0);
}

TEST_CASE("search solutions satisfy the instance and channel the counts") {
  std::mt19937_64 rng(7);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = gen_random(small_params(rng, trial));
    for (Mode mode : {Mode::kDecomp, Mode::kWa, Mode::kCwa}) {
      ModelOptions opts;
      opts.mode = mode;
      auto model = build_model(inst, opts);
      auto res = solve(*model.store, model.search, [&](const Store& st) {
        Matrix m(inst.rows, std::vector<int>(inst.cols));
        for (int r = 0; r < inst.rows; ++r)
          for (int k = 0; k < inst.cols; ++k) m[r][k] = static_cast<int>(st.value(model.cells[r][k]));
        CHECK(inst.satisfied_by(m));
        for (int v = 0; v < inst.num_values; ++v)
          for (int k = 0; k < inst.cols; ++k) {
            int64_t c = 0;
            for (int r = 0; r < inst.rows; ++r) c += m[r][k] == v;
            CHECK(st.value(model.cards[v][k]) == c);
          }
        return false;
      });
      const bool expected = brute_find(inst).has_value();
      CHECK((res.outcome == Outcome::kSat) == expected);
      solved += res.outcome == Outcome::kSat;
    }
  }
  CHECK(solved > 0);
}

TEST_CASE("root pruning is sound and monotone across modes") {
  std::mt19937_64 rng(11);
  int strictly = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto inst = gen_random(small_params(rng, 1000 + trial));
    const CellSets truth = brute_dc(inst);
    std::vector<CellSets> roots;
    for (Mode mode : {Mode::kDecomp, Mode::kWa, Mode::kCwa}) {
      ModelOptions opts;
      opts.mode = mode;
      auto model = build_model(inst, opts);
      roots.push_back(root_cell_domains(model));
      CHECK(subset(truth, roots.back()));
    }
    CHECK(subset(roots[1], roots[0]));
    CHECK(subset(roots[2], roots[1]));
    strictly += roots[2] != roots[0];
  }
  MESSAGE("instances where CWA pruned more than DECOMP: " << strictly);
}

TEST_CASE("symmetry breaking keeps one solution per row permutation class") {
  auto inst = MatrixInstance::unconstrained(2, 2, 2, make_weighted(Dfa::universal(2)));
  ModelOptions opts;
  opts.symmetry_breaking = true;
  auto model = build_model(inst, opts);
  int64_t count = 0;
  solve(*model.store, model.search, [&](const Store&) { return ++count, true; });
  // rows ordered lexicographically: C(4 + 1, 2) = 10 multisets of two rows
  CHECK(count == 10);
}

TEST_CASE("inconsistent instances are rejected") {
  auto inst = MatrixInstance::unconstrained(2, 2, 2, make_weighted(Dfa::universal(2)));
  inst.columns.pop_back();
  CHECK_THROWS_AS(build_model(inst, {}), InputError);
  inst = MatrixInstance::unconstrained(2, 2, 2, make_weighted(Dfa::universal(3)));
  CHECK_THROWS_AS(build_model(inst, {}), InputError);
}
