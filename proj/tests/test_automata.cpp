#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rgcc/automata.hpp"
#include "rgcc/builders.hpp"
#include "support.hpp"

using namespace rgcc;
using testing::random_word;
using testing::random_weighted;

namespace {

// Values {-1, 0, 1} are symbols {0, 1, 2}.
constexpr int kM = 0, kZ = 1, kP = 2;

Dfa no_mixed_signs() { return build_exclusive_pair(3, kP, kM); }

}  // namespace

TEST_CASE("accepts follows the unique run") {
  const Dfa a = no_mixed_signs();
  CHECK(a.accepts(Word{kZ, kP, kP, kZ}));
  CHECK_FALSE(a.accepts(Word{kP, kM}));
  CHECK(a.accepts(Word{}) == a.is_accepting(a.start()));
  CHECK_THROWS_AS(a.accepts(Word{3}), InputError);
  CHECK_THROWS_AS(a.accepts(Word{-1}), InputError);
}

TEST_CASE("dfa construction rejects partial tables") {
  CHECK_THROWS_AS(Dfa(2, 2, 0, {0, 1, 1}, {true, false}), InputError);
  CHECK_THROWS_AS(Dfa(2, 2, 2, {0, 1, 1, 0}, {true, false}), InputError);
  CHECK_THROWS_AS(Dfa(2, 2, 0, {0, 1, 1, 5}, {true, false}), InputError);
}

TEST_CASE("run_weighted sums costs along the run") {
  const SymbolSet one(2, {1});
  const WeightedDfa a = build_stretch_count(one);
  auto r = run_weighted(a, Word{0, 1, 1, 0, 1});
  CHECK(r.accepted);
  CHECK(r.totals == std::vector<int64_t>{2});
  CHECK(run_weighted(a, Word{0, 0, 0}).totals == std::vector<int64_t>{0});
  const WeightedDfa zero = make_weighted(no_mixed_signs());
  CHECK(run_weighted(zero, Word{kP, kZ}).totals.empty());
}

TEST_CASE("product with the universal automaton is the identity") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    WeightedDfa x = random_weighted(rng, 3, 2);
    WeightedDfa p = product(x, make_weighted(Dfa::universal(3)));
    for (int j = 0; j < 10; ++j) {
      Word w = random_word(rng, static_cast<int>(rng() % 6), 3);
      auto a = run_weighted(x, w), b = run_weighted(p, w);
      CHECK(a.accepted == b.accepted);
      CHECK(a.totals == b.totals);
    }
  }
}

TEST_CASE("product of the exclusive-pair automaton with itself keeps its language") {
  const WeightedDfa a = make_weighted(no_mixed_signs());
  const WeightedDfa p = product(a, a);
  testing::for_each_word(4, 3, [&](const Word& w) { CHECK(p.dfa.accepts(w) == a.dfa.accepts(w)); });
}

TEST_CASE("product of two stretch counters measures both") {
  const WeightedDfa ones = build_stretch_count(SymbolSet(2, {1}));
  const WeightedDfa zeros = build_stretch_count(SymbolSet(2, {0}));
  const WeightedDfa p = product(ones, zeros);
  auto r = run_weighted(p, Word{0, 1, 0});
  CHECK(r.totals == std::vector<int64_t>{1, 2});
  CHECK(r.totals[0] == run_weighted(ones, Word{0, 1, 0}).totals[0]);
  CHECK(r.totals[1] == run_weighted(zeros, Word{0, 1, 0}).totals[0]);
}

TEST_CASE("summed product adds shared resources and intersects bounds") {
  WeightedDfa a = build_stretch_count(SymbolSet(2, {1}));
  WeightedDfa b = build_stretch_count(SymbolSet(2, {0}));
  a.resource_bounds = {{0, 3}};
  b.resource_bounds = {{1, 5}};
  const WeightedDfa p = product(a, b, ResourceMerge::kSum);
  CHECK(p.num_resources() == 1);
  CHECK(p.resource_bounds[0] == Interval{1, 3});
  CHECK(run_weighted(p, Word{0, 1, 0, 1}).totals[0] == 4);
}

TEST_CASE("product rejects different alphabets") {
  CHECK_THROWS_AS(product(make_weighted(Dfa::universal(2)), make_weighted(Dfa::universal(3))), InputError);
}

TEST_CASE("product fuzz: intersection, additivity and size bound") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const int V = 2 + static_cast<int>(rng() % 2);
    WeightedDfa a = random_weighted(rng, V, 1), b = random_weighted(rng, V, 2);
    WeightedDfa p = product(a, b);
    CHECK(p.dfa.num_states() <= a.dfa.num_states() * b.dfa.num_states());
    Word w = random_word(rng, static_cast<int>(rng() % 7), V);
    auto ra = run_weighted(a, w), rb = run_weighted(b, w), rp = run_weighted(p, w);
    CHECK(rp.accepted == (testing::direct_accepts(a.dfa, w) && testing::direct_accepts(b.dfa, w)));
    std::vector<int64_t> cat = ra.totals;
    cat.insert(cat.end(), rb.totals.begin(), rb.totals.end());
    CHECK(rp.totals == cat);
  }
}

TEST_CASE("unfolding without counters keeps the automaton") {
  CounterDfa c{no_mixed_signs(), 0, 1, {}};
  WeightedDfa w = unfold_counters(c);
  CHECK(w.dfa.num_states() == no_mixed_signs().num_states());
  CHECK(w.num_resources() == 0);
  testing::for_each_word(4, 3, [&](const Word& x) { CHECK(w.dfa.accepts(x) == no_mixed_signs().accepts(x)); });
}

TEST_CASE("stretch length counters") {
  const SymbolSet one(2, {1});
  const WeightedDfa x = build_stretch_length_extractor(one, 4);
  auto r = run_weighted(x, Word{1, 1, 0, 1});
  CHECK(r.accepted);
  CHECK(r.totals == std::vector<int64_t>{1, 2});
  CHECK(run_weighted(x, Word{0, 0, 0, 0}).totals == std::vector<int64_t>{0, 0});
}

TEST_CASE("unfolding one counter over two states stays within the size bound") {
  // counts symbol 1, range {0..3}
  CounterDfa c{Dfa(2, 2, 0, {1, 0, 1, 0}, {true, true}), 1, 4,
               [](int, int v, std::span<int> d) { d[0] = std::min(3, d[0] + v); }};
  WeightedDfa w = unfold_counters(c);
  CHECK(w.dfa.num_states() <= 8);
  CHECK(run_weighted(w, Word{1, 1, 0}).totals[0] == 2);
}

TEST_CASE("unfolding rejects counters that leave their range") {
  CounterDfa c{Dfa::universal(2), 1, 2, [](int, int, std::span<int> d) { d[0] += 1; }};
  CHECK_THROWS_AS(unfold_counters(c), ConstructionError);
}

TEST_CASE("unfolding matches direct counter simulation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const SymbolSet set(3, {static_cast<int>(rng() % 3)});
    CounterDfa c = build_stretch_length_counters(set, n);
    WeightedDfa w = unfold_counters(c);
    for (int j = 0; j < 20; ++j) {
      Word word = random_word(rng, static_cast<int>(rng() % (n + 1)), 3);
      std::vector<int> d(c.num_counters, 0);
      int q = c.dfa.start();
      for (int v : word) {
        c.update(q, v, d);
        q = c.dfa.next(q, v);
      }
      auto r = run_weighted(w, word);
      CHECK(r.accepted == c.dfa.is_accepting(q));
      CHECK(r.totals == std::vector<int64_t>(d.begin(), d.end()));
    }
  }
}

TEST_CASE("stretch count examples") {
  CHECK(run_weighted(build_stretch_count(SymbolSet(2, {1})), Word{1, 0, 1, 0, 1}).totals[0] == 3);
  CHECK(run_weighted(build_stretch_count(SymbolSet(3, {1, 2})), Word{1, 2, 2, 0}).totals[0] == 1);
  CHECK(run_weighted(build_stretch_count(SymbolSet(2, {1})), Word{0, 0}).totals[0] == 0);
  CHECK(build_stretch_count(SymbolSet(2, {1})).dfa.num_states() == 2);
  CHECK_THROWS_AS(build_stretch_count(SymbolSet(2, {})), InputError);
  CHECK_THROWS_AS(build_stretch_count(SymbolSet::all(2)), InputError);
}

TEST_CASE("stretch count fuzz") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    SymbolSet s(3, {static_cast<int>(rng() % 3)});
    if (rng() % 2) s.insert(static_cast<int>(rng() % 3));
    if (s.size() == 3) continue;
    Word w = random_word(rng, static_cast<int>(rng() % 9), 3);
    CHECK(run_weighted(build_stretch_count(s), w).totals[0] == testing::stretch_count(w, s));
  }
}

TEST_CASE("word occurrence examples") {
  const SymbolSet two(3, {2});
  const WordPattern ww{two, two};
  const Word w{1, 2, 2, 0, 0};
  CHECK(run_weighted(build_word_occurrence(ww, 1, 5), w).totals[0] == 1);
  CHECK(run_weighted(build_word_occurrence(ww, 0, 5), w).totals[0] == 0);
  CHECK(run_weighted(build_word_occurrence({SymbolSet(3, {0})}, 4, 5), w).totals[0] == 1);
  CHECK(run_weighted(build_word_occurrence(ww, 1, 5), w).accepted);
  CHECK_THROWS_AS(build_word_occurrence(ww, 4, 5), InputError);
  CHECK_THROWS_AS(build_word_occurrence(ww, -1, 5), InputError);
}

TEST_CASE("sliding word counter examples") {
  const SymbolSet two(3, {2});
  const WeightedDfa s = build_sliding_word_counter({two, two}, 3);
  CHECK(run_weighted(s, Word{2, 2, 2}).totals == std::vector<int64_t>{1, 1});
  CHECK(run_weighted(s, Word{0, 0, 0}).totals == std::vector<int64_t>{0, 0});
  CHECK(build_sliding_word_counter({two}, 4).dfa.num_states() == 1);
}

TEST_CASE("sliding counter equals the explicit product of occurrence automata") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    const int V = 2 + static_cast<int>(rng() % 2);
    const int n = 2 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % std::min(3, n));
    WordPattern pat;
    for (int j = 0; j < m; ++j) {
      SymbolSet s(V, {static_cast<int>(rng() % V)});
      if (rng() % 3 == 0) s.insert(static_cast<int>(rng() % V));
      pat.push_back(s);
    }
    const WeightedDfa slide = build_sliding_word_counter(pat, n);
    int bound = 1;
    for (int j = 0; j + 1 < m; ++j) bound *= V;
    CHECK(slide.dfa.num_states() <= bound + 1);
    WeightedDfa explicit_product = build_word_occurrence(pat, 0, n);
    for (int k = 1; k + m <= n; ++k) explicit_product = product(explicit_product, build_word_occurrence(pat, k, n));
    for (int j = 0; j < 10; ++j) {
      Word w = random_word(rng, n, V);
      auto a = run_weighted(slide, w), b = run_weighted(explicit_product, w);
      CHECK(a.totals == b.totals);
      for (int k = 0; k + m <= n; ++k) CHECK(a.totals[k] == (testing::occurs_at(w, pat, k) ? 1 : 0));
    }
  }
}

TEST_CASE("gcc weights count symbols") {
  const WeightedDfa g = build_gcc_weights(3);
  CHECK(g.dfa.num_states() == 1);
  CHECK(run_weighted(g, Word{1, 1, 0}).totals == std::vector<int64_t>{1, 2, 0});
  CHECK(run_weighted(g, Word{}).totals == std::vector<int64_t>{0, 0, 0});
  CHECK(run_weighted(g, Word{2, 2, 2, 2}).totals == std::vector<int64_t>{0, 0, 4});
}

TEST_CASE("stretch length rule and sequence automata") {
  const SymbolSet zero(2, {0});
  const Dfa rule = build_stretch_length_rule(zero, 2, 3);
  testing::for_each_word(6, 2, [&](const Word& w) {
    bool ok = true;
    int cur = 0;
    for (size_t i = 0; i <= w.size(); ++i) {
      if (i < w.size() && w[i] == 0) {
        ++cur;
      } else {
        if (cur > 0 && (cur < 2 || cur > 3)) ok = false;
        cur = 0;
      }
    }
    CHECK(rule.accepts(w) == ok);
  });
  const Dfa seq = build_sequence(zero, 1, 2, 2);
  testing::for_each_word(5, 2, [&](const Word& w) {
    bool ok = true;
    for (size_t i = 0; i + 1 < w.size(); ++i) ok &= (w[i] == 0 || w[i + 1] == 0);
    CHECK(seq.accepts(w) == ok);
  });
}

TEST_CASE("word list accepts exactly its words") {
  const Dfa d = build_word_list(2, {{1, 0, 1}, {0, 1, 1}});
  int accepted = 0;
  testing::for_each_word(3, 2, [&](const Word& w) { accepted += d.accepts(w); });
  CHECK(accepted == 2);
  CHECK(d.accepts(Word{1, 0, 1}));
  CHECK_FALSE(d.accepts(Word{1, 0}));
}

TEST_CASE("dump lists one transition per line") {
  const std::string text = dump(build_stretch_count(SymbolSet(2, {1})));
  CHECK(text ==
        "dfa states 2 symbols 2 start 0 resources 1 horizon 0\n"
        "accept 0 1\n"
        "bound 0 -inf inf\n"
        "0 0 0\n"
        "0 1 1 0:1\n"
        "1 0 0\n"
        "1 1 1\n");
}

TEST_CASE("parse_dump inverts dump") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    WeightedDfa w = random_weighted(rng, 3, static_cast<int>(rng() % 3));
    if (!w.resource_bounds.empty()) w.resource_bounds[0] = {-2, 7};
    CHECK(parse_dump(dump(w)) == w);
  }
  const WeightedDfa slide = build_sliding_word_counter({SymbolSet(2, {1}), SymbolSet(2, {1})}, 4);
  CHECK(parse_dump(dump(slide)) == slide);
}

TEST_CASE("parse_dump reports the failing line") {
  const std::string good = dump(build_stretch_count(SymbolSet(2, {1})));
  std::string bad = good;
  bad.replace(bad.find("0 1 1 0:1"), 9, "0 1 9 0:1");
  try {
    parse_dump(bad, 10);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 14") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_dump(good.substr(0, good.size() / 2)), InputError);
}
