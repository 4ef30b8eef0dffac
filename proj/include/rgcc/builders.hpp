#pragma once

#include <vector>

#include "rgcc/automata.hpp"

namespace rgcc {

/// Selects which resource of a builder's output carries the measured
/// quantity. Other resources get zero costs.
struct ResourceSlot {
  int index = 0;
  int count = 1;
};

/// Sequence of symbol sets w_1..w_m; a word matches when its i-th symbol is
/// in w_i.
using WordPattern = std::vector<SymbolSet>;

/// Accepts the words that never contain both `a` and `b`. Four states:
/// start, seen-a, seen-b, dead.
Dfa build_exclusive_pair(int num_symbols, int a, int b);

/// Two-state automaton counting maximal stretches of symbols from `set`.
/// The cost 1 is paid on entering a stretch.
WeightedDfa build_stretch_count(const SymbolSet& set, ResourceSlot slot = {});

/// Flags (cost 1) whether `pattern` occurs starting at position `start`.
/// Rejects words shorter than start + |pattern|; accepts all longer ones.
WeightedDfa build_word_occurrence(const WordPattern& pattern, int start, int word_length,
                                  ResourceSlot slot = {});

/// One automaton carrying all start positions at once: resource k is 1 iff
/// `pattern` occurs at position k, for k in [0, word_length - |pattern|].
/// Costs are positional. States track which pattern prefixes are live.
WeightedDfa build_sliding_word_counter(const WordPattern& pattern, int word_length);

/// One-state automaton; resource j counts the symbols that fall in sets[j].
WeightedDfa build_occurrence_counter(const std::vector<SymbolSet>& sets);

/// One-state automaton; resource v counts occurrences of symbol v.
WeightedDfa build_gcc_weights(int num_symbols);

/// Counters (current, done_min, min, max) tracking stretches of `set` over
/// words of length at most `word_length`. `min` is the shortest stretch
/// length seen so far including an open stretch, 0 if none; `max` likewise.
CounterDfa build_stretch_length_counters(const SymbolSet& set, int word_length);

/// Unfolded stretch length extractor with exactly two resources: 0 = shortest
/// stretch, 1 = longest stretch (both 0 when the word has no stretch).
WeightedDfa build_stretch_length_extractor(const SymbolSet& set, int word_length);

/// Accepts the words whose every maximal stretch of `set` has length in
/// [min_length, max_length].
Dfa build_stretch_length_rule(const SymbolSet& set, int min_length, int max_length);

/// Sequence(lo, hi, window, set): every window of `window` consecutive
/// symbols holds between lo and hi symbols of `set`. Shorter prefixes are
/// unconstrained.
Dfa build_sequence(const SymbolSet& set, int lo, int hi, int window);

/// Accepts exactly the given words (all of the same length).
Dfa build_word_list(int num_symbols, const std::vector<Word>& words);

}  // namespace rgcc
