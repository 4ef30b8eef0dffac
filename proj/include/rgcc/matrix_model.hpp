#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rgcc/automata.hpp"
#include "rgcc/builders.hpp"
#include "rgcc/engine.hpp"

namespace rgcc {

/// Per-column requirements: an occurrence interval for every symbol and an
/// optional bound on the sum of the cell labels.
struct ColumnSpec {
  std::vector<Interval> cards;
  std::optional<Interval> label_sum;
  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

using Matrix = std::vector<std::vector<int>>;

/// R x K matrix over symbols 0..V-1. Every row is constrained by the same
/// weighted automaton; every column by its ColumnSpec.
struct MatrixInstance {
  int rows = 0;
  int cols = 0;
  int num_values = 0;
  std::vector<int64_t> labels;                  // integer label of each symbol
  std::vector<std::vector<SymbolSet>> domains;  // rows x cols
  WeightedDfa row;
  std::vector<ColumnSpec> columns;

  /// All cells free, all columns unconstrained, labels 0..V-1.
  static MatrixInstance unconstrained(int rows, int cols, int num_values, WeightedDfa row);
  void validate() const;
  /// Independent full check of a complete matrix.
  bool satisfied_by(const Matrix& m) const;
  friend bool operator==(const MatrixInstance&, const MatrixInstance&) = default;
};

enum class Mode { kDecomp, kWa, kCwa };
std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

/// String properties extracted from every row in WA and CWA modes.
struct PropertySet {
  bool occurrences = true;               // per-symbol occurrence counts
  std::vector<SymbolSet> occurrence_sets;  // further sets whose occurrences are counted
  std::vector<SymbolSet> stretch_sets;   // stretch counts and lengths
  std::vector<WordPattern> words;        // positional word occurrences
  /// Every singleton {v}: occurrences, stretches of {v}, words {v} and {v}{v}.
  static PropertySet defaults(int num_values);
};

/// Static stretch length range of `set` known to hold in every row.
struct StretchHint {
  SymbolSet set;
  Interval length;
};

/// Static occurrence range of `set` known to hold in every row.
struct OccurrenceHint {
  SymbolSet set;
  Interval count;
};

struct ModelOptions {
  Mode mode = Mode::kDecomp;
  /// Replace the per-position word conditions by their row-and-position
  /// aggregated form.
  bool aggregate_words = false;
  std::optional<PropertySet> properties;  // defaults(V) when empty
  bool symmetry_breaking = false;
  std::vector<StretchHint> stretch_hints;
  std::vector<OccurrenceHint> occurrence_hints;
};

struct StretchVars {
  SymbolSet set;
  std::vector<VarId> count;               // per row
  std::vector<VarId> row_min, row_max;    // per row, 0 when the row has none
  VarId global_min = -1, global_max = -1;
};

struct WordVars {
  WordPattern pattern;
  std::vector<std::vector<VarId>> occurs;  // [row][start]
};

struct MatrixModel {
  MatrixInstance instance;
  ModelOptions options;
  std::unique_ptr<Store> store;
  std::vector<std::vector<VarId>> cells;          // [row][col]
  std::vector<std::vector<VarId>> cards;          // [value][col]
  std::vector<std::vector<VarId>> row_resources;  // [row][resource]
  /// [row][i]: symbol i for i < V when per-symbol counts are on, then the
  /// occurrence_sets in order.
  std::vector<std::vector<VarId>> occurrences;
  std::vector<StretchVars> stretches;
  std::vector<WordVars> words;
  SearchConfig search;

  Matrix read_matrix() const;
};

/// Posts the model into a fresh store without propagating.
MatrixModel build_model(const MatrixInstance& inst, const ModelOptions& opts);

/// Surviving values per cell; every set is empty when the store failed.
using CellSets = std::vector<std::vector<SymbolSet>>;

/// Propagates the model at the root and returns the cell domains.
CellSets root_cell_domains(MatrixModel& m);

// ---------------------------------------------------------------- conditions

/// Bounds on the number of rows in which the word occurs at some fixed
/// start, from the counts of its letters in the covered columns.
struct WordBounds {
  Interval lower;
  Interval upper;
};
WordBounds compute_word_bounds(std::span<const Interval> letter_counts, int rows);

/// Bounds on the number of stretches starting (plus) or ending (minus) at a
/// column, from the counts in the previous, current and next column.
struct StretchBounds {
  Interval ls_plus, us_plus, ls_minus, us_minus;
};
StretchBounds compute_stretch_bounds(Interval prev, Interval cur, Interval next, int rows);

/// letter_cards[j][k] counts the symbols of pattern[j] in column k;
/// occurs[r][k] flags the word at start k in row r.
void post_word_conditions(Store& store, const std::vector<std::vector<VarId>>& letter_cards,
                          const std::vector<std::vector<VarId>>& occurs, int rows,
                          bool aggregate);

/// set_cards[k] counts the set in column k; counts[r] is the stretch count
/// of row r.
void post_stretch_count_conditions(Store& store, const std::vector<VarId>& set_cards,
                                   const std::vector<VarId>& counts, int rows);

/// Lengths of all stretches lie in [global_min, global_max] (global_min > 0
/// once a stretch exists).
void post_stretch_length_conditions(Store& store, const std::vector<VarId>& set_cards,
                                    VarId global_min, VarId global_max, int rows);

/// global_max = max of row maxima; global_min = smallest positive row
/// minimum, 0 when no row has a stretch.
void post_stretch_length_link(Store& store, const std::vector<VarId>& row_min,
                              const std::vector<VarId>& row_max, VarId global_min,
                              VarId global_max);

}  // namespace rgcc
