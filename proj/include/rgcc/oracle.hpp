#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "rgcc/matrix_model.hpp"

namespace rgcc {

/// Raised when an oracle query exceeds its effort cap or size guard.
class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  /// Maximum number of enumeration steps (row-word extensions plus matrix
  /// search nodes) before refusing.
  int64_t cap = 10'000'000;
};

/// Every word of length `cols` accepted by the row automaton (bounds
/// included) that fits the domains of row `r`.
std::vector<Word> row_words(const MatrixInstance& inst, int r, const OracleOptions& opts = {});

std::vector<Matrix> brute_solve(const MatrixInstance& inst, const OracleOptions& opts = {});
std::optional<Matrix> brute_find(const MatrixInstance& inst, const OracleOptions& opts = {});
int64_t brute_count(const MatrixInstance& inst, const OracleOptions& opts = {});
/// Values that occur in at least one solution, per cell.
CellSets brute_dc(const MatrixInstance& inst, const OracleOptions& opts = {});

/// OpenMP versions splitting the search on the first row's words. Results
/// equal the serial ones.
int64_t brute_count_parallel(const MatrixInstance& inst, const OracleOptions& opts = {});
CellSets brute_dc_parallel(const MatrixInstance& inst, const OracleOptions& opts = {});

/// Matrix whose rows must be accepted by `row` and columns by `col`.
struct Regular2Instance {
  int rows = 0;
  int cols = 0;
  int num_values = 0;
  Dfa row;
  Dfa col;
  std::vector<std::vector<SymbolSet>> domains;
};

CellSets brute_dc(const Regular2Instance& inst, const OracleOptions& opts = {});

/// Single automaton over the row-major flattening of a rows x cols matrix.
/// States are (column index, row state, one state per column) plus a dead
/// state. Refuses when more than `max_states` states are reachable.
Dfa encode_matrix_dfa(const Dfa& row, const Dfa& col, int rows, int cols, int max_states = 1'000'000);

/// Domain-consistent filtering of the encoded automaton over the flattened
/// matrix, reshaped to cells.
CellSets encoded_dc(const Regular2Instance& inst);

}  // namespace rgcc
