#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rgcc/matrix_model.hpp"
#include "rgcc/oracle.hpp"

namespace rgcc {

/// CNF over variables 1..num_vars; literal +i / -i.
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

/// Rows are variables, columns clauses, values {-1, 0, 1} (symbols 0, 1, 2).
/// A row may not mix 1 and -1; each column has at most R-1 zeros.
MatrixInstance gen_3sat(const Cnf& formula);

/// Family of subsets of {1..universe}.
struct SetFamily {
  int universe = 0;
  std::vector<std::vector<int>> sets;
};

/// Rows are sets, columns elements, values {-1, 0, 1}. Every 0-stretch spans
/// the whole row; each column holds exactly one 1.
MatrixInstance gen_exact_cover(const SetFamily& family);

/// Triples (w, z, y) over coordinates 0..q-1.
struct Matching3d {
  int q = 0;
  std::vector<std::array<int, 3>> triples;
};

/// m x 5 matrix over {0, t, w_1..w_q, z_1..z_q, y_1..y_q} with rows
/// Sequence(1, 2, 2, {0}).
MatrixInstance gen_3dm_dc(const Matching3d& m);

/// Clone-alphabet variant whose cell domains are intervals of the symbol
/// order. Symbols are numbered in that order.
MatrixInstance gen_3dm_bc(const Matching3d& m);

/// Symbol intervals [first, last] of every cell of a gen_3dm_bc instance.
std::vector<std::vector<std::array<int, 2>>> interval_domains(const MatrixInstance& inst);

struct Hypergraph {
  int vertices = 0;
  std::vector<std::vector<int>> edges;  // vertex ids 0..vertices-1
};

enum class HittingVariant { kGcc, kSum };

/// k x (|V| + |E|) matrix whose rows choose distinct vertices and whose last
/// |E| columns require a chosen vertex in every edge.
MatrixInstance gen_hitting_set(const Hypergraph& h, int k, HittingVariant variant);

struct RandomParams {
  int rows = 3;
  int cols = 3;
  int values = 2;
  int states = 3;
  double tightness = 0.5;  // 0: free columns; 1: tight card intervals
  double holes = 0.0;      // probability of removing a value from a cell
  int resources = 0;       // random 0/1 row costs with random bounds
  uint64_t seed = 0;
};

/// Random connected complete Dfa; deterministic in `seed`.
Dfa random_dfa(int states, int symbols, uint64_t seed);

MatrixInstance gen_random(const RandomParams& p);

Regular2Instance gen_random_regular2(int rows, int cols, int values, int row_states, int col_states,
                                     double holes, uint64_t seed);

}  // namespace rgcc
