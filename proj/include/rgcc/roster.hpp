#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgcc/matrix_model.hpp"

namespace rgcc {

/// Nurse rostering instance: N nurses, D days, S shifts where shift S-1
/// (zero-based) is off duty. Cells hold shift indices 0..S-1, labelled 1..S.
struct RosterInstance {
  int nurses = 0;
  int days = 0;
  int shifts = 0;
  std::vector<std::vector<int>> coverage;  // [day][shift] lower bound on nurses
  std::vector<Interval> shift_occurrence;  // per shift, occurrences in a row
  Interval work_occurrence;                // working shifts in a row
  std::vector<Interval> shift_stretch;     // per shift, stretch lengths
  Interval work_stretch;                   // stretches of working shifts

  /// Coverage zero, every rule at its widest.
  static RosterInstance unconstrained(int nurses, int days, int shifts);
  void validate() const;
  SymbolSet working_shifts() const;
  friend bool operator==(const RosterInstance&, const RosterInstance&) = default;
};

/// N x D matrix instance. The row automaton is the product of the stretch
/// rules with an occurrence counter whose bounds are the occurrence rules;
/// each column requires at least the coverage of every shift.
MatrixInstance roster_to_matrix(const RosterInstance& inst);

/// Model options for a roster: stretch hints from the stretch rules, the
/// working-shift set as an extra stretch property, lex symmetry breaking.
ModelOptions roster_options(const RosterInstance& inst, Mode mode, bool aggregate_words = false,
                            bool symmetry_breaking = true);

/// Some day demands more nurses than exist.
bool coverage_exceeds_staff(const RosterInstance& inst);

struct RosterParams {
  int nurses = 5;
  int days = 7;
  int shifts = 3;
  uint64_t seed = 0;
};

/// Random roster with moderately tight coverage and case rules.
RosterInstance gen_roster(const RosterParams& p);

/// Best-effort reader for NSP-style files. Instance text: a header "N D S",
/// then D lines of S coverage numbers; anything after is ignored. Case text:
/// S lines "occ_lo occ_hi stretch_lo stretch_hi", one per shift, then one
/// such line for the working shifts. Warnings about ignored data are
/// appended to `warnings` when given.
RosterInstance parse_nsp(const std::string& instance_text, const std::string& case_text,
                         std::vector<std::string>* warnings = nullptr);

}  // namespace rgcc
