#pragma once

#include <string>
#include <variant>

#include "rgcc/matrix_model.hpp"
#include "rgcc/roster.hpp"

namespace rgcc {

/// Contents of a canonical instance file. See docs/format.md.
using Document = std::variant<MatrixInstance, RosterInstance>;

std::string emit_canonical(const MatrixInstance& inst);
std::string emit_canonical(const RosterInstance& inst);
std::string emit_canonical(const Document& doc);

/// Errors are InputError with the message prefixed by "line N: ".
Document parse_canonical(const std::string& text);

/// Reads the file and parses it; a roster is converted to its matrix.
MatrixInstance load_matrix(const std::string& path);
Document load_document(const std::string& path);

}  // namespace rgcc
