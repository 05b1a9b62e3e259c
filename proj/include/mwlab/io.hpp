#pragma once

// Plain-text weight tables and field files.
//
//   # mwlab weight dimension=1 depth=2 n=2 format=real
//   0 1.0 0.0 0.0 2.0
//   ...
//
// One record per cell: the cell index followed by the row-major entries.
// format=complex stores each entry as a "re im" pair. Field files use the
// header "# mwlab field dimension=.. depth=.. n=.." and complex pairs.

#include "mwlab/fields.hpp"

#include <string>

namespace mwlab {

void write_weight_table(const std::string& path, const MatrixField& field, bool complex = false);
/// Reads a table as a raw matrix field (no definiteness check).
MatrixField read_matrix_table(const std::string& path);
MatrixWeight read_weight_table(const std::string& path);

void write_field(const std::string& path, const VectorField& f);
VectorField read_field(const std::string& path);

}  // namespace mwlab
