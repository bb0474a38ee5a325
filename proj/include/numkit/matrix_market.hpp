#pragma once

#include <iosfwd>
#include <string>

#include "numkit/sparse.hpp"

namespace numkit::sparse {

/// Matrix Market exchange format, coordinate real general flavor:
/// `%%MatrixMarket matrix coordinate real general` header, `%` comments,
/// a `rows cols nnz` size line, then 1-based `i j value` entries.
/// Values are written with 17 significant digits so a round trip reproduces
/// every double exactly.
CooMatrix read_matrix_market(std::istream& in);
CooMatrix read_matrix_market_file(const std::string& path);
void write_matrix_market(std::ostream& out, const CooMatrix& m);
void write_matrix_market_file(const std::string& path, const CooMatrix& m);

}  // namespace numkit::sparse
