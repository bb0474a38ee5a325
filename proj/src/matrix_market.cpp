#include "numkit/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "numkit/errors.hpp"

namespace numkit::sparse {

CooMatrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw StructureError("matrix market: empty stream");
    {
        std::istringstream hdr(line);
        std::string banner, object, fmt, field, symmetry;
        hdr >> banner >> object >> fmt >> field >> symmetry;
        if (banner != "%%MatrixMarket" || object != "matrix" || fmt != "coordinate" ||
            field != "real" || symmetry != "general")
            throw StructureError("matrix market: unsupported header: " + line);
    }
    // Skip comments and blank lines up to the size line.
    while (std::getline(in, line)) {
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '%') continue;
        break;
    }
    std::istringstream size_line(line);
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(size_line >> rows >> cols >> nnz))
        throw StructureError("matrix market: malformed size line");

    std::vector<std::size_t> ri, ci;
    Vector values;
    ri.reserve(nnz);
    ci.reserve(nnz);
    values.reserve(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) throw StructureError("matrix market: truncated entry list");
        if (i < 1 || j < 1) throw StructureError("matrix market: indices are 1-based");
        ri.push_back(static_cast<std::size_t>(i - 1));
        ci.push_back(static_cast<std::size_t>(j - 1));
        values.push_back(v);
    }
    return CooMatrix({rows, cols}, std::move(ri), std::move(ci), std::move(values));
}

CooMatrix read_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("matrix market: cannot open " + path);
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CooMatrix& m) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.shape().rows << " " << m.shape().cols << " " << m.nnz() << "\n";
    char buf[64];
    for (std::size_t k = 0; k < m.nnz(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", m.row_indices()[k] + 1,
                      m.col_indices()[k] + 1, m.values()[k]);
        out << buf;
    }
}

void write_matrix_market_file(const std::string& path, const CooMatrix& m) {
    std::ofstream out(path);
    if (!out) throw Error("matrix market: cannot open " + path + " for writing");
    write_matrix_market(out, m);
}

}  // namespace numkit::sparse
