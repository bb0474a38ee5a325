#pragma once

#include <string>

#include "numkit/dense.hpp"

namespace numkit::spatial {

/// Row-major point set: n points in m dimensions.
struct PointSet {
    Vector data;
    std::size_t n = 0, m = 0;
};

/// CSV: one point per row, comma-separated coordinates. Rows must agree on
/// the number of columns; blank lines are skipped.
PointSet read_points_csv(const std::string& path);

/// Raw binary format for benchmark inputs: a 16-byte header (8-byte magic
/// "NKPT0001", uint32 n, uint32 m, both little-endian) followed by n*m
/// float64 coordinates, little-endian, row-major.
PointSet read_points_binary(const std::string& path);
void write_points_binary(const std::string& path, const PointSet& points);

}  // namespace numkit::spatial
