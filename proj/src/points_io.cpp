#include "numkit/points_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "numkit/errors.hpp"

namespace numkit::spatial {

namespace {

constexpr char kMagic[8] = {'N', 'K', 'P', 'T', '0', '0', '0', '1'};

static_assert(sizeof(double) == 8, "binary point format assumes 8-byte doubles");

}  // namespace

PointSet read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_points_csv: cannot open " + path);
    PointSet out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t cols = 0;
        while (std::getline(row, cell, ',')) {
            try {
                out.data.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw StructureError("read_points_csv: malformed value '" + cell + "'");
            }
            ++cols;
        }
        if (out.m == 0)
            out.m = cols;
        else if (cols != out.m)
            throw StructureError("read_points_csv: ragged row");
        ++out.n;
    }
    return out;
}

PointSet read_points_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_points_binary: cannot open " + path);
    char magic[8];
    std::uint32_t n = 0, m = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&m), 4);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw StructureError("read_points_binary: bad header");
    PointSet out;
    out.n = n;
    out.m = m;
    out.data.resize(static_cast<std::size_t>(n) * m);
    in.read(reinterpret_cast<char*>(out.data.data()),
            static_cast<std::streamsize>(out.data.size() * sizeof(double)));
    if (!in) throw StructureError("read_points_binary: truncated payload");
    return out;
}

void write_points_binary(const std::string& path, const PointSet& points) {
    if (points.data.size() != points.n * points.m)
        throw DimensionError("write_points_binary: data length != n*m");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_points_binary: cannot open " + path);
    const std::uint32_t n = static_cast<std::uint32_t>(points.n);
    const std::uint32_t m = static_cast<std::uint32_t>(points.m);
    out.write(kMagic, 8);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&m), 4);
    out.write(reinterpret_cast<const char*>(points.data.data()),
              static_cast<std::streamsize>(points.data.size() * sizeof(double)));
}

}  // namespace numkit::spatial
