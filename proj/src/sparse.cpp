#include "numkit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "numkit/errors.hpp"

namespace numkit::sparse {

namespace {

void check_index(std::size_t idx, std::size_t dim, const char* what) {
    if (idx >= dim) throw StructureError(std::string(what) + " index out of range");
}

/// Sort triplets by (major, minor) and sum duplicates; returns compressed
/// indptr/indices/values for the given major dimension.
void compress(std::size_t major_dim, std::span<const std::size_t> major,
              std::span<const std::size_t> minor, std::span<const double> values,
              std::vector<std::size_t>& indptr, std::vector<std::size_t>& indices, Vector& out) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (major[a] != major[b]) return major[a] < major[b];
        return minor[a] < minor[b];
    });

    indptr.assign(major_dim + 1, 0);
    indices.clear();
    out.clear();
    std::size_t last_major = major_dim;  // sentinel
    for (std::size_t t = 0; t < order.size(); ++t) {
        const std::size_t e = order[t];
        if (t > 0 && major[e] == last_major && !indices.empty() && indices.back() == minor[e]) {
            out.back() += values[e];
            continue;
        }
        indices.push_back(minor[e]);
        out.push_back(values[e]);
        indptr[major[e] + 1]++;
        last_major = major[e];
    }
    for (std::size_t i = 0; i < major_dim; ++i) indptr[i + 1] += indptr[i];
}

void validate_compressed(std::size_t major_dim, std::size_t minor_dim,
                         const std::vector<std::size_t>& indptr,
                         const std::vector<std::size_t>& indices, const Vector& values,
                         const char* name) {
    if (indptr.size() != major_dim + 1)
        throw StructureError(std::string(name) + ": indptr length must be major_dim + 1");
    if (indptr.front() != 0) throw StructureError(std::string(name) + ": indptr[0] must be 0");
    if (indices.size() != values.size())
        throw StructureError(std::string(name) + ": indices/values length mismatch");
    if (indptr.back() != values.size())
        throw StructureError(std::string(name) + ": indptr[last] must equal nnz");
    for (std::size_t i = 0; i < major_dim; ++i) {
        if (indptr[i] > indptr[i + 1])
            throw StructureError(std::string(name) + ": indptr must be nondecreasing");
        for (std::size_t k = indptr[i]; k < indptr[i + 1]; ++k) {
            check_index(indices[k], minor_dim, name);
            if (k > indptr[i] && indices[k] <= indices[k - 1])
                throw StructureError(std::string(name) +
                                     ": minor indices must be strictly increasing per slice");
        }
    }
}

}  // namespace

CooMatrix::CooMatrix(Shape shape, std::vector<std::size_t> rows, std::vector<std::size_t> cols,
                     Vector values)
    : shape_(shape), rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)) {
    if (rows_.size() != cols_.size() || rows_.size() != values_.size())
        throw StructureError("CooMatrix: index/value arrays must have equal length");
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        check_index(rows_[k], shape_.rows, "CooMatrix row");
        check_index(cols_[k], shape_.cols, "CooMatrix col");
    }
}

DenseMatrix CooMatrix::to_dense() const {
    DenseMatrix d(shape_.rows, shape_.cols);
    for (std::size_t k = 0; k < values_.size(); ++k) d(rows_[k], cols_[k]) += values_[k];
    return d;
}

CsrMatrix::CsrMatrix(Shape shape, std::vector<std::size_t> indptr,
                     std::vector<std::size_t> indices, Vector values)
    : shape_(shape), indptr_(std::move(indptr)), indices_(std::move(indices)),
      values_(std::move(values)) {
    validate_compressed(shape_.rows, shape_.cols, indptr_, indices_, values_, "CsrMatrix");
}

CsrMatrix CsrMatrix::zero(Shape shape) {
    return CsrMatrix(shape, std::vector<std::size_t>(shape.rows + 1, 0), {}, {});
}

DenseMatrix CsrMatrix::to_dense() const {
    DenseMatrix d(shape_.rows, shape_.cols);
    for (std::size_t i = 0; i < shape_.rows; ++i)
        for (std::size_t k = indptr_[i]; k < indptr_[i + 1]; ++k) d(i, indices_[k]) += values_[k];
    return d;
}

CscMatrix::CscMatrix(Shape shape, std::vector<std::size_t> indptr,
                     std::vector<std::size_t> indices, Vector values)
    : shape_(shape), indptr_(std::move(indptr)), indices_(std::move(indices)),
      values_(std::move(values)) {
    validate_compressed(shape_.cols, shape_.rows, indptr_, indices_, values_, "CscMatrix");
}

DenseMatrix CscMatrix::to_dense() const {
    DenseMatrix d(shape_.rows, shape_.cols);
    for (std::size_t j = 0; j < shape_.cols; ++j)
        for (std::size_t k = indptr_[j]; k < indptr_[j + 1]; ++k) d(indices_[k], j) += values_[k];
    return d;
}

std::uint64_t DokMatrix::key(std::size_t row, std::size_t col) const {
    return static_cast<std::uint64_t>(row) << 32 | static_cast<std::uint64_t>(col);
}

std::pair<std::size_t, std::size_t> DokMatrix::split_key(std::uint64_t key) {
    return {static_cast<std::size_t>(key >> 32), static_cast<std::size_t>(key & 0xffffffffULL)};
}

void DokMatrix::set(std::size_t row, std::size_t col, double value) {
    check_index(row, shape_.rows, "DokMatrix row");
    check_index(col, shape_.cols, "DokMatrix col");
    if (shape_.rows >= (1ULL << 32) || shape_.cols >= (1ULL << 32))
        throw StructureError("DokMatrix: dimensions exceed packed-key range");
    map_[key(row, col)] = value;
}

bool DokMatrix::contains(std::size_t row, std::size_t col) const {
    return map_.count(key(row, col)) > 0;
}

double DokMatrix::get(std::size_t row, std::size_t col) const {
    auto it = map_.find(key(row, col));
    return it == map_.end() ? 0.0 : it->second;
}

void DokMatrix::erase(std::size_t row, std::size_t col) { map_.erase(key(row, col)); }

DenseMatrix DokMatrix::to_dense() const {
    DenseMatrix d(shape_.rows, shape_.cols);
    for (const auto& [k, v] : map_) {
        auto [i, j] = split_key(k);
        d(i, j) = v;
    }
    return d;
}

DiaMatrix::DiaMatrix(Shape shape, std::vector<std::ptrdiff_t> offsets, DenseMatrix data)
    : shape_(shape), offsets_(std::move(offsets)), data_(std::move(data)) {
    std::unordered_set<std::ptrdiff_t> seen;
    for (auto d : offsets_)
        if (!seen.insert(d).second) throw StructureError("DiaMatrix: offsets must be unique");
    if (data_.rows() != offsets_.size() || (offsets_.size() > 0 && data_.cols() != shape_.cols))
        throw StructureError("DiaMatrix: data must be offsets x cols");
}

DenseMatrix DiaMatrix::to_dense() const {
    DenseMatrix d(shape_.rows, shape_.cols);
    for (std::size_t t = 0; t < offsets_.size(); ++t) {
        const std::ptrdiff_t off = offsets_[t];
        for (std::size_t k = 0; k < shape_.cols; ++k) {
            const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) - off;
            if (i >= 0 && i < static_cast<std::ptrdiff_t>(shape_.rows))
                d(static_cast<std::size_t>(i), k) += data_(t, k);
        }
    }
    return d;
}

Format SparseMatrix::format() const {
    return std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CooMatrix>) return Format::coo;
            else if constexpr (std::is_same_v<T, CsrMatrix>) return Format::csr;
            else if constexpr (std::is_same_v<T, CscMatrix>) return Format::csc;
            else if constexpr (std::is_same_v<T, DokMatrix>) return Format::dok;
            else return Format::dia;
        },
        m_);
}

Shape SparseMatrix::shape() const {
    return std::visit([](const auto& m) { return m.shape(); }, m_);
}

DenseMatrix SparseMatrix::to_dense() const {
    return std::visit([](const auto& m) { return m.to_dense(); }, m_);
}

CsrMatrix coo_to_csr(const CooMatrix& m) {
    std::vector<std::size_t> indptr, indices;
    Vector values;
    compress(m.shape().rows, m.row_indices(), m.col_indices(), m.values(), indptr, indices,
             values);
    return CsrMatrix(m.shape(), std::move(indptr), std::move(indices), std::move(values));
}

CscMatrix coo_to_csc(const CooMatrix& m) {
    std::vector<std::size_t> indptr, indices;
    Vector values;
    compress(m.shape().cols, m.col_indices(), m.row_indices(), m.values(), indptr, indices,
             values);
    return CscMatrix(m.shape(), std::move(indptr), std::move(indices), std::move(values));
}

CooMatrix csr_to_coo(const CsrMatrix& m) {
    std::vector<std::size_t> rows, cols;
    rows.reserve(m.nnz());
    cols.reserve(m.nnz());
    for (std::size_t i = 0; i < m.shape().rows; ++i)
        for (std::size_t k = m.indptr()[i]; k < m.indptr()[i + 1]; ++k) {
            rows.push_back(i);
            cols.push_back(m.indices()[k]);
        }
    return CooMatrix(m.shape(), std::move(rows), std::move(cols), m.values());
}

CooMatrix csc_to_coo(const CscMatrix& m) {
    std::vector<std::size_t> rows, cols;
    rows.reserve(m.nnz());
    cols.reserve(m.nnz());
    for (std::size_t j = 0; j < m.shape().cols; ++j)
        for (std::size_t k = m.indptr()[j]; k < m.indptr()[j + 1]; ++k) {
            rows.push_back(m.indices()[k]);
            cols.push_back(j);
        }
    return CooMatrix(m.shape(), std::move(rows), std::move(cols), m.values());
}

CooMatrix dok_to_coo(const DokMatrix& m) {
    std::vector<std::uint64_t> keys;
    keys.reserve(m.nnz());
    for (const auto& [k, v] : m.entries()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    std::vector<std::size_t> rows, cols;
    Vector values;
    for (auto k : keys) {
        auto [i, j] = DokMatrix::split_key(k);
        rows.push_back(i);
        cols.push_back(j);
        values.push_back(m.entries().at(k));
    }
    return CooMatrix(m.shape(), std::move(rows), std::move(cols), std::move(values));
}

CooMatrix dia_to_coo(const DiaMatrix& m) {
    std::vector<std::size_t> rows, cols;
    Vector values;
    for (std::size_t t = 0; t < m.offsets().size(); ++t) {
        const std::ptrdiff_t off = m.offsets()[t];
        for (std::size_t k = 0; k < m.shape().cols; ++k) {
            const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) - off;
            if (i >= 0 && i < static_cast<std::ptrdiff_t>(m.shape().rows)) {
                rows.push_back(static_cast<std::size_t>(i));
                cols.push_back(k);
                values.push_back(m.data()(t, k));
            }
        }
    }
    return CooMatrix(m.shape(), std::move(rows), std::move(cols), std::move(values));
}

DokMatrix coo_to_dok(const CooMatrix& m) {
    DokMatrix d(m.shape());
    // Duplicates are summed, matching compressed-format semantics.
    for (std::size_t k = 0; k < m.nnz(); ++k) {
        const std::size_t i = m.row_indices()[k], j = m.col_indices()[k];
        d.set(i, j, d.get(i, j) + m.values()[k]);
    }
    return d;
}

DiaMatrix coo_to_dia(const CooMatrix& m) {
    std::vector<std::ptrdiff_t> offsets;
    for (std::size_t k = 0; k < m.nnz(); ++k) {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(m.col_indices()[k]) -
                                   static_cast<std::ptrdiff_t>(m.row_indices()[k]);
        if (std::find(offsets.begin(), offsets.end(), off) == offsets.end())
            offsets.push_back(off);
    }
    std::sort(offsets.begin(), offsets.end());
    DenseMatrix data(offsets.size(), m.shape().cols);
    for (std::size_t k = 0; k < m.nnz(); ++k) {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(m.col_indices()[k]) -
                                   static_cast<std::ptrdiff_t>(m.row_indices()[k]);
        const std::size_t t =
            std::lower_bound(offsets.begin(), offsets.end(), off) - offsets.begin();
        data(t, m.col_indices()[k]) += m.values()[k];
    }
    return DiaMatrix(m.shape(), std::move(offsets), std::move(data));
}

SparseMatrix convert(const SparseMatrix& m, Format target) {
    if (m.format() == target) return m;
    CooMatrix coo = [&] {
        switch (m.format()) {
            case Format::coo: return m.as<CooMatrix>();
            case Format::csr: return csr_to_coo(m.as<CsrMatrix>());
            case Format::csc: return csc_to_coo(m.as<CscMatrix>());
            case Format::dok: return dok_to_coo(m.as<DokMatrix>());
            case Format::dia: return dia_to_coo(m.as<DiaMatrix>());
        }
        throw ValueError("convert: unknown source format");
    }();
    switch (target) {
        case Format::coo: return SparseMatrix(std::move(coo));
        case Format::csr: return SparseMatrix(coo_to_csr(coo));
        case Format::csc: return SparseMatrix(coo_to_csc(coo));
        case Format::dok: return SparseMatrix(coo_to_dok(coo));
        case Format::dia: return SparseMatrix(coo_to_dia(coo));
    }
    throw ValueError("convert: unknown target format");
}

bool structurally_equal(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.shape() != b.shape()) return false;
    const DenseMatrix da = a.to_dense(), db = b.to_dense();
    return da.data() == db.data();
}

Vector spmv(const CsrMatrix& m, std::span<const double> x) {
    if (x.size() != m.shape().cols) throw DimensionError("spmv: vector length mismatch");
    Vector y(m.shape().rows, 0.0);
    const auto& indptr = m.indptr();
    const auto& indices = m.indices();
    const auto& values = m.values();
    for (std::size_t i = 0; i < m.shape().rows; ++i) {
        double s = 0.0;
        for (std::size_t k = indptr[i]; k < indptr[i + 1]; ++k) s += values[k] * x[indices[k]];
        y[i] = s;
    }
    return y;
}

CsrMatrix spmm(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.shape().cols != b.shape().rows) throw DimensionError("spmm: inner dimensions differ");
    const Shape out_shape{a.shape().rows, b.shape().cols};
    std::vector<std::size_t> indptr(out_shape.rows + 1, 0), indices;
    Vector values;

    // Gustavson's row-by-row accumulation with a dense scratch row.
    Vector accum(out_shape.cols, 0.0);
    std::vector<bool> present(out_shape.cols, false);
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < a.shape().rows; ++i) {
        touched.clear();
        for (std::size_t ka = a.indptr()[i]; ka < a.indptr()[i + 1]; ++ka) {
            const std::size_t j = a.indices()[ka];
            const double av = a.values()[ka];
            for (std::size_t kb = b.indptr()[j]; kb < b.indptr()[j + 1]; ++kb) {
                const std::size_t c = b.indices()[kb];
                if (!present[c]) {
                    present[c] = true;
                    touched.push_back(c);
                }
                accum[c] += av * b.values()[kb];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::size_t c : touched) {
            indices.push_back(c);
            values.push_back(accum[c]);  // cancelled zeros stay stored
            accum[c] = 0.0;
            present[c] = false;
        }
        indptr[i + 1] = indices.size();
    }
    return CsrMatrix(out_shape, std::move(indptr), std::move(indices), std::move(values));
}

CsrMatrix eliminate_zeros(const CsrMatrix& m) {
    std::vector<std::size_t> indptr(m.shape().rows + 1, 0), indices;
    Vector values;
    for (std::size_t i = 0; i < m.shape().rows; ++i) {
        for (std::size_t k = m.indptr()[i]; k < m.indptr()[i + 1]; ++k) {
            if (m.values()[k] != 0.0) {
                indices.push_back(m.indices()[k]);
                values.push_back(m.values()[k]);
            }
        }
        indptr[i + 1] = indices.size();
    }
    return CsrMatrix(m.shape(), std::move(indptr), std::move(indices), std::move(values));
}

double norm(const SparseMatrix& m, NormKind kind) {
    // Canonical CSR makes row/column sums and the value list well defined.
    const CsrMatrix csr = m.format() == Format::csr ? m.as<CsrMatrix>()
                                                    : convert(m, Format::csr).as<CsrMatrix>();
    switch (kind) {
        case NormKind::fro: {
            double s = 0.0;
            for (double v : csr.values()) s += v * v;
            return std::sqrt(s);
        }
        case NormKind::inf: {
            double best = 0.0;
            for (std::size_t i = 0; i < csr.shape().rows; ++i) {
                double s = 0.0;
                for (std::size_t k = csr.indptr()[i]; k < csr.indptr()[i + 1]; ++k)
                    s += std::abs(csr.values()[k]);
                best = std::max(best, s);
            }
            return best;
        }
        case NormKind::one: {
            Vector colsum(csr.shape().cols, 0.0);
            for (std::size_t k = 0; k < csr.nnz(); ++k)
                colsum[csr.indices()[k]] += std::abs(csr.values()[k]);
            double best = 0.0;
            for (double s : colsum) best = std::max(best, s);
            return best;
        }
    }
    throw ValueError("norm: unknown kind");
}

CooMatrix random(Shape shape, double density, Rng& rng,
                 const std::function<double(Rng&)>& sampler) {
    if (density < 0.0 || density > 1.0) throw ValueError("random: density must be in [0, 1]");
    const std::uint64_t total = static_cast<std::uint64_t>(shape.rows) * shape.cols;
    const std::uint64_t k =
        static_cast<std::uint64_t>(std::llround(density * static_cast<double>(total)));

    // Floyd's algorithm draws exactly k distinct cells uniformly.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(k * 2 + 1);
    for (std::uint64_t v = total - k; v < total; ++v) {
        const std::uint64_t r = rng.next_below(v + 1);
        if (!chosen.insert(r).second) chosen.insert(v);
    }
    std::vector<std::uint64_t> cells(chosen.begin(), chosen.end());
    std::sort(cells.begin(), cells.end());

    std::vector<std::size_t> rows, cols;
    Vector values;
    rows.reserve(k);
    cols.reserve(k);
    values.reserve(k);
    for (auto cell : cells) {
        rows.push_back(static_cast<std::size_t>(cell / shape.cols));
        cols.push_back(static_cast<std::size_t>(cell % shape.cols));
        values.push_back(sampler ? sampler(rng) : rng.next_double());
    }
    return CooMatrix(shape, std::move(rows), std::move(cols), std::move(values));
}

}  // namespace numkit::sparse
