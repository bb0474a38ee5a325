#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "numkit/dense.hpp"
#include "numkit/rng.hpp"

namespace numkit::sparse {

enum class Format { coo, csr, csc, dok, dia };

struct Shape {
    std::size_t rows = 0, cols = 0;
    bool operator==(const Shape&) const = default;
};

enum class NormKind { fro, one, inf };

/// Coordinate format: parallel (row, col, value) triplets. Duplicates are
/// permitted and are summed when converting to a compressed format.
class CooMatrix {
public:
    CooMatrix(Shape shape, std::vector<std::size_t> rows, std::vector<std::size_t> cols,
              Vector values);
    static CooMatrix empty(Shape shape) { return CooMatrix(shape, {}, {}, {}); }

    Shape shape() const { return shape_; }
    std::size_t nnz() const { return values_.size(); }
    const std::vector<std::size_t>& row_indices() const { return rows_; }
    const std::vector<std::size_t>& col_indices() const { return cols_; }
    const Vector& values() const { return values_; }

    DenseMatrix to_dense() const;

private:
    Shape shape_;
    std::vector<std::size_t> rows_, cols_;
    Vector values_;
};

/// Compressed sparse row. Always canonical: within each row the column
/// indices are strictly increasing and duplicates have been summed.
/// Explicitly stored zeros are kept; see eliminate_zeros.
class CsrMatrix {
public:
    CsrMatrix(Shape shape, std::vector<std::size_t> indptr, std::vector<std::size_t> indices,
              Vector values);
    static CsrMatrix zero(Shape shape);

    Shape shape() const { return shape_; }
    std::size_t nnz() const { return values_.size(); }
    const std::vector<std::size_t>& indptr() const { return indptr_; }
    const std::vector<std::size_t>& indices() const { return indices_; }
    const Vector& values() const { return values_; }

    DenseMatrix to_dense() const;

private:
    Shape shape_;
    std::vector<std::size_t> indptr_, indices_;
    Vector values_;
};

/// Compressed sparse column; same canonical-form rules as CsrMatrix with the
/// major axis being columns.
class CscMatrix {
public:
    CscMatrix(Shape shape, std::vector<std::size_t> indptr, std::vector<std::size_t> indices,
              Vector values);

    Shape shape() const { return shape_; }
    std::size_t nnz() const { return values_.size(); }
    const std::vector<std::size_t>& indptr() const { return indptr_; }
    const std::vector<std::size_t>& indices() const { return indices_; }
    const Vector& values() const { return values_; }

    DenseMatrix to_dense() const;

private:
    Shape shape_;
    std::vector<std::size_t> indptr_, indices_;
    Vector values_;
};

/// Dictionary-of-keys format: the mutable assembly builder. Entries keep
/// whatever value was stored, including explicit zeros.
class DokMatrix {
public:
    explicit DokMatrix(Shape shape) : shape_(shape) {}

    Shape shape() const { return shape_; }
    std::size_t nnz() const { return map_.size(); }

    void set(std::size_t row, std::size_t col, double value);
    bool contains(std::size_t row, std::size_t col) const;
    double get(std::size_t row, std::size_t col) const;  // 0 when absent
    void erase(std::size_t row, std::size_t col);

    const std::unordered_map<std::uint64_t, double>& entries() const { return map_; }
    static std::pair<std::size_t, std::size_t> split_key(std::uint64_t key);

    DenseMatrix to_dense() const;

private:
    std::uint64_t key(std::size_t row, std::size_t col) const;
    Shape shape_;
    std::unordered_map<std::uint64_t, double> map_;
};

/// Diagonal format. Each stored diagonal occupies a cols-length row of
/// `data`; entry k of the diagonal with offset d holds element (k - d, k),
/// and positions with k - d outside [0, rows) are padding.
class DiaMatrix {
public:
    DiaMatrix(Shape shape, std::vector<std::ptrdiff_t> offsets, DenseMatrix data);

    Shape shape() const { return shape_; }
    const std::vector<std::ptrdiff_t>& offsets() const { return offsets_; }
    const DenseMatrix& data() const { return data_; }

    DenseMatrix to_dense() const;

private:
    Shape shape_;
    std::vector<std::ptrdiff_t> offsets_;
    DenseMatrix data_;
};

/// Tagged union over the five formats.
class SparseMatrix {
public:
    SparseMatrix(CooMatrix m) : m_(std::move(m)) {}
    SparseMatrix(CsrMatrix m) : m_(std::move(m)) {}
    SparseMatrix(CscMatrix m) : m_(std::move(m)) {}
    SparseMatrix(DokMatrix m) : m_(std::move(m)) {}
    SparseMatrix(DiaMatrix m) : m_(std::move(m)) {}

    Format format() const;
    Shape shape() const;
    DenseMatrix to_dense() const;

    template <class T>
    const T& as() const {
        return std::get<T>(m_);
    }

private:
    std::variant<CooMatrix, CsrMatrix, CscMatrix, DokMatrix, DiaMatrix> m_;
};

// Conversions. coo_to_csr / coo_to_csc sum duplicate entries; the generic
// convert() routes through COO and preserves the dense equivalent.
CsrMatrix coo_to_csr(const CooMatrix& m);
CscMatrix coo_to_csc(const CooMatrix& m);
CooMatrix csr_to_coo(const CsrMatrix& m);
CooMatrix csc_to_coo(const CscMatrix& m);
CooMatrix dok_to_coo(const DokMatrix& m);
CooMatrix dia_to_coo(const DiaMatrix& m);
DokMatrix coo_to_dok(const CooMatrix& m);
DiaMatrix coo_to_dia(const CooMatrix& m);
SparseMatrix convert(const SparseMatrix& m, Format target);

/// Structural equality on the nonzero pattern and values (explicit zeros are
/// ignored, so round trips through formats with different storage rules
/// compare equal exactly when the dense equivalents match entry for entry).
bool structurally_equal(const SparseMatrix& a, const SparseMatrix& b);

Vector spmv(const CsrMatrix& m, std::span<const double> x);
CsrMatrix spmm(const CsrMatrix& a, const CsrMatrix& b);

/// Drop explicitly stored zeros (spmm keeps numerically cancelled entries).
CsrMatrix eliminate_zeros(const CsrMatrix& m);

double norm(const SparseMatrix& m, NormKind kind);

/// Random sparse matrix: exactly round(density * rows * cols) distinct
/// positions chosen uniformly without replacement, values drawn from
/// `sampler` (uniform [0,1) by default) in position-sorted order.
CooMatrix random(Shape shape, double density, Rng& rng,
                 const std::function<double(Rng&)>& sampler = {});

}  // namespace numkit::sparse
