#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "numkit/matrix_market.hpp"
#include "numkit/rng.hpp"
#include "numkit/sparse.hpp"

using namespace numkit;
using namespace numkit::sparse;

namespace {

const Format kFormats[] = {Format::coo, Format::csr, Format::csc, Format::dok, Format::dia};

bool dense_equal(const DenseMatrix& a, const DenseMatrix& b, double tol = 0.0) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        if (std::abs(a.data()[i] - b.data()[i]) > tol) return false;
    return true;
}

}  // namespace

TEST_CASE("coo_to_csr sums duplicates") {
    CooMatrix coo({1, 1}, {0, 0}, {0, 0}, {1.0, 2.0});
    auto csr = coo_to_csr(coo);
    CHECK(csr.nnz() == 1);
    CHECK(csr.values()[0] == 3.0);
}

TEST_CASE("empty COO gives empty indptr") {
    auto csr = coo_to_csr(CooMatrix::empty({3, 3}));
    CHECK(csr.indptr() == std::vector<std::size_t>{0, 0, 0, 0});
}

TEST_CASE("coo_to_csr equals dense accumulation on 100 random matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = 1 + rng.next_below(12), c = 1 + rng.next_below(12);
        const std::size_t n = rng.next_below(30);
        std::vector<std::size_t> ri(n), ci(n);
        Vector v(n);
        for (std::size_t k = 0; k < n; ++k) {
            ri[k] = rng.next_below(r);
            ci[k] = rng.next_below(c);
            v[k] = rng.uniform(-2, 2);
        }
        CooMatrix coo({r, c}, ri, ci, v);
        CHECK(dense_equal(coo_to_csr(coo).to_dense(), coo.to_dense(), 1e-14));
    }
}

TEST_CASE("coo rejects out-of-range indices") {
    CHECK_THROWS_AS(CooMatrix({2, 2}, {2}, {0}, {1.0}), StructureError);
    CHECK_THROWS_AS(CooMatrix({2, 2}, {0}, {5}, {1.0}), StructureError);
}

TEST_CASE("csr constructor enforces canonical form") {
    CHECK_THROWS_AS(CsrMatrix({2, 2}, {0, 2, 2}, {1, 0}, {1.0, 2.0}), StructureError);
    CHECK_THROWS_AS(CsrMatrix({2, 2}, {0, 1}, {0}, {1.0}), StructureError);
}

TEST_CASE("identity CSR converts to DIA with a single zero offset") {
    CooMatrix eye({3, 3}, {0, 1, 2}, {0, 1, 2}, {1, 1, 1});
    auto dia = convert(SparseMatrix(coo_to_csr(eye)), Format::dia);
    CHECK(dia.as<DiaMatrix>().offsets() == std::vector<std::ptrdiff_t>{0});
    CHECK(dense_equal(dia.to_dense(), eye.to_dense()));
}

TEST_CASE("DOK single entry converts to COO") {
    DokMatrix dok({2, 2});
    dok.set(1, 0, 5.0);
    auto coo = dok_to_coo(dok);
    CHECK(coo.nnz() == 1);
    CHECK(coo.row_indices()[0] == 1);
    CHECK(coo.col_indices()[0] == 0);
    CHECK(coo.values()[0] == 5.0);
}

TEST_CASE("all 25 format pairs preserve the dense equivalent") {
    Rng rng(7);
    auto coo = random({30, 20}, 0.2, rng);
    const auto reference = coo.to_dense();
    for (Format src : kFormats) {
        auto in_src = convert(SparseMatrix(coo), src);
        CHECK(dense_equal(in_src.to_dense(), reference, 1e-14));
        for (Format dst : kFormats) {
            auto in_dst = convert(in_src, dst);
            CHECK(dense_equal(in_dst.to_dense(), reference, 1e-14));
            // Round trip back to the source compares structurally equal.
            CHECK(structurally_equal(convert(in_dst, src), in_src));
        }
    }
}

TEST_CASE("spmv: diagonal, empty, and dense-oracle cases") {
    CooMatrix diag({2, 2}, {0, 1}, {0, 1}, {1.0, 2.0});
    auto y = spmv(coo_to_csr(diag), Vector{3.0, 4.0});
    CHECK(y == Vector{3.0, 8.0});

    auto empty = CsrMatrix::zero({3, 2});
    CHECK(spmv(empty, Vector{1.0, 1.0}) == Vector{0.0, 0.0, 0.0});

    CHECK_THROWS_AS(spmv(empty, Vector{1.0}), DimensionError);

    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = coo_to_csr(random({50, 50}, 0.3, rng));
        Vector x(50);
        for (auto& v : x) v = rng.uniform(-1, 1);
        auto fast = spmv(m, x);
        auto dense = m.to_dense().multiply(x);
        for (std::size_t i = 0; i < 50; ++i) CHECK(std::abs(fast[i] - dense[i]) < 1e-12);
    }
}

TEST_CASE("spmm: identity, permutations, dense oracle") {
    Rng rng(3);
    auto a = coo_to_csr(random({8, 8}, 0.4, rng));
    CooMatrix eye({8, 8}, {0, 1, 2, 3, 4, 5, 6, 7}, {0, 1, 2, 3, 4, 5, 6, 7},
                  Vector(8, 1.0));
    auto ai = spmm(a, coo_to_csr(eye));
    CHECK(structurally_equal(SparseMatrix(ai), SparseMatrix(a)));

    // Permutation x permutation composes.
    CooMatrix p1({3, 3}, {0, 1, 2}, {1, 2, 0}, {1, 1, 1});
    CooMatrix p2({3, 3}, {0, 1, 2}, {2, 0, 1}, {1, 1, 1});
    auto prod = spmm(coo_to_csr(p1), coo_to_csr(p2));
    CHECK(dense_equal(prod.to_dense(), p1.to_dense().multiply(p2.to_dense())));

    for (int trial = 0; trial < 10; ++trial) {
        auto x = coo_to_csr(random({12, 9}, 0.35, rng));
        auto yv = coo_to_csr(random({9, 14}, 0.35, rng));
        auto fast = spmm(x, yv).to_dense();
        auto dense = x.to_dense().multiply(yv.to_dense());
        CHECK(dense_equal(fast, dense, 1e-12));
    }

    CHECK_THROWS_AS(spmm(a, coo_to_csr(p1)), DimensionError);
}

TEST_CASE("spmm keeps cancelled entries until eliminate_zeros") {
    // a = [1 -1], b = [1; 1] -> product entry exactly 0 but structurally present.
    CooMatrix a({1, 2}, {0, 0}, {0, 1}, {1.0, -1.0});
    CooMatrix b({2, 1}, {0, 1}, {0, 0}, {1.0, 1.0});
    auto prod = spmm(coo_to_csr(a), coo_to_csr(b));
    CHECK(prod.nnz() == 1);
    CHECK(prod.values()[0] == 0.0);
    CHECK(eliminate_zeros(prod).nnz() == 0);
}

TEST_CASE("norm identities") {
    CooMatrix diag({2, 2}, {0, 1}, {0, 1}, {3.0, 4.0});
    SparseMatrix m(diag);
    CHECK(norm(m, NormKind::fro) == doctest::Approx(5.0));

    SparseMatrix zero(CsrMatrix::zero({4, 5}));
    for (auto kind : {NormKind::fro, NormKind::one, NormKind::inf})
        CHECK(norm(zero, kind) == 0.0);

    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto coo = random({15, 10}, 0.3, rng);
        auto d = coo.to_dense();
        double fro = 0.0;
        Vector rowsum(15, 0.0), colsum(10, 0.0);
        for (std::size_t i = 0; i < 15; ++i)
            for (std::size_t j = 0; j < 10; ++j) {
                fro += d(i, j) * d(i, j);
                rowsum[i] += std::abs(d(i, j));
                colsum[j] += std::abs(d(i, j));
            }
        SparseMatrix sm(coo);
        CHECK(norm(sm, NormKind::fro) == doctest::Approx(std::sqrt(fro)).epsilon(1e-12));
        CHECK(norm(sm, NormKind::inf) ==
              doctest::Approx(*std::max_element(rowsum.begin(), rowsum.end())).epsilon(1e-12));
        CHECK(norm(sm, NormKind::one) ==
              doctest::Approx(*std::max_element(colsum.begin(), colsum.end())).epsilon(1e-12));

        // one-norm of transpose == inf-norm of original.
        auto csc = convert(sm, Format::csc).as<CscMatrix>();
        CsrMatrix transposed({10, 15}, csc.indptr(), csc.indices(), csc.values());
        CHECK(norm(SparseMatrix(transposed), NormKind::one) ==
              doctest::Approx(norm(sm, NormKind::inf)).epsilon(1e-12));
    }
}

TEST_CASE("random density edge cases and exact count") {
    Rng rng(1);
    CHECK(random({6, 7}, 0.0, rng).nnz() == 0);
    CHECK(random({6, 7}, 1.0, rng).nnz() == 42);

    // Exactly round(density*m*n) positions, all distinct, on every trial.
    for (int trial = 0; trial < 50; ++trial) {
        auto m = random({20, 30}, 0.1, rng);
        CHECK(m.nnz() == 60);
        DokMatrix seen({20, 30});
        for (std::size_t k = 0; k < m.nnz(); ++k) {
            CHECK_FALSE(seen.contains(m.row_indices()[k], m.col_indices()[k]));
            seen.set(m.row_indices()[k], m.col_indices()[k], 1.0);
        }
    }
}

TEST_CASE("random is bit-identical for equal seeds") {
    Rng a(999), b(999);
    auto m1 = random({25, 25}, 0.17, a);
    auto m2 = random({25, 25}, 0.17, b);
    CHECK(m1.row_indices() == m2.row_indices());
    CHECK(m1.col_indices() == m2.col_indices());
    CHECK(m1.values() == m2.values());
}

TEST_CASE("spmv against unit vectors reproduces dense columns") {
    Rng rng(21);
    auto m = coo_to_csr(random({9, 6}, 0.5, rng));
    auto d = m.to_dense();
    for (std::size_t j = 0; j < 6; ++j) {
        Vector e(6, 0.0);
        e[j] = 1.0;
        auto col = spmv(m, e);
        for (std::size_t i = 0; i < 9; ++i) CHECK(col[i] == d(i, j));
    }
}

TEST_CASE("matrix market round trip is value-exact") {
    Rng rng(77);
    auto m = random({12, 8}, 0.3, rng, [](Rng& r) { return r.uniform(-1e6, 1e6) * 1e-7; });
    std::stringstream buf;
    write_matrix_market(buf, m);
    auto back = read_matrix_market(buf);
    CHECK(back.shape() == m.shape());
    REQUIRE(back.nnz() == m.nnz());
    CHECK(back.row_indices() == m.row_indices());
    CHECK(back.col_indices() == m.col_indices());
    for (std::size_t k = 0; k < m.nnz(); ++k) CHECK(back.values()[k] == m.values()[k]);
}

TEST_CASE("matrix market rejects foreign headers") {
    std::stringstream buf("%%MatrixMarket matrix array real general\n1 1\n1.0\n");
    CHECK_THROWS_AS(read_matrix_market(buf), StructureError);
}
