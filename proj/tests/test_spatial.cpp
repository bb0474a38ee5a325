#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "numkit/kdtree.hpp"
#include "numkit/points_io.hpp"
#include "numkit/rng.hpp"

using namespace numkit;
using namespace numkit::spatial;

namespace {

// Test-side distance, written independently of the tree internals.
double ref_distance(std::span<const double> a, std::span<const double> b, double p,
                    const Vector& boxsize) {
    double acc = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        double delta = std::abs(a[d] - b[d]);
        if (!boxsize.empty()) delta = std::min(delta, boxsize[d] - delta);
        if (std::isinf(p))
            acc = std::max(acc, delta);
        else if (p == 1.0)
            acc += delta;
        else if (p == 2.0)
            acc += delta * delta;
        else
            acc += std::pow(delta, p);
    }
    if (std::isinf(p) || p == 1.0) return acc;
    if (p == 2.0) return std::sqrt(acc);
    return std::pow(acc, 1.0 / p);
}

// Exhaustive scan with (distance, index) ordering.
QueryResult brute_force_knn(const Vector& points, std::size_t m, std::span<const double> q,
                            std::size_t k, double p, const Vector& boxsize) {
    const std::size_t n = points.size() / m;
    std::vector<std::pair<double, std::size_t>> all(n);
    Vector qa(q.begin(), q.end());
    if (!boxsize.empty())
        for (std::size_t d = 0; d < m; ++d)
            qa[d] = qa[d] - std::floor(qa[d] / boxsize[d]) * boxsize[d];
    for (std::size_t i = 0; i < n; ++i) {
        Vector pt(points.begin() + i * m, points.begin() + (i + 1) * m);
        if (!boxsize.empty())
            for (std::size_t d = 0; d < m; ++d)
                pt[d] = pt[d] - std::floor(pt[d] / boxsize[d]) * boxsize[d];
        all[i] = {ref_distance(qa, pt, p, boxsize), i};
    }
    std::sort(all.begin(), all.end());
    QueryResult out;
    for (std::size_t i = 0; i < k; ++i) {
        out.distances.push_back(all[i].first);
        out.indices.push_back(all[i].second);
    }
    return out;
}

Vector random_points(Rng& rng, std::size_t n, std::size_t m, double lo = 0.0, double hi = 1.0) {
    Vector pts(n * m);
    for (auto& v : pts) v = rng.uniform(lo, hi);
    return pts;
}

}  // namespace

TEST_CASE("single point tree is one leaf") {
    KdTree tree(Vector{0.5, 0.5}, 2);
    CHECK(tree.size() == 1);
    CHECK(tree.depth() == 1);
    auto res = tree.query_knn(Vector{0.0, 0.0}, 1);
    CHECK(res.indices == std::vector<std::size_t>{0});
    CHECK(res.distances[0] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("build rejects bad input") {
    CHECK_THROWS_AS(KdTree(Vector{0.0, 1.0, 0.5}, 2), DimensionError);
    CHECK_THROWS_AS(KdTree(Vector{0.0, std::nan("")}, 2), ValueError);
    KdTree::Options opts;
    opts.boxsize = {1.0, -1.0};
    CHECK_THROWS_AS(KdTree((Vector{0.1, 0.2}), 2, opts), ValueError);
}

TEST_CASE("depth stays O(log n) on uniform points") {
    Rng rng(31);
    const std::size_t n = 10000;
    for (std::size_t m : {2ul, 4ul}) {
        KdTree tree(random_points(rng, n, m), m);
        const double bound =
            4.0 * std::log2(static_cast<double>(n) / tree.leafsize()) + 8.0;
        CHECK(static_cast<double>(tree.depth()) <= bound);
    }
}

TEST_CASE("collinear duplicate points still query correctly") {
    Vector pts{1.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 3.0};  // duplicates on a line
    KdTree tree(pts, 1, {.leafsize = 2});
    for (double q : {0.0, 1.5, 2.0, 9.0}) {
        auto got = tree.query_knn(Vector{q}, 3);
        auto want = brute_force_knn(pts, 1, Vector{q}, 3, 2.0, {});
        CHECK(got.indices == want.indices);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(got.distances[i] == doctest::Approx(want.distances[i]).epsilon(1e-12));
    }
}

TEST_CASE("nearest neighbor on a line") {
    KdTree tree(Vector{0.0, 1.0, 3.0}, 1);
    auto res = tree.query_knn(Vector{0.9}, 1);
    CHECK(res.indices == std::vector<std::size_t>{1});
    CHECK(res.distances[0] == doctest::Approx(0.1));
}

TEST_CASE("periodic interval uses minimum image") {
    KdTree::Options opts;
    opts.boxsize = {1.0};
    KdTree tree(Vector{0.1, 0.9}, 1, opts);
    auto res = tree.query_knn(Vector{0.0}, 1);
    CHECK(res.indices == std::vector<std::size_t>{1});
    CHECK(res.distances[0] == doctest::Approx(0.1));
}

TEST_CASE("query_knn equals brute force across configurations") {
    Rng rng(404);
    for (std::size_t m : {2ul, 3ul}) {
        for (std::size_t k : {1ul, 5ul}) {
            for (double p : {1.0, 2.0, kInfinity}) {
                for (bool periodic : {false, true}) {
                    const std::size_t n = 200;
                    auto pts = random_points(rng, n, m);
                    KdTree::Options opts;
                    opts.leafsize = 8;
                    Vector box;
                    if (periodic) {
                        box.assign(m, 1.0);
                        opts.boxsize = box;
                    }
                    KdTree tree(pts, m, opts);
                    for (int qi = 0; qi < 25; ++qi) {
                        Vector q(m);
                        for (auto& v : q) v = rng.uniform(-0.2, 1.2);
                        auto got = tree.query_knn(q, k, p);
                        auto want = brute_force_knn(pts, m, q, k, p, box);
                        CHECK(got.indices == want.indices);
                        for (std::size_t i = 0; i < k; ++i)
                            CHECK(std::abs(got.distances[i] - want.distances[i]) < 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("query_knn validates arguments") {
    KdTree tree(Vector{0.0, 1.0}, 1);
    CHECK_THROWS_AS(tree.query_knn(Vector{0.0}, 3), ValueError);
    CHECK_THROWS_AS(tree.query_knn(Vector{0.0, 0.0}, 1), DimensionError);
    CHECK_THROWS_AS(tree.query_knn(Vector{0.0}, 1, 0.5), ValueError);
}

TEST_CASE("periodic distances never exceed flat distances and respect half period") {
    Rng rng(17);
    const std::size_t n = 60, m = 3;
    auto pts = random_points(rng, n, m);
    KdTree::Options opts;
    opts.boxsize = {1.0, 1.0, 1.0};
    KdTree tree(pts, m, opts);
    KdTree flat(pts, m);
    for (int qi = 0; qi < 20; ++qi) {
        Vector q(m);
        for (auto& v : q) v = rng.next_double();
        auto per = tree.query_knn(q, 1);
        auto fl = flat.query_knn(q, 1);
        CHECK(per.distances[0] <= fl.distances[0] + 1e-15);
        // Each coordinate delta of the winner is at most period/2.
        auto winner = tree.point(per.indices[0]);
        for (std::size_t d = 0; d < m; ++d) {
            double delta = std::abs(q[d] - winner[d]);
            delta = std::min(delta, 1.0 - delta);
            CHECK(delta <= 0.5 + 1e-15);
        }
    }
}

TEST_CASE("sparse_distance_matrix: coincident pairs at max_distance zero") {
    Vector a{0.25, 0.25, 0.75, 0.75};
    Vector b{0.25, 0.25, 0.10, 0.10};
    KdTree ta(a, 2), tb(b, 2);
    auto dok = sparse_distance_matrix(ta, tb, 0.0);
    CHECK(dok.nnz() == 1);
    CHECK(dok.contains(0, 0));
    CHECK(dok.get(0, 0) == 0.0);
}

TEST_CASE("sparse_distance_matrix: two points at distance d") {
    KdTree ta(Vector{0.0}, 1), tb(Vector{0.7}, 1);
    auto dok = sparse_distance_matrix(ta, tb, 0.7);
    CHECK(dok.nnz() == 1);
    CHECK(dok.get(0, 0) == doctest::Approx(0.7));
    auto none = sparse_distance_matrix(ta, tb, 0.69);
    CHECK(none.nnz() == 0);
}

TEST_CASE("sparse_distance_matrix vs dense pairwise oracle") {
    Rng rng(88);
    const std::size_t m = 3;
    auto pa = random_points(rng, 100, m);
    auto pb = random_points(rng, 80, m);
    for (double p : {1.0, 2.0, kInfinity}) {
        KdTree ta(pa, m, {.leafsize = 8}), tb(pb, m, {.leafsize = 8});
        const double cutoff = 0.4;
        auto dok = sparse_distance_matrix(ta, tb, cutoff, p);
        std::size_t expected = 0;
        for (std::size_t i = 0; i < 100; ++i) {
            for (std::size_t j = 0; j < 80; ++j) {
                const double d = ref_distance({pa.data() + i * m, m}, {pb.data() + j * m, m}, p, {});
                if (d <= cutoff) {
                    ++expected;
                    REQUIRE(dok.contains(i, j));
                    CHECK(std::abs(dok.get(i, j) - d) < 1e-12);
                }
            }
        }
        CHECK(dok.nnz() == expected);
    }
}

TEST_CASE("sparse_distance_matrix of a tree with itself is symmetric with self pairs") {
    Rng rng(5150);
    const std::size_t n = 40, m = 2;
    auto pts = random_points(rng, n, m);
    KdTree tree(pts, m, {.leafsize = 4});
    auto dok = sparse_distance_matrix(tree, tree, 0.3);
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(dok.contains(i, i));
        CHECK(dok.get(i, i) == 0.0);
    }
    for (const auto& [key, value] : dok.entries()) {
        auto [i, j] = sparse::DokMatrix::split_key(key);
        REQUIRE(dok.contains(j, i));
        CHECK(dok.get(j, i) == doctest::Approx(value).epsilon(1e-14));
    }
}

TEST_CASE("sparse_distance_matrix rejects mismatched topology") {
    KdTree open_tree(Vector{0.1, 0.2}, 2);
    KdTree::Options opts;
    opts.boxsize = {1.0, 1.0};
    KdTree torus(Vector{0.1, 0.2}, 2, opts);
    CHECK_THROWS_AS(sparse_distance_matrix(open_tree, torus, 1.0), DimensionError);
}

TEST_CASE("count_neighbors: single weighted pair") {
    KdTree ta(Vector{0.0}, 1), tb(Vector{1.0}, 1);
    PairCountRequest req;
    req.weights_a = {2.0};
    req.weights_b = {3.0};
    req.radii = {0.5, 1.0, 2.0};
    auto counts = count_neighbors(ta, tb, req);
    CHECK(counts == Vector{0.0, 6.0, 6.0});
}

TEST_CASE("count_neighbors: infinite radius counts all weight products") {
    Rng rng(9);
    auto pa = random_points(rng, 30, 2);
    auto pb = random_points(rng, 20, 2);
    KdTree ta(pa, 2), tb(pb, 2);
    PairCountRequest req;
    req.radii = {kInfinity};
    req.weights_a.resize(30);
    req.weights_b.resize(20);
    double wa_sum = 0.0, wb_sum = 0.0;
    for (auto& w : req.weights_a) {
        w = rng.uniform(0.5, 1.5);
        wa_sum += w;
    }
    for (auto& w : req.weights_b) {
        w = rng.uniform(0.5, 1.5);
        wb_sum += w;
    }
    auto counts = count_neighbors(ta, tb, req);
    CHECK(counts[0] == doctest::Approx(wa_sum * wb_sum).epsilon(1e-12));
}

TEST_CASE("count_neighbors matches the quadratic pair-sum oracle") {
    Rng rng(1234);
    const std::size_t na = 150, nb = 150, m = 3;
    auto pa = random_points(rng, na, m);
    auto pb = random_points(rng, nb, m);
    PairCountRequest req;
    req.radii = {0.1, 0.25, 0.5, 0.9, 1.4};
    req.weights_a.resize(na);
    req.weights_b.resize(nb);
    for (auto& w : req.weights_a) w = rng.uniform(0.1, 2.0);
    for (auto& w : req.weights_b) w = rng.uniform(0.1, 2.0);

    KdTree ta(pa, m, {.leafsize = 8}), tb(pb, m, {.leafsize = 8});
    auto counts = count_neighbors(ta, tb, req);

    Vector oracle(req.radii.size(), 0.0);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            const double d = ref_distance({pa.data() + i * m, m}, {pb.data() + j * m, m}, 2.0, {});
            for (std::size_t t = 0; t < req.radii.size(); ++t)
                if (d <= req.radii[t]) oracle[t] += req.weights_a[i] * req.weights_b[j];
        }
    for (std::size_t t = 0; t < req.radii.size(); ++t)
        CHECK(std::abs(counts[t] - oracle[t]) <= 1e-9 * std::max(1.0, std::abs(oracle[t])));
}

TEST_CASE("count_neighbors: unweighted result is an integer-valued nondecreasing float") {
    Rng rng(777);
    auto pa = random_points(rng, 50, 2);
    auto pb = random_points(rng, 50, 2);
    KdTree ta(pa, 2), tb(pb, 2);
    PairCountRequest req;
    req.radii = {0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
    auto counts = count_neighbors(ta, tb, req);
    double prev = -1.0;
    for (double c : counts) {
        CHECK(c == std::floor(c));
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(counts.back() == 2500.0);
}

TEST_CASE("count_neighbors validates radii") {
    KdTree t(Vector{0.0}, 1);
    PairCountRequest bad;
    bad.radii = {0.5, 0.2};
    CHECK_THROWS_AS(count_neighbors(t, t, bad), ValueError);
    bad.radii = {-0.1};
    CHECK_THROWS_AS(count_neighbors(t, t, bad), ValueError);
}

TEST_CASE("periodic count_neighbors matches oracle") {
    Rng rng(31415);
    const std::size_t n = 80, m = 2;
    auto pa = random_points(rng, n, m);
    auto pb = random_points(rng, n, m);
    KdTree::Options opts;
    opts.boxsize = {1.0, 1.0};
    KdTree ta(pa, m, opts), tb(pb, m, opts);
    PairCountRequest req;
    req.radii = {0.1, 0.3, 0.6};
    auto counts = count_neighbors(ta, tb, req);
    Vector oracle(3, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = ref_distance({pa.data() + i * m, m}, {pb.data() + j * m, m}, 2.0,
                                          opts.boxsize);
            for (std::size_t t = 0; t < 3; ++t)
                if (d <= req.radii[t]) oracle[t] += 1.0;
        }
    for (std::size_t t = 0; t < 3; ++t) CHECK(counts[t] == oracle[t]);
}

TEST_CASE("points round trip through csv and binary files") {
    Rng rng(2);
    PointSet ps;
    ps.n = 25;
    ps.m = 3;
    ps.data = random_points(rng, ps.n, ps.m, -5.0, 5.0);

    const std::string bin = "test_points.nkp";
    write_points_binary(bin, ps);
    auto back = read_points_binary(bin);
    CHECK(back.n == ps.n);
    CHECK(back.m == ps.m);
    CHECK(back.data == ps.data);
    std::remove(bin.c_str());

    const std::string csv = "test_points.csv";
    {
        std::ofstream out(csv);
        char buf[64];
        for (std::size_t i = 0; i < ps.n; ++i) {
            for (std::size_t d = 0; d < ps.m; ++d) {
                std::snprintf(buf, sizeof buf, "%.17g", ps.data[i * ps.m + d]);
                out << (d ? "," : "") << buf;
            }
            out << "\n";
        }
    }
    auto csv_back = read_points_csv(csv);
    CHECK(csv_back.n == ps.n);
    CHECK(csv_back.m == ps.m);
    for (std::size_t i = 0; i < ps.data.size(); ++i) CHECK(csv_back.data[i] == ps.data[i]);
    std::remove(csv.c_str());
}
