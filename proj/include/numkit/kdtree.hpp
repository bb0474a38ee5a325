#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "numkit/dense.hpp"
#include "numkit/sparse.hpp"

namespace numkit::spatial {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// k nearest neighbors: distances ascending, ties broken by smaller index.
struct QueryResult {
    Vector distances;
    std::vector<std::size_t> indices;
};

/// Pair-count query: cumulative weighted pair counts at each radius.
/// Empty weight vectors mean unit weights.
struct PairCountRequest {
    Vector radii;
    Vector weights_a;
    Vector weights_b;
};

/// Space-partitioning tree over n points in m dimensions with sliding-
/// midpoint splits. An optional boxsize vector imposes toroidal topology:
/// coordinates are wrapped into [0, period) at build and query time and all
/// distances use the minimum-image convention.
///
/// Immutable after construction; concurrent queries are safe.
class KdTree {
public:
    struct Options {
        std::size_t leafsize = 16;
        Vector boxsize;  // empty = open topology; otherwise m positive periods
    };

    /// `points` is row-major n x dim.
    KdTree(Vector points, std::size_t dim, Options opts);
    KdTree(Vector points, std::size_t dim) : KdTree(std::move(points), dim, Options{}) {}

    std::size_t size() const { return n_; }
    std::size_t dim() const { return m_; }
    bool periodic() const { return !boxsize_.empty(); }
    const Vector& boxsize() const { return boxsize_; }
    std::size_t leafsize() const { return leafsize_; }
    std::size_t depth() const { return depth_; }

    std::span<const double> point(std::size_t i) const { return {points_.data() + i * m_, m_}; }

    /// Exact k nearest neighbors under the Minkowski p-norm (p in [1, inf]).
    QueryResult query_knn(std::span<const double> query, std::size_t k, double p = 2.0) const;

private:
    struct Node {
        std::size_t start = 0, end = 0;  // permutation range covered
        std::size_t left = 0, right = 0; // child node ids; 0 means leaf
        std::size_t count() const { return end - start; }
        bool leaf() const { return left == 0; }
    };

    std::size_t build_node(std::size_t start, std::size_t end, std::size_t level);
    std::span<const double> box_lo(std::size_t node) const { return {boxes_.data() + 2 * m_ * node, m_}; }
    std::span<const double> box_hi(std::size_t node) const { return {boxes_.data() + 2 * m_ * node + m_, m_}; }

    std::size_t n_ = 0, m_ = 0, leafsize_ = 16, depth_ = 0;
    Vector points_;   // wrapped copies, row-major
    Vector boxsize_;  // empty when open
    std::vector<std::size_t> perm_;
    std::vector<Node> nodes_;
    Vector boxes_;  // per node: m lows then m highs

    friend sparse::DokMatrix sparse_distance_matrix(const KdTree&, const KdTree&, double, double);
    friend Vector count_neighbors(const KdTree&, const KdTree&, const PairCountRequest&);
};

/// Every pair (i, j) with distance(a_i, b_j) <= max_distance becomes a DOK
/// entry holding that distance; coincident pairs are stored as explicit 0.0
/// so absence always means "further than max_distance".
sparse::DokMatrix sparse_distance_matrix(const KdTree& tree_a, const KdTree& tree_b,
                                         double max_distance, double p = 2.0);

/// Weighted dual-tree pair counting: result[t] is the sum of w_a[i]*w_b[j]
/// over pairs with distance <= radii[t]. Node pairs whose box distance bounds
/// decide all contained pairs are resolved with precomputed subtree weights.
Vector count_neighbors(const KdTree& tree_a, const KdTree& tree_b, const PairCountRequest& req);

}  // namespace numkit::spatial
