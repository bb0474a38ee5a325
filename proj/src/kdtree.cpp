#include "numkit/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "numkit/errors.hpp"

namespace numkit::spatial {

namespace {

/// Distance bookkeeping for one Minkowski order. Pruning and accumulation
/// run on a monotone surrogate (|d|^p for finite p, max coordinate for inf)
/// so roots are only taken when reporting final distances.
struct Metric {
    double p;
    bool inf;

    explicit Metric(double order) : p(order), inf(std::isinf(order)) {
        if (!(order >= 1.0)) throw ValueError("Minkowski order p must be >= 1 or infinity");
    }

    double surrogate(double d) const {
        if (inf || p == 1.0) return d;
        if (p == 2.0) return d * d;
        return std::pow(d, p);
    }
    double combine(double acc, double term) const { return inf ? std::max(acc, term) : acc + term; }
    double finalize(double acc) const {
        if (inf || p == 1.0) return acc;
        if (p == 2.0) return std::sqrt(acc);
        return std::pow(acc, 1.0 / p);
    }
};

inline double wrap(double x, double period) {
    const double w = x - std::floor(x / period) * period;
    return w == period ? 0.0 : w;
}

inline double axis_point_delta(double a, double b, double period) {
    double d = std::abs(a - b);
    if (period > 0.0 && d > period - d) d = period - d;
    return d;
}

/// Minimum-image |x - y| folded onto [0, period/2] for x - y in (-L, L).
inline double fold(double d, double period) {
    d = std::abs(d);
    return std::min(d, period - d);
}

/// Min and max of the per-axis distance between intervals [alo, ahi] and
/// [blo, bhi]; period <= 0 means open topology. On the circle the set of
/// deltas x - y is the arc [alo - bhi, ahi - blo], so the extremes sit at
/// the arc endpoints or at the critical deltas 0 and +-period/2.
void axis_interval_bounds(double alo, double ahi, double blo, double bhi, double period,
                          double& dmin, double& dmax) {
    if (period <= 0.0) {
        dmin = std::max({0.0, blo - ahi, alo - bhi});
        dmax = std::max(ahi - blo, bhi - alo);
        return;
    }
    const double width = (ahi - alo) + (bhi - blo);
    if (width >= period) {
        dmin = 0.0;
        dmax = period / 2.0;
        return;
    }
    const double e1 = alo - bhi, e2 = ahi - blo;  // e2 - e1 == width < period
    dmin = (e1 <= 0.0 && 0.0 <= e2) ? 0.0 : std::min(fold(e1, period), fold(e2, period));
    const double half = period / 2.0;
    dmax = ((e1 <= half && half <= e2) || (e1 <= -half && -half <= e2))
               ? half
               : std::max(fold(e1, period), fold(e2, period));
}

struct Neighbor {
    double dist;  // surrogate
    std::size_t index;
};

// Heap top is the worst kept candidate: larger distance, then larger index.
struct NeighborWorse {
    bool operator()(const Neighbor& a, const Neighbor& b) const {
        return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
    }
};

}  // namespace

KdTree::KdTree(Vector points, std::size_t dim, Options opts)
    : m_(dim), leafsize_(opts.leafsize), points_(std::move(points)), boxsize_(opts.boxsize) {
    if (m_ == 0) throw ValueError("KdTree: dimension must be >= 1");
    if (points_.empty() || points_.size() % m_ != 0)
        throw DimensionError("KdTree: point array length must be a positive multiple of dim");
    n_ = points_.size() / m_;
    if (leafsize_ == 0) leafsize_ = 1;
    for (double v : points_)
        if (!std::isfinite(v)) throw ValueError("KdTree: non-finite coordinate");
    if (!boxsize_.empty()) {
        if (boxsize_.size() != m_) throw DimensionError("KdTree: boxsize length must equal dim");
        for (double period : boxsize_)
            if (!(period > 0.0) || !std::isfinite(period))
                throw ValueError("KdTree: periods must be positive and finite");
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t d = 0; d < m_; ++d)
                points_[i * m_ + d] = wrap(points_[i * m_ + d], boxsize_[d]);
    }

    perm_.resize(n_);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    nodes_.reserve(2 * n_ / leafsize_ + 2);
    build_node(0, n_, 1);
}

std::size_t KdTree::build_node(std::size_t start, std::size_t end, std::size_t level) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{start, end, 0, 0});
    depth_ = std::max(depth_, level);

    // Tight bounding box over the covered points.
    boxes_.resize(boxes_.size() + 2 * m_);
    {
        double* lo = boxes_.data() + 2 * m_ * id;
        double* hi = lo + m_;
        for (std::size_t d = 0; d < m_; ++d) {
            lo[d] = kInfinity;
            hi[d] = -kInfinity;
        }
        for (std::size_t t = start; t < end; ++t) {
            const double* pt = points_.data() + perm_[t] * m_;
            for (std::size_t d = 0; d < m_; ++d) {
                lo[d] = std::min(lo[d], pt[d]);
                hi[d] = std::max(hi[d], pt[d]);
            }
        }
    }

    const std::size_t count = end - start;
    if (count <= leafsize_) return id;

    // Widest axis; all-degenerate boxes (duplicate points) stay leaves.
    std::size_t axis = 0;
    double width = -1.0;
    for (std::size_t d = 0; d < m_; ++d) {
        const double w = box_hi(id)[d] - box_lo(id)[d];
        if (w > width) {
            width = w;
            axis = d;
        }
    }
    if (width <= 0.0) return id;

    // Sliding midpoint: bisect the widest extent, then slide the plane to
    // the nearest point when one side would be empty.
    const double lo = box_lo(id)[axis], hi = box_hi(id)[axis];
    double split = 0.5 * (lo + hi);
    auto coord = [&](std::size_t pt) { return points_[pt * m_ + axis]; };
    auto* first = perm_.data() + start;
    auto* last = perm_.data() + end;
    auto* mid = std::partition(first, last, [&](std::size_t pt) { return coord(pt) < split; });
    if (mid == first) {
        double lowest = kInfinity;
        for (auto* it = first; it != last; ++it) lowest = std::min(lowest, coord(*it));
        split = std::nextafter(lowest, kInfinity);
        mid = std::partition(first, last, [&](std::size_t pt) { return coord(pt) < split; });
    } else if (mid == last) {
        double highest = -kInfinity;
        for (auto* it = first; it != last; ++it) highest = std::max(highest, coord(*it));
        split = highest;
        mid = std::partition(first, last, [&](std::size_t pt) { return coord(pt) < split; });
    }
    const std::size_t middle = start + static_cast<std::size_t>(mid - first);
    if (middle == start || middle == end) return id;  // could not separate; keep as leaf

    const std::size_t left = build_node(start, middle, level + 1);
    const std::size_t right = build_node(middle, end, level + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

QueryResult KdTree::query_knn(std::span<const double> query, std::size_t k, double p) const {
    if (query.size() != m_) throw DimensionError("query_knn: query dimension mismatch");
    if (k > n_) throw ValueError("query_knn: k exceeds number of points");
    const Metric metric(p);

    Vector q(query.begin(), query.end());
    if (periodic())
        for (std::size_t d = 0; d < m_; ++d) q[d] = wrap(q[d], boxsize_[d]);

    std::vector<Neighbor> heap;
    heap.reserve(k + 1);
    const NeighborWorse worse;

    auto consider = [&](std::size_t idx) {
        const double* pt = points_.data() + idx * m_;
        double acc = 0.0;
        for (std::size_t d = 0; d < m_; ++d) {
            const double delta =
                axis_point_delta(q[d], pt[d], periodic() ? boxsize_[d] : 0.0);
            acc = metric.combine(acc, metric.surrogate(delta));
        }
        const Neighbor cand{acc, idx};
        if (heap.size() < k) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end(), worse);
        } else if (worse(cand, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), worse);
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end(), worse);
        }
    };

    auto node_min_surrogate = [&](std::size_t id) {
        const auto lo = box_lo(id), hi = box_hi(id);
        double acc = 0.0;
        for (std::size_t d = 0; d < m_; ++d) {
            double dmin, dmax;
            axis_interval_bounds(q[d], q[d], lo[d], hi[d], periodic() ? boxsize_[d] : 0.0, dmin,
                                 dmax);
            acc = metric.combine(acc, metric.surrogate(dmin));
        }
        return acc;
    };

    auto visit = [&](auto&& self, std::size_t id) -> void {
        const Node& node = nodes_[id];
        if (node.leaf()) {
            for (std::size_t t = node.start; t < node.end; ++t) consider(perm_[t]);
            return;
        }
        const double dl = node_min_surrogate(node.left);
        const double dr = node_min_surrogate(node.right);
        const std::size_t near = dl <= dr ? node.left : node.right;
        const std::size_t far = dl <= dr ? node.right : node.left;
        const double dfar = std::max(dl, dr);
        if (heap.size() < k || std::min(dl, dr) <= heap.front().dist) self(self, near);
        if (heap.size() < k || dfar <= heap.front().dist) self(self, far);
    };
    if (k > 0) visit(visit, 0);

    std::sort(heap.begin(), heap.end(), worse);
    QueryResult out;
    out.distances.reserve(heap.size());
    out.indices.reserve(heap.size());
    for (const auto& nb : heap) {
        out.distances.push_back(metric.finalize(nb.dist));
        out.indices.push_back(nb.index);
    }
    return out;
}

namespace {

void check_compatible(const KdTree& a, const KdTree& b) {
    if (a.dim() != b.dim())
        throw DimensionError("tree pair: dimensions differ");
    if (a.periodic() != b.periodic() || (a.periodic() && a.boxsize() != b.boxsize()))
        throw DimensionError("tree pair: periodic topologies differ");
}

}  // namespace

sparse::DokMatrix sparse_distance_matrix(const KdTree& tree_a, const KdTree& tree_b,
                                         double max_distance, double p) {
    check_compatible(tree_a, tree_b);
    if (!(max_distance >= 0.0)) throw ValueError("sparse_distance_matrix: max_distance must be >= 0");
    const Metric metric(p);
    const std::size_t m = tree_a.dim();
    const double threshold = metric.inf ? max_distance
                                        : metric.combine(0.0, metric.surrogate(max_distance));

    sparse::DokMatrix out({tree_a.size(), tree_b.size()});

    auto pair_min = [&](std::size_t na, std::size_t nb) {
        const auto alo = tree_a.box_lo(na), ahi = tree_a.box_hi(na);
        const auto blo = tree_b.box_lo(nb), bhi = tree_b.box_hi(nb);
        double acc = 0.0;
        for (std::size_t d = 0; d < m; ++d) {
            double dmin, dmax;
            axis_interval_bounds(alo[d], ahi[d], blo[d], bhi[d],
                                 tree_a.periodic() ? tree_a.boxsize()[d] : 0.0, dmin, dmax);
            acc = metric.combine(acc, metric.surrogate(dmin));
        }
        return acc;
    };

    auto traverse = [&](auto&& self, std::size_t na, std::size_t nb) -> void {
        if (pair_min(na, nb) > threshold) return;
        const auto& node_a = tree_a.nodes_[na];
        const auto& node_b = tree_b.nodes_[nb];
        if (node_a.leaf() && node_b.leaf()) {
            for (std::size_t ta = node_a.start; ta < node_a.end; ++ta) {
                const std::size_t i = tree_a.perm_[ta];
                const double* pa = tree_a.points_.data() + i * m;
                for (std::size_t tb = node_b.start; tb < node_b.end; ++tb) {
                    const std::size_t j = tree_b.perm_[tb];
                    const double* pb = tree_b.points_.data() + j * m;
                    double acc = 0.0;
                    for (std::size_t d = 0; d < m; ++d) {
                        const double delta = axis_point_delta(
                            pa[d], pb[d], tree_a.periodic() ? tree_a.boxsize()[d] : 0.0);
                        acc = metric.combine(acc, metric.surrogate(delta));
                    }
                    if (acc <= threshold) {
                        const double dist = metric.finalize(acc);
                        if (dist <= max_distance) out.set(i, j, dist);
                    }
                }
            }
            return;
        }
        // Split the node covering more points (leaves cannot be split).
        const bool split_a = !node_a.leaf() &&
                             (node_b.leaf() || node_a.count() >= node_b.count());
        if (split_a) {
            self(self, node_a.left, nb);
            self(self, node_a.right, nb);
        } else {
            self(self, na, node_b.left);
            self(self, na, node_b.right);
        }
    };
    traverse(traverse, 0, 0);
    return out;
}

Vector count_neighbors(const KdTree& tree_a, const KdTree& tree_b, const PairCountRequest& req) {
    check_compatible(tree_a, tree_b);
    const std::size_t nr = req.radii.size();
    for (std::size_t t = 0; t < nr; ++t) {
        if (!(req.radii[t] >= 0.0)) throw ValueError("count_neighbors: radii must be >= 0");
        if (t > 0 && req.radii[t] < req.radii[t - 1])
            throw ValueError("count_neighbors: radii must be sorted ascending");
    }
    if (!req.weights_a.empty() && req.weights_a.size() != tree_a.size())
        throw DimensionError("count_neighbors: weights_a length mismatch");
    if (!req.weights_b.empty() && req.weights_b.size() != tree_b.size())
        throw DimensionError("count_neighbors: weights_b length mismatch");
    if (nr == 0) return {};

    const Metric metric(2.0);
    const std::size_t m = tree_a.dim();

    Vector radius_sur(nr);
    for (std::size_t t = 0; t < nr; ++t) radius_sur[t] = metric.surrogate(req.radii[t]);

    auto weight_of = [](const Vector& w, std::size_t i) { return w.empty() ? 1.0 : w[i]; };

    // Subtree weight sums, computed per call since weights arrive per query.
    auto node_weights = [&](const KdTree& tree, const Vector& w) {
        Vector sums(tree.nodes_.size(), 0.0);
        for (std::size_t id = tree.nodes_.size(); id-- > 0;) {
            const auto& node = tree.nodes_[id];
            if (node.leaf()) {
                double s = 0.0;
                for (std::size_t t = node.start; t < node.end; ++t)
                    s += weight_of(w, tree.perm_[t]);
                sums[id] = s;
            } else {
                sums[id] = sums[node.left] + sums[node.right];
            }
        }
        return sums;
    };
    const Vector wsum_a = node_weights(tree_a, req.weights_a);
    const Vector wsum_b = node_weights(tree_b, req.weights_b);

    auto pair_bounds = [&](std::size_t na, std::size_t nb, double& lo_sur, double& hi_sur) {
        const auto alo = tree_a.box_lo(na), ahi = tree_a.box_hi(na);
        const auto blo = tree_b.box_lo(nb), bhi = tree_b.box_hi(nb);
        double lo_acc = 0.0, hi_acc = 0.0;
        for (std::size_t d = 0; d < m; ++d) {
            double dmin, dmax;
            axis_interval_bounds(alo[d], ahi[d], blo[d], bhi[d],
                                 tree_a.periodic() ? tree_a.boxsize()[d] : 0.0, dmin, dmax);
            lo_acc = metric.combine(lo_acc, metric.surrogate(dmin));
            hi_acc = metric.combine(hi_acc, metric.surrogate(dmax));
        }
        lo_sur = lo_acc;
        hi_sur = hi_acc;
    };

    // Each radius index accumulates its count at the level where the node
    // pair first decides it; the undecided range [tlo, thi) shrinks on the
    // way down, so every (pair, radius) combination is added exactly once.
    Vector results(nr, 0.0);

    auto traverse = [&](auto&& self, std::size_t na, std::size_t nb, std::size_t tlo,
                        std::size_t thi) -> void {
        double lo_sur, hi_sur;
        pair_bounds(na, nb, lo_sur, hi_sur);
        while (tlo < thi && radius_sur[tlo] < lo_sur) ++tlo;  // too small: nothing here
        // Radii at least hi_sur cover every pair in this node pair.
        std::size_t t0 = thi;
        while (t0 > tlo && radius_sur[t0 - 1] >= hi_sur) --t0;
        if (t0 < thi) {
            const double w = wsum_a[na] * wsum_b[nb];
            for (std::size_t t = t0; t < thi; ++t) results[t] += w;
            thi = t0;
        }
        if (tlo >= thi) return;

        const auto& node_a = tree_a.nodes_[na];
        const auto& node_b = tree_b.nodes_[nb];
        if (node_a.leaf() && node_b.leaf()) {
            for (std::size_t ta = node_a.start; ta < node_a.end; ++ta) {
                const std::size_t i = tree_a.perm_[ta];
                const double* pa = tree_a.points_.data() + i * m;
                const double wa = weight_of(req.weights_a, i);
                for (std::size_t tb = node_b.start; tb < node_b.end; ++tb) {
                    const std::size_t j = tree_b.perm_[tb];
                    const double* pb = tree_b.points_.data() + j * m;
                    double acc = 0.0;
                    for (std::size_t d = 0; d < m; ++d) {
                        const double dd = axis_point_delta(
                            pa[d], pb[d], tree_a.periodic() ? tree_a.boxsize()[d] : 0.0);
                        acc = metric.combine(acc, metric.surrogate(dd));
                    }
                    const auto it = std::lower_bound(radius_sur.begin() + tlo,
                                                     radius_sur.begin() + thi, acc);
                    const double w = wa * weight_of(req.weights_b, j);
                    for (std::size_t t = static_cast<std::size_t>(it - radius_sur.begin());
                         t < thi; ++t)
                        results[t] += w;
                }
            }
            return;
        }
        const bool split_a = !node_a.leaf() &&
                             (node_b.leaf() || node_a.count() >= node_b.count());
        if (split_a) {
            self(self, node_a.left, nb, tlo, thi);
            self(self, node_a.right, nb, tlo, thi);
        } else {
            self(self, na, node_b.left, tlo, thi);
            self(self, na, node_b.right, tlo, thi);
        }
    };
    traverse(traverse, 0, 0, 0, nr);
    return results;
}

}  // namespace numkit::spatial
