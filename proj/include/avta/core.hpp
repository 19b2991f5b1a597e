#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "avta/errors.hpp"

namespace avta {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A finite point set in R^m (rows are points) with cached squared norms
/// and a lazily filled table of pairwise inner products.
///
/// Read access (gram with pre-filled entries, materialize, diameter) is safe
/// under concurrent readers. Cache fills are idempotent: concurrent fills of
/// the same entry write the identical freshly computed value, and a mutex
/// serializes the map mutation itself. Cached values never change any
/// query's mathematical result -- each entry is exactly the dot product of
/// the two rows.
class PointSet {
public:
    explicit PointSet(Matrix points) : pts_(std::move(points)) {
        if (pts_.rows() < 1 || pts_.cols() < 1)
            throw std::invalid_argument("PointSet: need n >= 1 and m >= 1");
        if (!pts_.allFinite())
            throw std::invalid_argument("PointSet: non-finite coordinate");
        sqnorms_ = pts_.rowwise().squaredNorm();
    }

    // the mutex is per-object state, not data: copies/moves start fresh
    PointSet(const PointSet& o)
        : pts_(o.pts_), sqnorms_(o.sqnorms_), cache_enabled_(o.cache_enabled_) {}
    PointSet(PointSet&& o) noexcept
        : pts_(std::move(o.pts_)),
          sqnorms_(std::move(o.sqnorms_)),
          cache_enabled_(o.cache_enabled_),
          gram_cache_(std::move(o.gram_cache_)) {}
    PointSet& operator=(const PointSet& o) {
        if (this != &o) {
            pts_ = o.pts_;
            sqnorms_ = o.sqnorms_;
            cache_enabled_ = o.cache_enabled_;
            std::lock_guard<std::mutex> lock(cache_mutex_);
            gram_cache_.clear();
        }
        return *this;
    }
    PointSet& operator=(PointSet&& o) noexcept {
        if (this != &o) {
            pts_ = std::move(o.pts_);
            sqnorms_ = std::move(o.sqnorms_);
            cache_enabled_ = o.cache_enabled_;
            gram_cache_ = std::move(o.gram_cache_);
        }
        return *this;
    }

    Index size() const { return pts_.rows(); }
    Index dim() const { return pts_.cols(); }
    const Matrix& points() const { return pts_; }
    Eigen::VectorXd point(Index i) const { return pts_.row(i).transpose(); }
    double squared_norm(Index i) const { return sqnorms_(i); }

    /// Inner product of rows i and j, cached after first use.
    double gram(Index i, Index j) const {
        check_index(i);
        check_index(j);
        if (i == j) return sqnorms_(i);
        if (!cache_enabled_) return pts_.row(i).dot(pts_.row(j));
        const std::uint64_t key = pack(i, j);
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto it = gram_cache_.find(key);
            if (it != gram_cache_.end()) return it->second;
        }
        const double value = pts_.row(i).dot(pts_.row(j));
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            gram_cache_.emplace(key, value);
        }
        return value;
    }

    void set_cache_enabled(bool on) { cache_enabled_ = on; }
    bool cache_enabled() const { return cache_enabled_; }
    std::size_t cached_entries() const {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        return gram_cache_.size();
    }

    double distance(Index i, Index j) const {
        return (pts_.row(i) - pts_.row(j)).norm();
    }

    double squared_distance_to(Index i, const Vector& p) const {
        return (pts_.row(i).transpose() - p).squaredNorm();
    }

private:
    void check_index(Index i) const {
        if (i < 0 || i >= pts_.rows())
            throw std::out_of_range("PointSet: index out of range");
    }
    std::uint64_t pack(Index i, Index j) const {
        const std::uint64_t a = static_cast<std::uint64_t>(std::min(i, j));
        const std::uint64_t b = static_cast<std::uint64_t>(std::max(i, j));
        return a * static_cast<std::uint64_t>(pts_.rows()) + b;
    }

    Matrix pts_;
    Vector sqnorms_;
    bool cache_enabled_ = true;
    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<std::uint64_t, double> gram_cache_;
};

/// Sparse nonnegative weight vector over point indices summing to 1. The
/// point it denotes is sum_i w_i v_i and is only materialized on request.
class ConvexCombination {
public:
    ConvexCombination() = default;

    static ConvexCombination unit(Index i) {
        ConvexCombination c;
        c.support_.push_back(i);
        c.weights_.push_back(1.0);
        return c;
    }

    const std::vector<Index>& support() const { return support_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t support_size() const { return support_.size(); }
    bool empty() const { return support_.empty(); }

    double weight_of(Index i) const {
        for (std::size_t k = 0; k < support_.size(); ++k)
            if (support_[k] == i) return weights_[k];
        return 0.0;
    }

    double sum() const {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }

    /// Scales every weight by f.
    void scale(double f) {
        for (double& w : weights_) w *= f;
    }

    /// Adds w to the weight of index i (inserting it if absent).
    void add(Index i, double w) {
        for (std::size_t k = 0; k < support_.size(); ++k) {
            if (support_[k] == i) {
                weights_[k] += w;
                return;
            }
        }
        support_.push_back(i);
        weights_.push_back(w);
    }

    /// Restores sum-to-one if rounding drift exceeds 1e-12.
    void renormalize_if_drifted() {
        const double s = sum();
        if (std::abs(s - 1.0) > 1e-12 && s > 0.0) {
            for (double& w : weights_) w /= s;
        }
    }

    /// Drops entries with weight below the given floor (keeps sum intact via
    /// renormalization). Used sparingly; zero weights are otherwise legal.
    void prune_below(double floor) {
        std::vector<Index> s;
        std::vector<double> w;
        for (std::size_t k = 0; k < support_.size(); ++k) {
            if (weights_[k] > floor) {
                s.push_back(support_[k]);
                w.push_back(weights_[k]);
            }
        }
        support_ = std::move(s);
        weights_ = std::move(w);
        renormalize_if_drifted();
    }

    /// Dense embedded point sum_i w_i v_i.
    Vector materialize(const PointSet& ps) const {
        Vector out = Vector::Zero(ps.dim());
        for (std::size_t k = 0; k < support_.size(); ++k)
            out += weights_[k] * ps.point(support_[k]);
        return out;
    }

private:
    std::vector<Index> support_;
    std::vector<double> weights_;
};

/// Diameter of the set: max pairwise Euclidean distance. Exact O(n^2 m) scan.
inline double diameter(const PointSet& ps) {
    const Index n = ps.size();
    double best = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            best = std::max(best, (ps.points().row(i) - ps.points().row(j)).squaredNorm());
    return std::sqrt(best);
}

struct DiameterResult {
    double value = 0.0;
    bool approximate = false; // true when the 2-approximation path was taken
};

/// Diameter with an opt-in 2-approximation for n above approx_threshold:
/// twice the max distance from an arbitrary anchor (row 0). The result is
/// flagged so downstream gamma thresholds can record the mode used.
inline DiameterResult diameter_with_mode(const PointSet& ps, Index approx_threshold) {
    if (ps.size() <= approx_threshold) return {diameter(ps), false};
    double best = 0.0;
    for (Index j = 1; j < ps.size(); ++j)
        best = std::max(best, (ps.points().row(0) - ps.points().row(j)).squaredNorm());
    return {2.0 * std::sqrt(best), true};
}

struct MinDistanceResult {
    double value = 0.0;
    bool has_duplicates = false;
};

/// Minimum distance over distinct pairs; 0 is allowed (duplicates) and flagged.
inline MinDistanceResult min_pairwise_distance(const PointSet& ps) {
    const Index n = ps.size();
    if (n < 2) throw std::invalid_argument("min_pairwise_distance: need n >= 2");
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            best = std::min(best, (ps.points().row(i) - ps.points().row(j)).squaredNorm());
    const double d = std::sqrt(best);
    return {d, d == 0.0};
}

/// Run parameters bounding the geometry of an instance. At most one of
/// gamma / sigma / t / K drives a given run.
struct RobustnessParams {
    std::optional<double> gamma;     // lower bound on Gamma*/R
    std::optional<double> sigma;     // lower bound on Sigma*/R
    std::optional<double> t;         // coarse-approximation radius
    std::optional<int> K_known;      // vertex count, when known
    double epsilon_perturb = 0.0;    // perturbation scale (fraction of R)
    double R = 0.0;                  // diameter, computed
    double rho_star = 0.0;           // min pairwise distance, computed

    static RobustnessParams measure(const PointSet& ps) {
        RobustnessParams p;
        p.R = diameter(ps);
        if (ps.size() >= 2) p.rho_star = min_pairwise_distance(ps).value;
        return p;
    }
};

} // namespace avta
