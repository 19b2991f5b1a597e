#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "avta/core.hpp"
#include "avta/errors.hpp"

namespace avta {

enum class PivotRule { Greedy, FirstFit };
enum class SolveMode { Plain, Strict };

/// Outcome of a membership query: either an eps-approximate solution (a hull
/// point within eps*R of the query) or a witness whose bisecting hyperplane
/// separates the query from the hull.
struct MembershipResult {
    enum class Kind { ApproxSolution, Witness };
    Kind kind = Kind::ApproxSolution;
    ConvexCombination combination;
    double distance_to_query = 0.0;
    double epsilon_used = 0.0;
    long iterations = 0;
};

/// One logged pivot step: gap before/after and the distance from the query
/// to the pivot point.
struct PivotStep {
    double delta_before;
    double delta_after;
    double pivot_distance;
};

/// Incremental solver state. Every per-iteration quantity (||p'||^2, p'.v_i,
/// p.v_i, p.p') is maintained so that a pivot search and a pivot application
/// each cost O(N) in the working-set size.
class SolverState {
public:
    SolverState(const PointSet& ps, std::vector<Index> working_set, Vector query)
        : ps_(&ps), working_(std::move(working_set)), query_(std::move(query)) {
        if (working_.empty())
            throw std::invalid_argument("SolverState: empty working set");
        if (query_.size() != ps.dim())
            throw std::invalid_argument("SolverState: query dimension mismatch");
        local_of_.reserve(working_.size());
        for (std::size_t k = 0; k < working_.size(); ++k)
            local_of_[working_[k]] = k;
        query_norm_sq_ = query_.squaredNorm();
        query_dots_.resize(working_.size());
        for (std::size_t k = 0; k < working_.size(); ++k)
            query_dots_[k] = ps.points().row(working_[k]).dot(query_.transpose());
        init_default_start();
    }

    /// Step 0 of the algorithm: start at the working-set point nearest the query.
    void init_default_start() {
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < working_.size(); ++k) {
            const double d2 = ps_->squared_norm(working_[k]) - 2.0 * query_dots_[k] + query_norm_sq_;
            if (d2 < best_d2) {
                best_d2 = d2;
                best = k;
            }
        }
        set_start(ConvexCombination::unit(working_[best]));
    }

    /// Warm start from a combination supported on the working set.
    void set_start(const ConvexCombination& start) {
        for (Index i : start.support())
            if (!local_of_.count(i))
                throw std::invalid_argument("SolverState: start not supported on working set");
        iterate_ = start;
        iterate_dots_.assign(working_.size(), 0.0);
        for (std::size_t j = 0; j < start.support().size(); ++j) {
            const Index gj = start.support()[j];
            const double wj = start.weights()[j];
            if (wj == 0.0) continue;
            for (std::size_t k = 0; k < working_.size(); ++k)
                iterate_dots_[k] += wj * ps_->gram(working_[k], gj);
        }
        iterate_norm_sq_ = 0.0;
        query_dot_iterate_ = 0.0;
        for (std::size_t j = 0; j < start.support().size(); ++j) {
            const Index gj = start.support()[j];
            const std::size_t lj = local_of_.at(gj);
            iterate_norm_sq_ += start.weights()[j] * iterate_dots_[lj];
            query_dot_iterate_ += start.weights()[j] * query_dots_[lj];
        }
        iterations_ = 0;
        pivot_steps_ = 0;
    }

    const std::vector<Index>& working_set() const { return working_; }
    const ConvexCombination& iterate() const { return iterate_; }
    const Vector& query() const { return query_; }
    long iterations() const { return iterations_; }
    long pivot_steps() const { return pivot_steps_; }
    double iterate_norm_sq() const { return iterate_norm_sq_; }

    /// d(p', p), the current gap.
    double gap() const {
        const double g2 = iterate_norm_sq_ - 2.0 * query_dot_iterate_ + query_norm_sq_;
        return std::sqrt(std::max(0.0, g2));
    }

    /// d(p, v_j) for a working-set member (global index).
    double query_point_distance(Index j) const {
        const std::size_t lj = local_of_.at(j);
        const double d2 = ps_->squared_norm(j) - 2.0 * query_dots_[lj] + query_norm_sq_;
        return std::sqrt(std::max(0.0, d2));
    }

    /// Pivot search per the inequality v.p - v.p' >= (||p||^2 - ||p'||^2)/2.
    /// Greedy mode returns the max-slack candidate, first-fit the first
    /// qualifying index in working-set order. Returns a global index.
    std::optional<Index> find_pivot(PivotRule rule = PivotRule::Greedy) const {
        const double rhs = 0.5 * (query_norm_sq_ - iterate_norm_sq_);
        std::optional<Index> best;
        double best_slack = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < working_.size(); ++k) {
            const double slack = query_dots_[k] - iterate_dots_[k] - rhs;
            if (slack >= 0.0) {
                if (rule == PivotRule::FirstFit) return working_[k];
                if (slack > best_slack) {
                    best_slack = slack;
                    best = working_[k];
                }
            }
        }
        return best;
    }

    /// Strict pivot: v with angle(p',p,v) >= pi/2, i.e. (p'-p).(v-p) <= 0.
    /// Undefined when p = p'.
    std::optional<Index> find_strict_pivot(PivotRule rule = PivotRule::Greedy) const {
        if (gap() == 0.0)
            throw std::logic_error("find_strict_pivot: p = p', angle undefined");
        std::optional<Index> best;
        double best_value = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < working_.size(); ++k) {
            // (p'-p).(v-p) = p'.v - p.v - p'.p + ||p||^2
            const double v = iterate_dots_[k] - query_dots_[k] - query_dot_iterate_ + query_norm_sq_;
            if (v <= 0.0) {
                if (rule == PivotRule::FirstFit) return working_[k];
                if (v < best_value) {
                    best_value = v;
                    best = working_[k];
                }
            }
        }
        return best;
    }

    /// Applies a pivot step toward global index j: step size
    /// alpha = (p-p').(v_j-p') / d^2(v_j,p'), clamped to (0,1], weights and
    /// cached quantities updated incrementally.
    void apply_pivot(Index j, std::vector<PivotStep>* trace = nullptr) {
        const std::size_t lj = local_of_.at(j);
        const double denom = ps_->squared_norm(j) - 2.0 * iterate_dots_[lj] + iterate_norm_sq_;
        if (!(denom > 0.0))
            throw DegeneratePivotError("apply_pivot: iterate coincides with pivot point");
        const double numer =
            query_dots_[lj] - iterate_dots_[lj] - query_dot_iterate_ + iterate_norm_sq_;
        if (!(numer > 0.0))
            throw DegeneratePivotError("apply_pivot: nonpositive step size");
        const double alpha = std::min(1.0, numer / denom);

        const double delta_before = trace ? gap() : 0.0;

        iterate_.scale(1.0 - alpha);
        iterate_.add(j, alpha);
        iterate_.renormalize_if_drifted();

        const double old_norm_sq = iterate_norm_sq_;
        const double old_dot_j = iterate_dots_[lj];
        iterate_norm_sq_ = (1.0 - alpha) * (1.0 - alpha) * old_norm_sq +
                           2.0 * alpha * (1.0 - alpha) * old_dot_j +
                           alpha * alpha * ps_->squared_norm(j);
        for (std::size_t k = 0; k < working_.size(); ++k)
            iterate_dots_[k] = (1.0 - alpha) * iterate_dots_[k] + alpha * ps_->gram(working_[k], j);
        query_dot_iterate_ = (1.0 - alpha) * query_dot_iterate_ + alpha * query_dots_[lj];

        ++iterations_;
        ++pivot_steps_;
        if ((iterations_ & 0x1FF) == 0) refresh_cached_state();
        if (trace) trace->push_back({delta_before, gap(), query_point_distance(j)});
#ifndef NDEBUG
        debug_check_consistency();
#endif
    }

    /// Frank-Wolfe style improvement value max_j (p-p').(v_j-p'); the argmax
    /// drives the closest-point iteration.
    std::pair<Index, double> best_improvement() const {
        Index best = working_[0];
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < working_.size(); ++k) {
            const double v =
                query_dots_[k] - iterate_dots_[k] - query_dot_iterate_ + iterate_norm_sq_;
            if (v > best_value) {
                best_value = v;
                best = working_[k];
            }
        }
        return {best, best_value};
    }

    /// Recomputes all incremental quantities from the weight vector; verifies
    /// 1e-8 relative agreement in debug builds.
    void debug_check_consistency() const {
        const Vector p = iterate_.materialize(*ps_);
        const double n2 = p.squaredNorm();
        const double scale = std::max(1.0, std::abs(n2));
        assert(std::abs(n2 - iterate_norm_sq_) <= 1e-8 * scale);
        for (std::size_t k = 0; k < working_.size(); ++k) {
            const double d = ps_->points().row(working_[k]).dot(p.transpose());
            assert(std::abs(d - iterate_dots_[k]) <= 1e-8 * std::max(1.0, std::abs(d)));
        }
        (void)p;
    }

private:
    void refresh_cached_state() {
        iterate_dots_.assign(working_.size(), 0.0);
        for (std::size_t j = 0; j < iterate_.support().size(); ++j) {
            const Index gj = iterate_.support()[j];
            const double wj = iterate_.weights()[j];
            if (wj == 0.0) continue;
            for (std::size_t k = 0; k < working_.size(); ++k)
                iterate_dots_[k] += wj * ps_->gram(working_[k], gj);
        }
        iterate_norm_sq_ = 0.0;
        query_dot_iterate_ = 0.0;
        for (std::size_t j = 0; j < iterate_.support().size(); ++j) {
            const std::size_t lj = local_of_.at(iterate_.support()[j]);
            iterate_norm_sq_ += iterate_.weights()[j] * iterate_dots_[lj];
            query_dot_iterate_ += iterate_.weights()[j] * query_dots_[lj];
        }
    }

    const PointSet* ps_;
    std::vector<Index> working_;
    std::unordered_map<Index, std::size_t> local_of_;
    Vector query_;
    double query_norm_sq_ = 0.0;
    std::vector<double> query_dots_;

    ConvexCombination iterate_;
    double iterate_norm_sq_ = 0.0;
    double query_dot_iterate_ = 0.0;
    std::vector<double> iterate_dots_;
    long iterations_ = 0;
    long pivot_steps_ = 0;
};

struct SolveOptions {
    SolveMode mode = SolveMode::Plain;
    PivotRule rule = PivotRule::Greedy;
    double R_override = -1.0;               // <0: use the working-set diameter
    const ConvexCombination* start = nullptr;
    std::vector<PivotStep>* trace = nullptr;
    long max_iterations_override = -1;      // <0: ceil(48/eps^2) + N
};

inline double working_set_diameter(const PointSet& ps, const std::vector<Index>& working) {
    double best = 0.0;
    for (std::size_t a = 0; a < working.size(); ++a)
        for (std::size_t b = a + 1; b < working.size(); ++b)
            best = std::max(best,
                            (ps.points().row(working[a]) - ps.points().row(working[b])).squaredNorm());
    return std::sqrt(best);
}

/// The membership solver. Terminates with an ApproxSolution as soon as
/// d(p',p) <= eps*R, otherwise pivots; when no pivot exists the iterate is a
/// witness. Strict mode prefers strict pivots and falls back to plain ones,
/// preserving the witness dichotomy.
inline MembershipResult solve_membership(const PointSet& ps,
                                         const std::vector<Index>& working_set,
                                         const Vector& p,
                                         double epsilon,
                                         const SolveOptions& opt = {}) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("solve_membership: epsilon must be in (0,1)");
    if (working_set.empty())
        throw std::invalid_argument("solve_membership: empty working set");

    const double R = opt.R_override >= 0.0 ? opt.R_override
                                           : working_set_diameter(ps, working_set);
    SolverState state(ps, working_set, p);
    if (opt.start) state.set_start(*opt.start);

    const long cap = opt.max_iterations_override >= 0
                         ? opt.max_iterations_override
                         : static_cast<long>(std::ceil(48.0 / (epsilon * epsilon))) +
                               static_cast<long>(working_set.size());
    const double threshold = epsilon * R;

    while (true) {
        if (state.gap() <= threshold) {
            MembershipResult r;
            r.kind = MembershipResult::Kind::ApproxSolution;
            r.combination = state.iterate();
            r.distance_to_query = state.gap();
            r.epsilon_used = epsilon;
            r.iterations = state.iterations();
            return r;
        }
        std::optional<Index> pivot;
        if (opt.mode == SolveMode::Strict) {
            pivot = state.find_strict_pivot(opt.rule);
            if (!pivot) pivot = state.find_pivot(opt.rule);
        } else {
            pivot = state.find_pivot(opt.rule);
        }
        if (!pivot) {
            MembershipResult r;
            r.kind = MembershipResult::Kind::Witness;
            r.combination = state.iterate();
            r.distance_to_query = state.gap();
            r.epsilon_used = epsilon;
            r.iterations = state.iterations();
            return r;
        }
        if (state.iterations() >= cap)
            throw IterationLimitError("solve_membership: iteration cap exceeded");
        state.apply_pivot(*pivot, opt.trace);
    }
}

/// Recomputes the witness inequality d(p',v_i) < d(p,v_i) for every
/// working-set point directly from coordinates, bypassing all caches.
inline bool validate_witness(const PointSet& ps,
                             const std::vector<Index>& working_set,
                             const Vector& p,
                             const ConvexCombination& witness) {
    Vector w = Vector::Zero(ps.dim());
    for (std::size_t k = 0; k < witness.support().size(); ++k)
        w += witness.weights()[k] *
             ps.points().row(witness.support()[k]).transpose();
    for (Index i : working_set) {
        const double dw = (ps.points().row(i).transpose() - w).norm();
        const double dp = (ps.points().row(i).transpose() - p).norm();
        if (!(dw < dp)) return false;
    }
    return true;
}

struct ClosestPointResult {
    ConvexCombination combination;
    double distance = 0.0;       // upper bound on d(p, conv(working))
    double lower_bound = 0.0;    // certified lower bound on the same distance
    long iterations = 0;
};

/// Frank-Wolfe iteration toward the closest hull point. Stops when the
/// duality gap certifies distance^2 within gap_target of optimal, or at the
/// iteration cap. Used for diagnostics and for threshold decisions where the
/// plain membership solver's early witness exit is too coarse.
inline ClosestPointResult closest_point(const PointSet& ps,
                                        const std::vector<Index>& working_set,
                                        const Vector& p,
                                        double gap_target,
                                        long max_iter = 2000000) {
    SolverState state(ps, working_set, p);
    long it = 0;
    double fw_gap = 0.0;
    while (it < max_iter) {
        auto [j, improvement] = state.best_improvement();
        fw_gap = improvement;
        if (improvement <= gap_target) break;
        state.apply_pivot(j);
        ++it;
    }
    ClosestPointResult r;
    r.combination = state.iterate();
    r.distance = state.gap();
    const double d2 = r.distance * r.distance;
    r.lower_bound = std::sqrt(std::max(0.0, d2 - 2.0 * std::max(0.0, fw_gap)));
    r.iterations = it;
    return r;
}

/// Decides whether d(p, conv(working)) < threshold, refining until the
/// upper/lower distance bounds separate from the threshold (or the budget
/// runs out, in which case the upper-bound side is reported).
struct DistanceDecision {
    bool below = false;
    double distance_estimate = 0.0;
};

inline DistanceDecision distance_below_threshold(const PointSet& ps,
                                                 const std::vector<Index>& working_set,
                                                 const Vector& p,
                                                 double threshold,
                                                 long max_iter = 2000000) {
    SolverState state(ps, working_set, p);
    long it = 0;
    while (true) {
        const double upper = state.gap();
        if (upper < threshold) return {true, upper};
        auto [j, improvement] = state.best_improvement();
        const double lower2 = upper * upper - 2.0 * std::max(0.0, improvement);
        if (lower2 >= threshold * threshold) return {false, upper};
        if (improvement <= 0.0 || it >= max_iter) return {upper < threshold, upper};
        state.apply_pivot(j);
        ++it;
    }
}

} // namespace avta
