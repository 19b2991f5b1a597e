#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "avta/core.hpp"
#include "avta/triangle.hpp"

namespace avta {

/// Dense Gaussian random linear map R^m -> R^{m'}: i.i.d. N(0,1) entries
/// scaled by 1/sqrt(m'). Immutable after construction.
class JlMap {
public:
    static JlMap gaussian(Index source_dim, Index target_dim, std::uint64_t seed) {
        if (source_dim < 1 || target_dim < 1)
            throw std::invalid_argument("JlMap: dimensions must be positive");
        JlMap map;
        map.seed_ = seed;
        map.matrix_.resize(target_dim, source_dim);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double scale = 1.0 / std::sqrt(static_cast<double>(target_dim));
        for (Index i = 0; i < target_dim; ++i)
            for (Index j = 0; j < source_dim; ++j)
                map.matrix_(i, j) = scale * gauss(rng);
        return map;
    }

    const Matrix& matrix() const { return matrix_; }
    Index source_dim() const { return matrix_.cols(); }
    Index target_dim() const { return matrix_.rows(); }
    std::uint64_t seed() const { return seed_; }

    Vector apply(const Vector& x) const {
        if (x.size() != matrix_.cols())
            throw std::invalid_argument("JlMap::apply: dimension mismatch");
        return matrix_ * x;
    }

private:
    Matrix matrix_;
    std::uint64_t seed_ = 0;
};

/// Target dimension ceil(c * ln n / eps'^2), capped at the source dimension.
inline Index choose_target_dim(Index n, double eps_prime, Index source_dim,
                               double c = 4.0) {
    if (!(eps_prime > 0.0 && eps_prime < 1.0))
        throw std::invalid_argument("choose_target_dim: eps' must be in (0,1)");
    if (!(c > 0.0)) throw std::invalid_argument("choose_target_dim: c must be positive");
    const double raw = std::ceil(c * std::log(static_cast<double>(n)) /
                                 (eps_prime * eps_prime));
    const Index d = raw < 1.0 ? Index{1} : static_cast<Index>(raw);
    return std::min(d, source_dim);
}

/// Row-wise image of the point set; index correspondence is preserved.
inline PointSet project(const JlMap& map, const PointSet& ps) {
    if (ps.dim() != map.source_dim())
        throw std::invalid_argument("project: dimension mismatch");
    Matrix out = ps.points() * map.matrix().transpose();
    return PointSet(std::move(out));
}

/// Fraction of point pairs whose distance distortion under the map lies in
/// [1-eps, 1+eps]; a diagnostic for the chosen target dimension.
inline double distortion_within(const PointSet& original, const PointSet& image,
                                double eps) {
    const Index n = original.size();
    long total = 0, ok = 0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double d0 = original.distance(i, j);
            if (d0 == 0.0) continue;
            const double d1 = image.distance(i, j);
            const double ratio = d1 / d0;
            ++total;
            if (ratio >= 1.0 - eps && ratio <= 1.0 + eps) ++ok;
        }
    }
    return total == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(total);
}

/// Max relative distance distortion over distinct pairs: max |d'/d - 1|.
inline double max_distortion(const PointSet& original, const PointSet& image) {
    const Index n = original.size();
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double d0 = original.distance(i, j);
            if (d0 == 0.0) continue;
            worst = std::max(worst, std::abs(image.distance(i, j) / d0 - 1.0));
        }
    }
    return worst;
}

/// Separation certificate for a query strictly outside the hull: the ratio
/// E = min_i d(p,v_i)/d(p*,v_i) over points distinct from the closest hull
/// point p*, and the bound (E-1)/(E+1) >= d^2/(4 D^2) it implies for how
/// much distortion a projection can absorb while keeping p outside.
struct ProjectionCertificate {
    double E_ratio = 0.0;
    double d_min = 0.0;        // d(p, p*)
    double D_max = 0.0;        // max_i d(p, v_i)
    double epsilon_bound = 0.0; // (E-1)/(E+1)
};

inline ProjectionCertificate membership_certificate(const PointSet& ps,
                                                    const Vector& p) {
    std::vector<Index> all(static_cast<std::size_t>(ps.size()));
    for (Index i = 0; i < ps.size(); ++i) all[static_cast<std::size_t>(i)] = i;
    const ClosestPointResult cp = closest_point(ps, all, p, 1e-14);
    if (cp.distance <= 1e-9)
        throw std::invalid_argument(
            "membership_certificate: query not strictly outside the hull");
    const Vector p_star = cp.combination.materialize(ps);

    ProjectionCertificate cert;
    cert.d_min = (p - p_star).norm();
    double E = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < ps.size(); ++i) {
        const Vector vi = ps.point(i);
        const double dp = (p - vi).norm();
        cert.D_max = std::max(cert.D_max, dp);
        const double ds = (p_star - vi).norm();
        if (ds <= 1e-6 * cert.d_min) continue; // v_i is (numerically) p* itself
        E = std::min(E, dp / ds);
    }
    if (!std::isfinite(E)) E = cert.D_max / cert.d_min; // all points at p*: d = D edge
    cert.E_ratio = E;
    cert.epsilon_bound = (E - 1.0) / (E + 1.0);
    const double rhs = cert.d_min * cert.d_min / (4.0 * cert.D_max * cert.D_max);
    if (cert.epsilon_bound + 1e-9 < rhs)
        throw std::logic_error("membership_certificate: bound inequality violated");
    return cert;
}

} // namespace avta
