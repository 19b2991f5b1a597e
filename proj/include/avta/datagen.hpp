#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "avta/core.hpp"
#include "avta/exact.hpp"
#include "avta/io.hpp"
#include "avta/lp.hpp"
#include "avta/triangle.hpp"

namespace avta {

enum class VertexDist { Gaussian01, Gaussian10, Uniform01 };
enum class NoiseKind { None, Gaussian, UniformBall };

struct InstanceSpec {
    int K = 4;
    int n = 20;
    int m = 2;
    VertexDist vertex_dist = VertexDist::Gaussian01;
    NoiseKind noise = NoiseKind::None;
    double noise_param = 0.0; // tau for Gaussian, radius scale (fraction of R) for UniformBall
    std::uint64_t seed = 0;
};

struct HullInstance {
    PointSet points;
    std::vector<Index> true_vertices; // indices 0..K-1
    int retries = 0;                  // convex-position regeneration count
};

namespace detail {

inline Matrix draw_vertices(int K, int m, VertexDist dist, std::mt19937_64& rng) {
    Matrix V(K, m);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < m; ++j) {
            switch (dist) {
                case VertexDist::Gaussian01: V(i, j) = gauss(rng); break;
                case VertexDist::Gaussian10: V(i, j) = std::sqrt(10.0) * gauss(rng); break;
                case VertexDist::Uniform01: V(i, j) = unif(rng); break;
            }
        }
    }
    return V;
}

/// All K rows in convex position? Exact oracle at desk scale, a
/// closest-point screen beyond it.
inline bool convex_position(const Matrix& V) {
    const PointSet ps(V);
    if (ps.size() < 2) return true;
    if (V.rows() <= 30 && V.cols() <= 8) {
        return exact::vertex_set_exact(ps).size() == static_cast<std::size_t>(V.rows());
    }
    const double R = diameter(ps);
    for (Index i = 0; i < ps.size(); ++i) {
        std::vector<Index> others;
        for (Index j = 0; j < ps.size(); ++j)
            if (j != i) others.push_back(j);
        if (distance_below_threshold(ps, others, ps.point(i), 1e-7 * R).below)
            return false;
    }
    return true;
}

} // namespace detail

/// Draws K vertices from the requested distribution (regenerating up to 100
/// times until they are in convex position), fills the remaining n-K points
/// with random convex combinations (i.i.d. uniform weights normalized to sum
/// one), and finally applies noise if requested.
inline HullInstance gen_hull_instance(const InstanceSpec& spec) {
    if (spec.K < 1 || spec.m < 1) throw std::invalid_argument("gen_hull_instance: bad counts");
    if (spec.K > spec.n) throw std::invalid_argument("gen_hull_instance: K > n");

    std::mt19937_64 rng(spec.seed);
    Matrix V;
    int retries = 0;
    while (true) {
        V = detail::draw_vertices(spec.K, spec.m, spec.vertex_dist, rng);
        if (detail::convex_position(V)) break;
        if (++retries > 100)
            throw std::runtime_error(
                "gen_hull_instance: vertices not in convex position after 100 retries");
    }

    Matrix P(spec.n, spec.m);
    P.topRows(spec.K) = V;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = spec.K; i < spec.n; ++i) {
        Vector w(spec.K);
        for (int k = 0; k < spec.K; ++k) w(k) = unif(rng);
        w /= w.sum();
        P.row(i) = w.transpose() * V;
    }

    if (spec.noise != NoiseKind::None) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double R = diameter(PointSet(P));
        for (int i = 0; i < spec.n; ++i) {
            if (spec.noise == NoiseKind::Gaussian) {
                for (int j = 0; j < spec.m; ++j) P(i, j) += spec.noise_param * gauss(rng);
            } else {
                // uniform in the ball of radius noise_param * R
                Vector dir(spec.m);
                for (int j = 0; j < spec.m; ++j) dir(j) = gauss(rng);
                const double norm = dir.norm();
                if (norm > 0.0) {
                    const double r = spec.noise_param * R *
                                     std::pow(unif(rng), 1.0 / spec.m);
                    P.row(i) += (r / norm) * dir.transpose();
                }
            }
        }
    }

    HullInstance inst{PointSet(std::move(P)), {}, retries};
    for (int k = 0; k < spec.K; ++k) inst.true_vertices.push_back(k);
    return inst;
}

struct ConeInstance {
    LinearSystem system;
    std::vector<Index> generator_columns; // 0..K-1
};

/// K generator columns with uniform(0,1) entries plus n-K redundant columns
/// formed as nonnegative combinations with uniform(0, B_scale) coefficients.
inline ConeInstance gen_cone_instance(int K, int n, int m, double B_scale,
                                      std::uint64_t seed) {
    if (K < 1 || m < 1 || K > n) throw std::invalid_argument("gen_cone_instance: bad counts");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif01(0.0, 1.0);
    std::uniform_real_distribution<double> unifB(0.0, B_scale);

    Matrix A(m, n);
    for (int j = 0; j < K; ++j)
        for (int i = 0; i < m; ++i) A(i, j) = unif01(rng);
    for (int j = K; j < n; ++j) {
        Vector coeff(K);
        for (int k = 0; k < K; ++k) coeff(k) = unifB(rng);
        A.col(j) = A.leftCols(K) * coeff;
    }

    ConeInstance inst;
    inst.system.A = std::move(A);
    inst.system.b = Vector::Zero(m);
    for (int k = 0; k < K; ++k) inst.generator_columns.push_back(k);
    return inst;
}

inline const char* vertex_dist_name(VertexDist d) {
    switch (d) {
        case VertexDist::Gaussian01: return "gaussian01";
        case VertexDist::Gaussian10: return "gaussian10";
        case VertexDist::Uniform01: return "uniform01";
    }
    return "?";
}

inline const char* noise_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::None: return "none";
        case NoiseKind::Gaussian: return "gaussian";
        case NoiseKind::UniformBall: return "uniform";
    }
    return "?";
}

/// Writes the instance (CSV or binary by extension) plus a key=value sidecar
/// at path + ".meta" recording the spec, seed, and ground truth.
inline void write_hull_instance(const std::string& path, const InstanceSpec& spec,
                                const HullInstance& inst) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0)
        io::write_binary_points(path, inst.points.points());
    else
        io::write_csv_matrix(path, inst.points.points());

    io::Metadata meta;
    meta.emplace_back("kind", "hull_instance");
    meta.emplace_back("seed", std::to_string(spec.seed));
    meta.emplace_back("K", std::to_string(spec.K));
    meta.emplace_back("n", std::to_string(spec.n));
    meta.emplace_back("m", std::to_string(spec.m));
    meta.emplace_back("vertex_dist", vertex_dist_name(spec.vertex_dist));
    meta.emplace_back("noise", noise_name(spec.noise));
    meta.emplace_back("noise_param", std::to_string(spec.noise_param));
    meta.emplace_back("retries", std::to_string(inst.retries));
    std::string truth;
    for (std::size_t k = 0; k < inst.true_vertices.size(); ++k) {
        if (k) truth += ' ';
        truth += std::to_string(inst.true_vertices[k]);
    }
    meta.emplace_back("true_vertices", truth);
    io::write_metadata(path + ".meta", meta);
}

} // namespace avta
