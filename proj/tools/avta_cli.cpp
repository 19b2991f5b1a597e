// avta command-line front end: membership queries, vertex enumeration,
// LP column pruning, instance generation, and benchmark emission.
//
// Exit codes are a stable contract:
//   0  success / query point is an approximate hull member
//   2  witness found (query outside) / cone infeasible
//   64 usage error (bad flags)
//   65 data error (unreadable or malformed input files)
//   70 internal error
//
// Reports are line-oriented key=value plus index lists; --json emits the
// same content as one JSON object. Identical flags + seed reproduce the
// report byte-for-byte except the wall_time_ms field.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../vendor/CLI11.hpp"
#include "../vendor/json.hpp"

#include "avta/avta.hpp"
#include "avta/core.hpp"
#include "avta/datagen.hpp"
#include "avta/errors.hpp"
#include "avta/exact.hpp"
#include "avta/io.hpp"
#include "avta/lp.hpp"
#include "avta/project.hpp"
#include "avta/robust.hpp"
#include "avta/triangle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitWitness = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitInternal = 70;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered key=value report. Kept as strings so the text and JSON renderings
/// carry identical content.
class Report {
public:
    void add(const std::string& key, const std::string& value) {
        entries_.emplace_back(key, value);
    }
    void add(const std::string& key, double value) {
        std::ostringstream ss;
        ss.precision(17);
        ss << value;
        add(key, ss.str());
    }
    void add(const std::string& key, long value) { add(key, std::to_string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, const std::vector<avta::Index>& idx) {
        std::string s;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (k) s += ' ';
            s += std::to_string(idx[k]);
        }
        add(key, s);
    }

    std::string text() const {
        std::string out;
        for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
        return out;
    }
    std::string json() const {
        nlohmann::ordered_json j;
        for (const auto& [k, v] : entries_) j[k] = v;
        return j.dump(2) + "\n";
    }

    std::string find(const std::string& key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return v;
        return "";
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

avta::Vector parse_inline_point(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            vals.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw UsageError("--point: non-numeric coordinate '" + field + "'");
        }
    }
    if (vals.empty()) throw UsageError("--point: empty coordinate list");
    avta::Vector p(static_cast<avta::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) p(static_cast<avta::Index>(i)) = vals[i];
    return p;
}

std::vector<avta::Index> all_indices(const avta::PointSet& ps) {
    std::vector<avta::Index> all(static_cast<std::size_t>(ps.size()));
    for (avta::Index i = 0; i < ps.size(); ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
}

/// Deterministic per-cell seed derived from the master seed and the cell
/// coordinate (splitmix64 finalizer).
std::uint64_t cell_seed(std::uint64_t master, std::uint64_t cell) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (cell + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// A safe gamma for a generated instance: 90% of the exact Gamma*/R. Only
/// the K intended vertices enter the computation, so this stays cheap even
/// for large n.
double safe_gamma(const avta::HullInstance& inst) {
    const double g = avta::exact::gamma_star_distance(inst.points, inst.true_vertices) /
                     avta::diameter_with_mode(inst.points, 4000).value;
    return std::min(0.9 * g, 0.999);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

struct Options {
    bool json = false;
    std::string run_log = "avta_runs.log";
    std::uint64_t seed = 0;
    bool seed_given = false;
};

std::uint64_t effective_seed(const Options& g) {
    if (g.seed_given) return g.seed;
    if (const char* env = std::getenv("AVTA_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("AVTA_SEED is not a valid unsigned integer");
        }
    }
    return 0;
}

void append_run_record(const Options& g, const std::string& command,
                       const std::string& parameters, std::uint64_t seed,
                       double wall_ms, const Report& rep) {
    if (g.run_log.empty()) return;
    std::ofstream f(g.run_log, std::ios::app);
    if (!f) return; // the log is best-effort plumbing, never a failure source
    f << "command=" << command << "\tparameters=" << parameters << "\tseed=" << seed
      << "\twall_time_ms=" << wall_ms;
    for (const char* key : {"iterations", "total_pivots", "membership_calls", "result",
                            "verdict", "reduced_path", "output"}) {
        const std::string v = rep.find(key);
        if (!v.empty()) f << "\t" << key << "=" << v;
    }
    f << "\n";
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

// ---------------------------------------------------------------------------
// membership

struct MembershipArgs {
    std::string input;
    std::string point_inline;
    std::string point_file;
    double epsilon = 0.0;
    std::string mode = "plain";
    bool via_vertices = false;
    double gamma = 0.0;
};

int run_membership(const MembershipArgs& a, const Options& g, Report& rep) {
    if (a.point_inline.empty() == a.point_file.empty())
        throw UsageError("membership: give exactly one of --point or --point-file");
    if (!(a.epsilon > 0.0 && a.epsilon < 1.0))
        throw UsageError("membership: --epsilon must be in (0,1)");
    if (a.via_vertices && !(a.gamma > 0.0 && a.gamma < 1.0))
        throw UsageError("membership: --via-vertices needs --gamma in (0,1)");

    const avta::PointSet ps(avta::io::read_points_auto(a.input));
    avta::Vector p;
    if (!a.point_inline.empty()) {
        p = parse_inline_point(a.point_inline);
    } else {
        const avta::Matrix m = avta::io::read_csv_matrix(a.point_file);
        if (m.rows() != 1)
            throw std::invalid_argument("membership: point file must contain one row");
        p = m.row(0).transpose();
    }
    if (p.size() != ps.dim())
        throw std::invalid_argument("membership: point dimension " + std::to_string(p.size()) +
                                    " does not match input dimension " +
                                    std::to_string(ps.dim()));

    const std::uint64_t seed = effective_seed(g);
    rep.add("command", std::string("membership"));
    rep.add("input", a.input);
    rep.add("n", static_cast<long>(ps.size()));
    rep.add("m", static_cast<long>(ps.dim()));
    rep.add("epsilon", a.epsilon);
    rep.add("mode", a.mode);
    rep.add("via_vertices", a.via_vertices ? "true" : "false");
    rep.add("seed", seed);

    avta::MembershipResult res;
    if (a.via_vertices) {
        rep.add("gamma", a.gamma);
        res = avta::membership_via_vertices(ps, p, a.gamma, a.epsilon, seed);
    } else {
        avta::SolveOptions opt;
        opt.mode = a.mode == "strict" ? avta::SolveMode::Strict : avta::SolveMode::Plain;
        res = avta::solve_membership(ps, all_indices(ps), p, a.epsilon, opt);
    }

    const bool inside = res.kind == avta::MembershipResult::Kind::ApproxSolution;
    rep.add("result", inside ? "approx_solution" : "witness");
    rep.add("distance", res.distance_to_query);
    rep.add("iterations", res.iterations);
    rep.add("support", res.combination.support());
    std::string weights;
    {
        std::ostringstream ss;
        ss.precision(17);
        for (std::size_t k = 0; k < res.combination.weights().size(); ++k) {
            if (k) ss << ' ';
            ss << res.combination.weights()[k];
        }
        weights = ss.str();
    }
    rep.add("weights", weights);
    if (!inside) {
        const bool valid = avta::validate_witness(ps, all_indices(ps), p, res.combination);
        rep.add("witness_valid", valid ? "true" : "false");
    }
    return inside ? kExitOk : kExitWitness;
}

// ---------------------------------------------------------------------------
// vertices

struct VerticesArgs {
    std::string input;
    double gamma = -1.0;
    int k = -1;
    double t = -1.0;
    bool robust = false;
    double sigma = -1.0;
    double eps_perturb = 0.0;
    int project_rounds = 0;
    avta::Index target_dim = 0;
};

int run_vertices(const VerticesArgs& a, const Options& g, Report& rep) {
    const int modes = (a.gamma >= 0.0) + (a.k >= 0) + (a.t >= 0.0);
    if (modes != 1)
        throw UsageError("vertices: give exactly one of --gamma, --k, --t");
    if (a.robust && a.gamma < 0.0)
        throw UsageError("vertices: --robust modifies gamma mode; give --gamma too");
    if (a.robust && a.sigma < 0.0)
        throw UsageError("vertices: --robust needs --sigma");
    if (a.project_rounds > 0 && a.gamma < 0.0)
        throw UsageError("vertices: --project modifies gamma mode; give --gamma too");
    if (a.robust && a.project_rounds > 0)
        throw UsageError("vertices: --robust and --project are mutually exclusive");

    const avta::PointSet ps(avta::io::read_points_auto(a.input));
    const std::uint64_t seed = effective_seed(g);
    rep.add("command", std::string("vertices"));
    rep.add("input", a.input);
    rep.add("n", static_cast<long>(ps.size()));
    rep.add("m", static_cast<long>(ps.dim()));
    rep.add("seed", seed);

    if (a.robust) {
        const avta::PerturbationReport rob = avta::avta_robust(ps, a.sigma, a.eps_perturb, seed);
        std::vector<avta::Index> verts = rob.pruned_indices;
        std::sort(verts.begin(), verts.end());
        rep.add("mode", std::string("robust"));
        rep.add("sigma", rob.sigma_used);
        rep.add("eps_perturb", rob.epsilon_assumed);
        rep.add("R", rob.R);
        rep.add("superset", rob.superset_indices);
        rep.add("removed", rob.removed_indices);
        rep.add("vertices", verts);
        rep.add("count", static_cast<long>(verts.size()));
        rep.add("total_pivots", rob.total_pivots);
        rep.add("membership_calls", rob.membership_calls);
        return kExitOk;
    }

    if (a.project_rounds > 0) {
        // Majority vote over independently seeded projections; kept indices
        // are those reported in more than half the rounds.
        const avta::VoteResult vote = avta::multi_projection_vote(
            ps, static_cast<int>(ps.size()), a.gamma, a.project_rounds, a.target_dim, seed);
        std::vector<avta::Index> verts;
        for (const auto& [idx, freq] : vote.tally)
            if (2 * freq > a.project_rounds) verts.push_back(idx);
        std::sort(verts.begin(), verts.end());
        rep.add("mode", std::string("project"));
        rep.add("gamma", a.gamma);
        rep.add("rounds", a.project_rounds);
        std::string tally;
        for (const auto& [idx, freq] : vote.tally) {
            if (!tally.empty()) tally += ' ';
            tally += std::to_string(idx) + ":" + std::to_string(freq);
        }
        rep.add("tally", tally);
        rep.add("vertices", verts);
        rep.add("count", static_cast<long>(verts.size()));
        return kExitOk;
    }

    avta::VertexReport vr;
    if (a.gamma >= 0.0) {
        vr = avta::avta_gamma(ps, a.gamma, seed);
        rep.add("mode", std::string("gamma"));
        rep.add("gamma", vr.gamma_used);
    } else if (a.k >= 0) {
        vr = avta::avta_k(ps, a.k, seed);
        rep.add("mode", std::string("k"));
        rep.add("k", a.k);
        rep.add("gamma", vr.gamma_used);
    } else {
        vr = avta::avta_t(ps, a.t, seed);
        rep.add("mode", std::string("t"));
        rep.add("t", vr.t_used);
    }
    rep.add("R", vr.R);
    rep.add("R_approximate", vr.R_approximate ? "true" : "false");
    rep.add("vertices", vr.sorted_vertices());
    rep.add("count", static_cast<long>(vr.vertex_indices.size()));
    rep.add("discovery_order", vr.vertex_indices);
    rep.add("discarded", vr.discarded_points);
    rep.add("total_pivots", vr.total_pivots);
    rep.add("membership_calls", vr.membership_calls);
    for (const auto& cert : vr.certificates) {
        const std::string key = "certificate_" + std::to_string(cert.vertex);
        if (cert.farthest_init) {
            rep.add(key, std::string("farthest_init"));
        } else {
            std::string v = "candidate:" + std::to_string(cert.source_candidate) +
                            " face_size:" + std::to_string(cert.support_set.size());
            rep.add(key, v);
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// lp

struct LpArgs {
    std::string input;
    bool feasibility = false;
    bool optimize = false;
    bool cone = false;
    double gamma = 0.1;
    double epsilon = 1e-6;
    bool dedup = false;
};

int run_lp(const LpArgs& a, const Options& g, Report& rep) {
    if (a.feasibility + a.optimize + a.cone != 1)
        throw UsageError("lp: give exactly one of --feasibility, --optimize, --cone");
    if (!(a.gamma > 0.0 && a.gamma < 1.0))
        throw UsageError("lp: --gamma must be in (0,1)");

    const avta::LinearSystem sys = avta::read_linear_system(a.input, a.optimize);
    const std::uint64_t seed = effective_seed(g);
    rep.add("command", std::string("lp"));
    rep.add("input", a.input);
    rep.add("rows", static_cast<long>(sys.rows()));
    rep.add("cols", static_cast<long>(sys.cols()));
    rep.add("gamma", a.gamma);
    rep.add("seed", seed);

    if (a.cone) {
        avta::ConeResult res;
        try {
            res = avta::cone_feasibility(sys, a.gamma, a.epsilon, seed);
        } catch (const avta::AnchorError& e) {
            throw std::invalid_argument(
                std::string(e.what()) +
                " (hint: the column cone must lie in an open half-space; "
                "reorient or drop opposing columns)");
        }
        rep.add("verdict", res.feasible ? "feasible" : "infeasible");
        rep.add("generators", res.generator_columns);
        rep.add("distance", res.distance);
        return res.feasible ? kExitOk : kExitWitness;
    }

    avta::PruneResult pr;
    if (a.feasibility) {
        pr = avta::prune_columns_feasibility(sys, a.gamma, seed, a.dedup);
        rep.add("verdict", std::string("pruned_feasibility_preserving"));
    } else {
        if (!sys.c) throw std::invalid_argument("lp: --optimize needs a cost row in the file");
        pr = avta::prune_columns_optimization(sys, *sys.c, a.gamma, seed, a.dedup);
        rep.add("verdict", std::string("pruned_optimum_preserving"));
    }
    const std::string reduced_path = a.input + ".reduced.csv";
    avta::write_linear_system(reduced_path, pr.reduced);
    rep.add("kept", pr.kept);
    rep.add("kept_count", static_cast<long>(pr.kept.size()));
    rep.add("reduced_path", reduced_path);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    std::string output;
    int K = 4;
    int n = 20;
    int m = 2;
    std::string dist = "gaussian01";
    std::string noise = "none";
    double noise_param = 0.0;
    bool cone = false;
    double b_scale = 10.0;
};

int run_gen(const GenArgs& a, const Options& g, Report& rep) {
    const std::uint64_t seed = effective_seed(g);
    rep.add("command", std::string("gen"));
    rep.add("seed", seed);

    if (a.cone) {
        const avta::ConeInstance inst =
            avta::gen_cone_instance(a.K, a.n, a.m, a.b_scale, seed);
        avta::write_linear_system(a.output, inst.system);
        avta::io::Metadata meta;
        meta.emplace_back("kind", "cone_instance");
        meta.emplace_back("seed", std::to_string(seed));
        meta.emplace_back("K", std::to_string(a.K));
        meta.emplace_back("n", std::to_string(a.n));
        meta.emplace_back("m", std::to_string(a.m));
        meta.emplace_back("B_scale", std::to_string(a.b_scale));
        avta::io::write_metadata(a.output + ".meta", meta);
        rep.add("output", a.output);
        rep.add("generators", inst.generator_columns);
        return kExitOk;
    }

    avta::InstanceSpec spec;
    spec.K = a.K;
    spec.n = a.n;
    spec.m = a.m;
    spec.seed = seed;
    if (a.dist == "gaussian01") spec.vertex_dist = avta::VertexDist::Gaussian01;
    else if (a.dist == "gaussian10") spec.vertex_dist = avta::VertexDist::Gaussian10;
    else if (a.dist == "uniform01") spec.vertex_dist = avta::VertexDist::Uniform01;
    else throw UsageError("gen: unknown --dist '" + a.dist + "'");
    if (a.noise == "none") spec.noise = avta::NoiseKind::None;
    else if (a.noise == "gaussian") spec.noise = avta::NoiseKind::Gaussian;
    else if (a.noise == "uniform") spec.noise = avta::NoiseKind::UniformBall;
    else throw UsageError("gen: unknown --noise '" + a.noise + "'");
    spec.noise_param = a.noise_param;

    const avta::HullInstance inst = avta::gen_hull_instance(spec);
    avta::write_hull_instance(a.output, spec, inst);
    rep.add("output", a.output);
    rep.add("meta", a.output + ".meta");
    rep.add("true_vertices", inst.true_vertices);
    rep.add("retries", inst.retries);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::string suite;
    std::vector<long> sizes;
    int max_cells = 16;
    std::string out_prefix = "bench";
};

struct BenchTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_bench_outputs(const BenchArgs& a, const BenchTable& table, Report& rep) {
    const std::string csv_path = a.out_prefix + ".csv";
    const std::string plot_path = a.out_prefix + ".plot";
    {
        std::ofstream f(csv_path);
        if (!f) throw std::runtime_error("cannot open " + csv_path + " for writing");
        f.precision(17);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) f << ',';
            f << table.columns[c];
        }
        f << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) f << ',';
                f << row[c];
            }
            f << '\n';
        }
    }
    {
        // one (x,y) series per non-x column, for external plotting
        std::ofstream f(plot_path);
        if (!f) throw std::runtime_error("cannot open " + plot_path + " for writing");
        f.precision(17);
        for (std::size_t c = 1; c < table.columns.size(); ++c) {
            f << "# series " << table.columns[c] << '\n';
            for (const auto& row : table.rows) f << row[0] << ' ' << row[c] << '\n';
            f << '\n';
        }
    }
    rep.add("csv", csv_path);
    rep.add("plot_data", plot_path);
    rep.add("rows", static_cast<long>(table.rows.size()));
    rep.add("note", std::string("absolute times are machine-dependent"));
}

/// One timing sample via steady_clock around a callable.
template <typename F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return elapsed_ms(t0);
}

int run_bench(const BenchArgs& a, const Options& g, Report& rep) {
    if (a.sizes.empty()) throw UsageError("bench: --sizes is required");
    if (static_cast<int>(a.sizes.size()) > a.max_cells)
        throw UsageError("bench: " + std::to_string(a.sizes.size()) +
                         " cells exceed --max-cells " + std::to_string(a.max_cells));
    for (long s : a.sizes)
        if (s < 1) throw UsageError("bench: sizes must be positive");

    const std::uint64_t seed = effective_seed(g);
    rep.add("command", std::string("bench"));
    rep.add("suite", a.suite);
    rep.add("seed", seed);

    BenchTable table;

    if (a.suite == "membership-scaling") {
        // growing n, fixed K: time one interior membership query directly
        // against all points vs. against the AVTA vertex subset end-to-end
        table.columns = {"n", "direct_membership_ms", "avta_end_to_end_ms",
                         "membership_calls", "vertices"};
        for (std::size_t cell = 0; cell < a.sizes.size(); ++cell) {
            const long n = a.sizes[cell];
            avta::InstanceSpec spec;
            spec.K = 10;
            spec.n = static_cast<int>(std::max<long>(n, 10));
            spec.m = 5;
            spec.seed = cell_seed(seed, cell);
            const avta::HullInstance inst = avta::gen_hull_instance(spec);
            avta::Vector q = avta::Vector::Zero(5);
            for (avta::Index i = 0; i < inst.points.size(); ++i) q += inst.points.point(i);
            q /= static_cast<double>(inst.points.size()); // centroid: interior

            const auto all = all_indices(inst.points);
            const double direct = time_ms([&] {
                (void)avta::solve_membership(inst.points, all, q, 0.05);
            });
            const double gamma = safe_gamma(inst);
            long calls = 0, verts = 0;
            const double end_to_end = time_ms([&] {
                const avta::VertexReport vr = avta::avta_gamma(inst.points, gamma, spec.seed);
                calls = vr.membership_calls;
                verts = static_cast<long>(vr.vertex_indices.size());
                avta::SolveOptions opt;
                opt.R_override = vr.R;
                (void)avta::solve_membership(inst.points, vr.vertex_indices, q, 0.05, opt);
            });
            table.rows.push_back({static_cast<double>(n), direct, end_to_end,
                                  static_cast<double>(calls), static_cast<double>(verts)});
        }
    } else if (a.suite == "feasibility-amortization") {
        // sizes are query counts against one fixed large instance: direct
        // solves scale with the count, prune-once-then-query barely moves
        table.columns = {"queries", "direct_total_ms", "prune_then_query_total_ms"};
        avta::InstanceSpec spec;
        spec.K = 10;
        spec.n = 20000;
        spec.m = 8;
        spec.seed = cell_seed(seed, 0);
        const avta::HullInstance inst = avta::gen_hull_instance(spec);
        const auto all = all_indices(inst.points);
        const double gamma = safe_gamma(inst);
        const long max_q = *std::max_element(a.sizes.begin(), a.sizes.end());
        std::vector<avta::Vector> queries;
        {
            std::mt19937_64 rng(cell_seed(seed, 1));
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (long q = 0; q < max_q; ++q) {
                avta::Vector w(spec.K);
                for (int k = 0; k < spec.K; ++k) w(k) = unif(rng);
                w /= w.sum();
                avta::Vector pt = avta::Vector::Zero(spec.m);
                for (int k = 0; k < spec.K; ++k) pt += w(k) * inst.points.point(k);
                queries.push_back(pt);
            }
        }
        // the prune is one shared upfront cost, so time it once (best of
        // three) and charge every row the same amount plus its own queries
        avta::VertexReport vr;
        double prune_ms = std::numeric_limits<double>::infinity();
        for (int rep_i = 0; rep_i < 3; ++rep_i) {
            prune_ms = std::min(prune_ms, time_ms([&] {
                vr = avta::avta_gamma(inst.points, gamma, spec.seed);
            }));
        }
        avta::SolveOptions opt;
        opt.R_override = vr.R;
        for (long nq : a.sizes) {
            const double direct = time_ms([&] {
                for (long q = 0; q < nq; ++q)
                    (void)avta::solve_membership(inst.points, all, queries[q], 0.1);
            });
            const double query_ms = time_ms([&] {
                for (long q = 0; q < nq; ++q)
                    (void)avta::solve_membership(inst.points, vr.vertex_indices,
                                                 queries[q], 0.1, opt);
            });
            table.rows.push_back({static_cast<double>(nq), direct, prune_ms + query_ms});
        }
    } else if (a.suite == "vertex-scaling") {
        // fixed K, growing n: the membership-call counter should grow with n
        // while the reported vertex count stays K
        table.columns = {"n", "avta_ms", "membership_calls", "vertices"};
        for (std::size_t cell = 0; cell < a.sizes.size(); ++cell) {
            const long n = a.sizes[cell];
            avta::InstanceSpec spec;
            spec.K = 8;
            spec.n = static_cast<int>(std::max<long>(n, 8));
            spec.m = 4;
            spec.seed = cell_seed(seed, cell);
            const avta::HullInstance inst = avta::gen_hull_instance(spec);
            const double gamma = safe_gamma(inst);
            long calls = 0, verts = 0;
            const double ms = time_ms([&] {
                const avta::VertexReport vr = avta::avta_gamma(inst.points, gamma, spec.seed);
                calls = vr.membership_calls;
                verts = static_cast<long>(vr.vertex_indices.size());
            });
            table.rows.push_back({static_cast<double>(n), ms, static_cast<double>(calls),
                                  static_cast<double>(verts)});
        }
    } else {
        throw UsageError("bench: unknown suite '" + a.suite +
                         "' (membership-scaling | feasibility-amortization | vertex-scaling)");
    }

    write_bench_outputs(a, table, rep);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust convex hull vertex enumeration toolkit"};
    app.require_subcommand(1);

    Options g;
    app.add_flag("--json", g.json, "emit the report as a single JSON object");
    app.add_option("--run-log", g.run_log, "append-only run record file ('' disables)");
    auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed (default: AVTA_SEED env or 0)");

    MembershipArgs ma;
    auto* mem = app.add_subcommand("membership", "hull membership query with certificate");
    mem->add_option("input", ma.input, "point set file (CSV or .bin)")->required();
    mem->add_option("--point", ma.point_inline, "inline query point, comma-separated");
    mem->add_option("--point-file", ma.point_file, "CSV file with the query point (one row)");
    mem->add_option("--epsilon", ma.epsilon, "relative accuracy in (0,1)")->required();
    mem->add_option("--mode", ma.mode, "pivot mode")->check(CLI::IsMember({"plain", "strict"}));
    mem->add_flag("--via-vertices", ma.via_vertices, "query against the AVTA vertex subset");
    mem->add_option("--gamma", ma.gamma, "robustness parameter for --via-vertices");

    VerticesArgs va;
    auto* ver = app.add_subcommand("vertices", "vertex enumeration");
    ver->add_option("input", va.input, "point set file (CSV or .bin)")->required();
    ver->add_option("--gamma", va.gamma, "gamma mode: robustness level in (0,1)");
    ver->add_option("--k", va.k, "k mode: search until at least K vertices");
    ver->add_option("--t", va.t, "t mode: t-approximation level in (0,1)");
    ver->add_flag("--robust", va.robust, "two-phase recovery on perturbed data");
    ver->add_option("--sigma", va.sigma, "weak-robustness level for --robust");
    ver->add_option("--eps-perturb", va.eps_perturb, "assumed perturbation level");
    ver->add_option("--project", va.project_rounds, "vote over this many random projections");
    ver->add_option("--target-dim", va.target_dim, "projection target dimension (0: auto)");

    LpArgs la;
    auto* lp = app.add_subcommand("lp", "column pruning and cone feasibility");
    lp->add_option("input", la.input, "linear system file")->required();
    lp->add_flag("--feasibility", la.feasibility, "feasibility-preserving column pruning");
    lp->add_flag("--optimize", la.optimize, "optimum-preserving pruning (needs a cost row)");
    lp->add_flag("--cone", la.cone, "decide b in cone(columns)");
    lp->add_option("--gamma", la.gamma, "pruning robustness level");
    lp->add_option("--epsilon", la.epsilon, "membership accuracy for --cone");
    lp->add_flag("--dedup", la.dedup, "collapse duplicate columns first");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "deterministic instance generation");
    gen->add_option("output", ga.output, "output file (.csv or .bin)")->required();
    gen->add_option("--K", ga.K, "intended vertex count");
    gen->add_option("--n", ga.n, "total point/column count");
    gen->add_option("--m", ga.m, "ambient dimension");
    gen->add_option("--dist", ga.dist, "vertex distribution")
        ->check(CLI::IsMember({"gaussian01", "gaussian10", "uniform01"}));
    gen->add_option("--noise", ga.noise, "noise kind")
        ->check(CLI::IsMember({"none", "gaussian", "uniform"}));
    gen->add_option("--noise-param", ga.noise_param, "noise scale");
    gen->add_flag("--cone", ga.cone, "generate a cone system instead of a hull instance");
    gen->add_option("--b-scale", ga.b_scale, "coefficient scale for redundant cone columns");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "benchmark table + plot-data emission");
    bench->add_option("suite", ba.suite, "membership-scaling | feasibility-amortization | vertex-scaling")
        ->required();
    bench->add_option("--sizes", ba.sizes, "comma-separated cell sizes")->delimiter(',')->required();
    bench->add_option("--max-cells", ba.max_cells, "refuse suites with more cells than this");
    bench->add_option("--out", ba.out_prefix, "output file prefix");

    // allow the global flags (--json, --seed, --run-log) after the subcommand
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    g.seed_given = seed_opt->count() > 0;

    Report rep;
    int code = kExitInternal;
    const auto t0 = std::chrono::steady_clock::now();
    std::string command;
    try {
        if (*mem) {
            command = "membership";
            code = run_membership(ma, g, rep);
        } else if (*ver) {
            command = "vertices";
            code = run_vertices(va, g, rep);
        } else if (*lp) {
            command = "lp";
            code = run_lp(la, g, rep);
        } else if (*gen) {
            command = "gen";
            code = run_gen(ga, g, rep);
        } else if (*bench) {
            command = "bench";
            code = run_bench(ba, g, rep);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const avta::GammaFloorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }

    const double wall = elapsed_ms(t0);
    rep.add("wall_time_ms", wall);
    std::cout << (g.json ? rep.json() : rep.text());
    append_run_record(g, command, join_args(argc, argv), effective_seed(g), wall, rep);
    return code;
}
