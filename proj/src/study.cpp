#include "fracocp/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "fracocp/errors.hpp"

namespace fracocp {

Example parse_example(std::string_view s) {
    if (s == "a" || s == "A") return Example::A;
    if (s == "b" || s == "B") return Example::B;
    throw InvalidArgument("unknown example '" + std::string(s) + "' (expected a or b)");
}

StudyKind parse_study(std::string_view s) {
    if (s == "spatial") return StudyKind::Spatial;
    if (s == "temporal-l2" || s == "temporal_l2") return StudyKind::TemporalL2;
    if (s == "temporal-linf" || s == "temporal_linf") return StudyKind::TemporalLinf;
    throw InvalidArgument("unknown study '" + std::string(s) + "'");
}

Scale parse_scale(std::string_view s) {
    if (s == "desk") return Scale::Desk;
    if (s == "paper") return Scale::Paper;
    throw InvalidArgument("unknown scale '" + std::string(s) + "' (expected desk or paper)");
}

SpatialNorm parse_spatial_norm(std::string_view s) {
    if (s == "nodal") return SpatialNorm::Nodal;
    if (s == "prolonged") return SpatialNorm::Prolonged;
    throw InvalidArgument("unknown spatial norm '" + std::string(s) + "' (expected nodal or prolonged)");
}

std::string_view to_string(Example e) { return e == Example::A ? "a" : "b"; }

std::string_view to_string(StudyKind k) {
    switch (k) {
        case StudyKind::Spatial: return "spatial";
        case StudyKind::TemporalL2: return "temporal-l2";
        case StudyKind::TemporalLinf: return "temporal-linf";
    }
    return "?";
}

std::string_view to_string(Scale s) { return s == Scale::Desk ? "desk" : "paper"; }

std::string_view to_string(SpatialNorm n) { return n == SpatialNorm::Nodal ? "nodal" : "prolonged"; }

StudyConfig preset(StudyKind kind, Scale scale) {
    StudyConfig cfg;
    cfg.study = kind;
    if (kind == StudyKind::Spatial) {
        cfg.reference = 1280;
        if (scale == Scale::Desk) {
            cfg.levels = {10, 20, 40, 80, 160};
            cfg.fixed_resolution = 1000;
        } else {
            cfg.levels = {10, 20, 40, 80, 160, 320};
            cfg.fixed_resolution = 10000;
        }
    } else {
        cfg.fixed_resolution = 50;
        cfg.reference = 64000;
        if (scale == Scale::Desk) {
            cfg.levels = {250, 500, 1000, 2000, 4000};
        } else {
            cfg.levels = {1000, 2000, 4000, 8000, 16000, 32000};
        }
    }
    return cfg;
}

void validate(const StudyConfig& cfg) {
    if (cfg.alphas.empty()) throw InvalidArgument("study needs at least one alpha");
    for (double a : cfg.alphas) {
        if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
    }
    if (cfg.levels.empty()) throw InvalidArgument("study needs at least one level");
    for (int l : cfg.levels) {
        if (l < 1) throw InvalidArgument("levels must be positive");
        if (l >= cfg.reference) throw InvalidArgument("reference resolution must be finer than every level");
        nesting(l, cfg.reference);
    }
    if (!std::is_sorted(cfg.levels.begin(), cfg.levels.end())) throw InvalidArgument("levels must be increasing");
    if (cfg.fixed_resolution < 1) throw InvalidArgument("fixed_resolution must be positive");
    if (!(cfg.gamma > 0.0) || !(cfg.a < cfg.b) || !(cfg.T > 0.0)) {
        throw InvalidArgument("need gamma > 0, a < b and T > 0");
    }
    if (cfg.workers < 1) throw InvalidArgument("workers must be positive");
}

std::function<double(double, double)> example_source(Example e) {
    if (e == Example::A) return {};
    return [](double x, double t) { return (x > 0.5 && x < 1.0) ? 1.0 + std::cos(t) : 0.0; };
}

std::function<double(double, double)> example_target(Example e) {
    const double c = e == Example::A ? 1.0 : 5.0;
    return [c](double x, double t) { return c * std::exp(t) * x * (1.0 - x); };
}

OcpProblem example_problem(Example e, double alpha, Scheme scheme, const TimeGrid& time, const Mesh1D& mesh,
                           double gamma, double a, double b) {
    OcpProblem p;
    p.gamma = gamma;
    p.lower = a;
    p.upper = b;
    p.source = example_source(e);
    p.target = example_target(e);
    p.time = time;
    p.mesh = mesh;
    p.scheme = scheme;
    p.alpha = alpha;
    return p;
}

VariableErrors spatial_errors(const OcpSolution& coarse, const Mesh1D& coarse_mesh, const OcpSolution& ref,
                              const Mesh1D& ref_mesh, SpatialNorm norm) {
    const int N = coarse.control.entries();
    if (ref.control.entries() != N) throw NestingError("spatial comparison needs identical time grids");
    nesting(coarse_mesh, ref_mesh);
    const int dim = coarse_mesh.interior();
    std::vector<double> d(dim);
    auto diff = [&](std::span<const double> c, std::span<const double> f) {
        if (norm == SpatialNorm::Prolonged) return l2_diff_nested(coarse_mesh, c, ref_mesh, f);
        const NodalFn r = restrict_nodes(ref_mesh, f, coarse_mesh);
        for (int i = 0; i < dim; ++i) d[i] = c[i] - r[i];
        return l2_norm(coarse_mesh, d);
    };
    VariableErrors e;
    for (int n = 1; n <= N; ++n) {
        e.u = std::max(e.u, diff(coarse.state[n], ref.state[n]));
        e.q = std::max(e.q, diff(coarse.control[n - 1], ref.control[n - 1]));
        e.z = std::max(e.z, diff(coarse.adjoint[n - 1], ref.adjoint[n - 1]));
    }
    return e;
}

TemporalErrors temporal_errors(const OcpSolution& coarse, const TimeGrid& coarse_time, const OcpSolution& ref,
                               const TimeGrid& ref_time, const Mesh1D& mesh) {
    const NestingMap map = nesting(coarse_time, ref_time);
    const int N = coarse_time.N;
    const int dim = mesh.interior();
    std::vector<double> d(dim);
    auto diff_norm = [&](std::span<const double> a, std::span<const double> b) {
        for (int i = 0; i < dim; ++i) d[i] = a[i] - b[i];
        return l2_norm(mesh, d);
    };
    TemporalErrors e;
    for (int n = 1; n <= N; ++n) {
        const int r = map.fine_index(n);
        const int r0 = map.fine_index(n - 1);
        const double eu = diff_norm(coarse.state[n], ref.state[r]);
        const double eq = diff_norm(coarse.control[n - 1], ref.control[r0]);
        const double ez = diff_norm(coarse.adjoint[n - 1], ref.adjoint[r0]);
        e.l2.u += eu * eu;
        e.l2.q += eq * eq;
        e.l2.z += ez * ez;
        e.linf.u = std::max(e.linf.u, eu);
        e.linf.q = std::max(e.linf.q, eq);
        e.linf.z = std::max(e.linf.z, ez);
    }
    e.l2.u = std::sqrt(coarse_time.tau * e.l2.u);
    e.l2.q = std::sqrt(coarse_time.tau * e.l2.q);
    e.l2.z = std::sqrt(coarse_time.tau * e.l2.z);
    return e;
}

const ErrorRow& ErrorStudy::row(double alpha, char variable) const {
    for (const auto& r : rows) {
        if (std::abs(r.alpha - alpha) < 1e-12 && r.variable == variable) return r;
    }
    throw InvalidArgument("no row for alpha " + std::to_string(alpha) + " variable " + variable);
}

double eoc(double coarse_error, double fine_error, int coarse_level, int fine_level) {
    if (fine_level != 2 * coarse_level) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse_error / fine_error);
}

void run_jobs(int count, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

namespace {

struct Job {
    int alpha_index;
    int level;  // resolution being solved; the reference is one of these
};

// Solves every (alpha, resolution) pair, reference included, and keeps the results by key.
std::map<std::pair<int, int>, OcpSolution> solve_all(const StudyConfig& cfg, bool spatial,
                                                     const ProgressFn& progress) {
    std::vector<Job> jobs;
    for (int a = 0; a < static_cast<int>(cfg.alphas.size()); ++a) {
        jobs.push_back({a, cfg.reference});
        for (int l : cfg.levels) jobs.push_back({a, l});
    }
    std::map<std::pair<int, int>, OcpSolution> results;
    std::mutex results_mutex;
    run_jobs(static_cast<int>(jobs.size()), cfg.workers, [&](int i) {
        const Job& job = jobs[i];
        const int M = spatial ? job.level : cfg.fixed_resolution;
        const int N = spatial ? cfg.fixed_resolution : job.level;
        const double alpha = cfg.alphas[job.alpha_index];
        const OcpProblem prob = example_problem(cfg.example, alpha, cfg.scheme, make_time_grid(N, cfg.T),
                                                make_mesh(M), cfg.gamma, cfg.a, cfg.b);
        OcpSolution sol = solve_ocp(prob);
        if (progress) {
            std::ostringstream msg;
            msg << "alpha=" << alpha << " M=" << M << " N=" << N << " iterations=" << sol.iterations;
            progress(msg.str());
        }
        std::lock_guard lock(results_mutex);
        results.emplace(std::make_pair(job.alpha_index, job.level), std::move(sol));
    });
    return results;
}

ErrorStudy empty_study(const StudyConfig& cfg, StudyKind kind) {
    ErrorStudy s;
    s.kind = kind;
    s.example = cfg.example;
    s.scheme = cfg.scheme;
    s.levels = cfg.levels;
    s.reference = cfg.reference;
    s.fixed_resolution = cfg.fixed_resolution;
    s.spatial_norm = cfg.spatial_norm;
    return s;
}

void fill_eocs(ErrorStudy& s) {
    for (auto& row : s.rows) {
        row.eoc.clear();
        for (std::size_t k = 0; k + 1 < row.errors.size(); ++k) {
            row.eoc.push_back(eoc(row.errors[k], row.errors[k + 1], s.levels[k], s.levels[k + 1]));
        }
    }
}

void add_rows(ErrorStudy& s, double alpha, const std::vector<VariableErrors>& per_level) {
    for (char v : {'u', 'q', 'z'}) {
        ErrorRow row{alpha, v, {}, {}};
        for (const auto& e : per_level) row.errors.push_back(v == 'u' ? e.u : v == 'q' ? e.q : e.z);
        s.rows.push_back(std::move(row));
    }
}

}  // namespace

ErrorStudy run_spatial_study(const StudyConfig& cfg, const ProgressFn& progress) {
    if (cfg.study != StudyKind::Spatial) throw InvalidArgument("run_spatial_study needs study = spatial");
    validate(cfg);
    const auto results = solve_all(cfg, true, progress);
    ErrorStudy s = empty_study(cfg, StudyKind::Spatial);
    const Mesh1D ref_mesh = make_mesh(cfg.reference);
    for (int a = 0; a < static_cast<int>(cfg.alphas.size()); ++a) {
        const OcpSolution& ref = results.at({a, cfg.reference});
        std::vector<VariableErrors> per_level;
        for (int l : cfg.levels) per_level.push_back(spatial_errors(results.at({a, l}), make_mesh(l), ref, ref_mesh, cfg.spatial_norm));
        add_rows(s, cfg.alphas[a], per_level);
    }
    fill_eocs(s);
    return s;
}

TemporalStudies run_temporal_studies(const StudyConfig& cfg, const ProgressFn& progress) {
    if (cfg.study == StudyKind::Spatial) throw InvalidArgument("run_temporal_studies needs a temporal study");
    validate(cfg);
    const auto results = solve_all(cfg, false, progress);
    TemporalStudies out{empty_study(cfg, StudyKind::TemporalL2), empty_study(cfg, StudyKind::TemporalLinf)};
    const Mesh1D mesh = make_mesh(cfg.fixed_resolution);
    const TimeGrid ref_time = make_time_grid(cfg.reference, cfg.T);
    for (int a = 0; a < static_cast<int>(cfg.alphas.size()); ++a) {
        const OcpSolution& ref = results.at({a, cfg.reference});
        std::vector<VariableErrors> l2, linf;
        for (int l : cfg.levels) {
            const auto e = temporal_errors(results.at({a, l}), make_time_grid(l, cfg.T), ref, ref_time, mesh);
            l2.push_back(e.l2);
            linf.push_back(e.linf);
        }
        add_rows(out.l2, cfg.alphas[a], l2);
        add_rows(out.linf, cfg.alphas[a], linf);
    }
    fill_eocs(out.l2);
    fill_eocs(out.linf);
    return out;
}

ErrorStudy run_temporal_study(const StudyConfig& cfg, const ProgressFn& progress) {
    auto both = run_temporal_studies(cfg, progress);
    return cfg.study == StudyKind::TemporalL2 ? std::move(both.l2) : std::move(both.linf);
}

ErrorStudy run_study(const StudyConfig& cfg, const ProgressFn& progress) {
    return cfg.study == StudyKind::Spatial ? run_spatial_study(cfg, progress) : run_temporal_study(cfg, progress);
}

}  // namespace fracocp
