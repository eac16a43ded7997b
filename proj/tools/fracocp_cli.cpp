// Command-line driver: single forward solves, single control solves and convergence studies.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fracocp/fracocp.hpp"

using namespace fracocp;

namespace {

struct CommonArgs {
    std::string example = "a";
    std::string scheme = "l1";
    double alpha = 0.5;
    int N = 1000;
    int M = 50;
    double T = 0.1;
    std::string out;
};

void add_common(CLI::App* app, CommonArgs& args) {
    app->add_option("--example", args.example, "example data set (a|b)")->check(CLI::IsMember({"a", "b"}));
    app->add_option("--scheme", args.scheme, "time stepping (l1|cq)")->check(CLI::IsMember({"l1", "cq"}));
    app->add_option("--alpha", args.alpha, "fractional order in (0,1]");
    app->add_option("--N", args.N, "time steps");
    app->add_option("--M", args.M, "spatial subintervals");
    app->add_option("--T", args.T, "final time");
    app->add_option("--out", args.out, "directory for profile files");
}

int run_forward(const CommonArgs& args, bool manufactured, const std::string& kind) {
    const TimeGrid time = make_time_grid(args.N, args.T);
    const Mesh1D mesh = make_mesh(args.M);
    const auto w = make_weights(parse_scheme(args.scheme), args.alpha, args.N);
    SourceSpec source{kind == "averaged" ? SourceKind::Averaged : SourceKind::Pointwise, {}};
    verify::ManufacturedCase mc;
    if (manufactured) {
        mc = verify::manufactured_t2(args.alpha);
        source.f = mc.source;
    } else {
        source.f = example_source(parse_example(args.example));
    }
    const Trajectory U = solve_forward(w, time, mesh, source);

    double max_norm = 0.0;
    for (int n = 0; n <= time.N; ++n) max_norm = std::max(max_norm, l2_norm(mesh, U[n]));
    std::cout << "max_n ||U^n||_L2 = " << format_float(max_norm) << '\n';
    if (manufactured) {
        double err = 0.0;
        for (int n = 1; n <= time.N; ++n) {
            const double t = time.t(n);
            auto exact = interpolate(mesh, [&](double x) { return mc.u_exact(x, t); });
            for (int k = 0; k < mesh.interior(); ++k) exact[k] -= U[n][k];
            err = std::max(err, l2_norm(mesh, exact));
        }
        std::cout << "max_n ||U^n - I_h u(t_n)||_L2 = " << format_float(err) << '\n';
    }
    if (!args.out.empty()) {
        OcpSolution sol;
        sol.state = U;
        sol.adjoint = Trajectory(time.N + 1, mesh.interior());
        sol.control = Trajectory(time.N, mesh.interior());
        emit_profiles(sol, time, mesh, args.out);
        std::cout << "profiles written to " << args.out << '\n';
    }
    return 0;
}

struct OcpArgs {
    double gamma = 1.0, a = 0.0, b = 0.05, tol = 1e-10, damping = 1.0;
    int max_iter = 200;
};

int run_solve_ocp(const CommonArgs& args, const OcpArgs& o) {
    const OcpProblem prob = example_problem(parse_example(args.example), args.alpha, parse_scheme(args.scheme),
                                            make_time_grid(args.N, args.T), make_mesh(args.M), o.gamma, o.a, o.b);
    OcpOptions opts;
    opts.tol = o.tol;
    opts.max_iter = o.max_iter;
    opts.damping = o.damping;
    const auto start = std::chrono::steady_clock::now();
    const OcpSolution sol = solve_ocp(prob, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "iterations   " << sol.iterations << '\n'
              << "residual     " << format_float(sol.residual) << '\n'
              << "kkt residual " << format_float(kkt_residual(prob, sol)) << '\n'
              << "objective    " << format_float(sol.objective) << '\n'
              << "seconds      " << secs << '\n';
    if (!args.out.empty()) {
        emit_profiles(sol, prob.time, prob.mesh, args.out);
        std::cout << "profiles written to " << args.out << '\n';
    }
    return 0;
}

std::vector<double> parse_alpha_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

void print_study(const ErrorStudy& s) {
    std::cout << to_string(s.kind) << " errors, example (" << to_string(s.example) << "), scheme "
              << to_string(s.scheme) << ", reference " << s.reference << '\n';
    std::cout << "alpha var";
    for (int l : s.levels) std::cout << "  " << std::setw(11) << l;
    std::cout << "   rate\n";
    for (const auto& r : s.rows) {
        std::cout << std::fixed << std::setprecision(1) << std::setw(5) << r.alpha << "  " << r.variable << ' ';
        std::cout.unsetf(std::ios::floatfield);
        for (double e : r.errors) std::cout << "  " << std::setw(11) << format_float(e);
        std::cout << "   " << std::fixed << std::setprecision(2) << (r.eoc.empty() ? NAN : r.eoc.back()) << '\n';
        std::cout.unsetf(std::ios::floatfield);
        std::cout << std::setprecision(6);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal control of subdiffusion: solvers and convergence studies"};
    app.require_subcommand(1);

    CommonArgs fwd_args;
    bool manufactured = false;
    std::string source_kind = "pointwise";
    auto* fwd = app.add_subcommand("forward", "solve the state equation for an example source");
    add_common(fwd, fwd_args);
    fwd->add_flag("--manufactured", manufactured, "use u = t^2 sin(pi x) and report the error");
    fwd->add_option("--source-kind", source_kind, "pointwise|averaged")
        ->check(CLI::IsMember({"pointwise", "averaged"}));

    CommonArgs ocp_args;
    OcpArgs ocp;
    auto* solve = app.add_subcommand("solve-ocp", "solve the discrete optimality system");
    add_common(solve, ocp_args);
    solve->add_option("--gamma", ocp.gamma, "control penalty");
    solve->add_option("--a", ocp.a, "lower control bound");
    solve->add_option("--b", ocp.b, "upper control bound");
    solve->add_option("--tol", ocp.tol, "relative fixed-point tolerance");
    solve->add_option("--max-iter", ocp.max_iter, "fixed-point iteration limit");
    solve->add_option("--damping", ocp.damping, "fixed-point damping in (0,1]");

    std::string st_example, st_scheme, st_study, st_alpha, st_scale = "desk", st_out, st_config, st_norm;
    int st_workers = 1;
    auto* study = app.add_subcommand("study", "run a convergence study and write CSV tables");
    auto* o_example = study->add_option("--example", st_example, "a|b")->check(CLI::IsMember({"a", "b"}));
    auto* o_scheme = study->add_option("--scheme", st_scheme, "l1|cq")->check(CLI::IsMember({"l1", "cq"}));
    auto* o_study = study->add_option("--study", st_study, "spatial|temporal-l2|temporal-linf")
                        ->check(CLI::IsMember({"spatial", "temporal-l2", "temporal-linf"}));
    auto* o_alpha = study->add_option("--alpha", st_alpha, "comma separated orders, e.g. 0.4,0.6,0.8");
    study->add_option("--scale", st_scale, "desk|paper")->check(CLI::IsMember({"desk", "paper"}));
    auto* o_out = study->add_option("--out", st_out, "output directory");
    auto* o_workers = study->add_option("--workers", st_workers, "concurrent solves")->check(CLI::PositiveNumber);
    auto* o_norm = study->add_option("--spatial-norm", st_norm, "nodal|prolonged")
                       ->check(CLI::IsMember({"nodal", "prolonged"}));
    study->add_option("--config", st_config, "key = value configuration file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fwd) return run_forward(fwd_args, manufactured, source_kind);
        if (*solve) return run_solve_ocp(ocp_args, ocp);

        std::map<std::string, std::string> kv;
        if (!st_config.empty()) kv = load_config(st_config);
        StudyKind kind = StudyKind::Spatial;
        if (o_study->count() > 0) {
            kind = parse_study(st_study);
        } else if (kv.contains("study")) {
            kind = parse_study(kv.at("study"));
        }
        StudyConfig cfg = preset(kind, parse_scale(st_scale));
        apply_config(cfg, kv);
        cfg.study = kind;
        if (o_example->count() > 0) cfg.example = parse_example(st_example);
        if (o_scheme->count() > 0) cfg.scheme = parse_scheme(st_scheme);
        if (o_alpha->count() > 0) cfg.alphas = parse_alpha_list(st_alpha);
        if (o_out->count() > 0) cfg.out = st_out;
        if (o_workers->count() > 0) cfg.workers = st_workers;
        if (o_norm->count() > 0) cfg.spatial_norm = parse_spatial_norm(st_norm);

        const auto start = std::chrono::steady_clock::now();
        const ErrorStudy result =
            run_study(cfg, [](const std::string& msg) { std::cerr << "  solved " << msg << '\n'; });
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::filesystem::path file = std::filesystem::path(cfg.out) / csv_name(result);
        emit_csv(result, file);
        auto meta = file;
        emit_metadata(result, cfg.T, meta.replace_extension(".meta"));
        print_study(result);
        std::cout << "wrote " << file.string() << " (" << secs << " s)\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
