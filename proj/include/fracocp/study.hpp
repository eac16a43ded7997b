#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fracocp/fracweights.hpp"
#include "fracocp/grid.hpp"
#include "fracocp/ocp.hpp"

namespace fracocp {

/// (a): f = 0, u_d = e^t x(1-x).   (b): f = (1 + cos t) 1_{(1/2,1)}(x), u_d = 5 e^t x(1-x).
enum class Example { A, B };
enum class StudyKind { Spatial, TemporalL2, TemporalLinf };
enum class Scale { Desk, Paper };
/// How coarse and reference solutions on nested meshes are compared.
enum class SpatialNorm {
    Nodal,      ///< reference sampled at the coarse nodes, L2 norm on the coarse mesh
    Prolonged,  ///< coarse solution prolonged, L2 norm on the reference mesh
};

Example parse_example(std::string_view s);
StudyKind parse_study(std::string_view s);
Scale parse_scale(std::string_view s);
SpatialNorm parse_spatial_norm(std::string_view s);
std::string_view to_string(Example e);
std::string_view to_string(StudyKind k);
std::string_view to_string(Scale s);
std::string_view to_string(SpatialNorm n);

struct StudyConfig {
    Example example = Example::A;
    Scheme scheme = Scheme::L1;
    std::vector<double> alphas{0.4, 0.6, 0.8};
    StudyKind study = StudyKind::Spatial;
    std::vector<int> levels;    ///< M values (spatial) or N values (temporal)
    int reference = 0;          ///< M_ref (spatial) or N_ref (temporal)
    int fixed_resolution = 0;   ///< N for spatial studies, M for temporal ones
    SpatialNorm spatial_norm = SpatialNorm::Nodal;
    double gamma = 1.0;
    double a = 0.0;
    double b = 0.05;
    double T = 0.1;
    std::string out = "results";
    int workers = 1;
};

/// Ladders for the two scales. Spatial runs use the same N for coarse and reference solves.
StudyConfig preset(StudyKind kind, Scale scale);

/// Throws InvalidArgument / NestingError for inconsistent ladders or parameters.
void validate(const StudyConfig& cfg);

std::function<double(double, double)> example_source(Example e);
std::function<double(double, double)> example_target(Example e);

OcpProblem example_problem(Example e, double alpha, Scheme scheme, const TimeGrid& time, const Mesh1D& mesh,
                           double gamma = 1.0, double a = 0.0, double b = 0.05);

struct VariableErrors {
    double u = 0.0;
    double q = 0.0;
    double z = 0.0;
};

/// max_n || v_h(t_n) - v_ref(t_n) ||_{L2} on a shared time grid.
VariableErrors spatial_errors(const OcpSolution& coarse, const Mesh1D& coarse_mesh, const OcpSolution& ref,
                              const Mesh1D& ref_mesh, SpatialNorm norm = SpatialNorm::Nodal);

struct TemporalErrors {
    VariableErrors l2;    ///< (sum_n tau ||e^n||^2)^{1/2}
    VariableErrors linf;  ///< max_n ||e^n||
};

/// Errors on a shared mesh; coarse step n is compared with reference step ratio * n.
/// U is compared at n = 1..N, Q and Z at n - 1 = 0..N-1.
TemporalErrors temporal_errors(const OcpSolution& coarse, const TimeGrid& coarse_time, const OcpSolution& ref,
                               const TimeGrid& ref_time, const Mesh1D& mesh);

struct ErrorRow {
    double alpha = 0.0;
    char variable = 'u';
    std::vector<double> errors;  ///< one per level
    std::vector<double> eoc;     ///< one per adjacent level pair; NaN for non-dyadic pairs
};

struct ErrorStudy {
    StudyKind kind = StudyKind::Spatial;
    Example example = Example::A;
    Scheme scheme = Scheme::L1;
    std::vector<int> levels;
    int reference = 0;
    int fixed_resolution = 0;
    SpatialNorm spatial_norm = SpatialNorm::Nodal;
    std::vector<ErrorRow> rows;  ///< ordered by alpha, then u, q, z

    const ErrorRow& row(double alpha, char variable) const;
};

/// log2(coarse / fine) when fine_level == 2 * coarse_level, NaN otherwise.
double eoc(double coarse_error, double fine_error, int coarse_level, int fine_level);

using ProgressFn = std::function<void(const std::string&)>;

ErrorStudy run_spatial_study(const StudyConfig& cfg, const ProgressFn& progress = {});

struct TemporalStudies {
    ErrorStudy l2;
    ErrorStudy linf;
};
/// Both temporal norms from one set of solves.
TemporalStudies run_temporal_studies(const StudyConfig& cfg, const ProgressFn& progress = {});
ErrorStudy run_temporal_study(const StudyConfig& cfg, const ProgressFn& progress = {});
ErrorStudy run_study(const StudyConfig& cfg, const ProgressFn& progress = {});

/// Runs fn(0..count-1) on up to `workers` threads; rethrows the first failure.
void run_jobs(int count, int workers, const std::function<void(int)>& fn);

}  // namespace fracocp
