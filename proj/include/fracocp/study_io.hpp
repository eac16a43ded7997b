#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "fracocp/grid.hpp"
#include "fracocp/ocp.hpp"
#include "fracocp/study.hpp"

namespace fracocp {

/// Scientific notation with six significant digits, e.g. 1.70000e-06.
std::string format_float(double v);

/// "<study>_<example>_<scheme>.csv"
std::string csv_name(const ErrorStudy& study);

/// Header "alpha,variable,<level>...,eoc"; one row per (alpha, variable). The eoc
/// column holds the finest-pair rate.
void write_csv(const ErrorStudy& study, std::ostream& os);
void emit_csv(const ErrorStudy& study, const std::filesystem::path& file);

/// key=value sidecar describing how the study was produced.
void emit_metadata(const ErrorStudy& study, double T, const std::filesystem::path& file);

/// Writes U.csv, Q.csv and Z.csv into `dir`, each with rows "x,t,value" over interior nodes.
/// Q^{n-1} is stamped with t_{n-1}.
void emit_profiles(const OcpSolution& sol, const TimeGrid& time, const Mesh1D& mesh, const std::filesystem::path& dir);

/// Flat "key = value" file, '#' comments. Unknown keys are an error.
std::map<std::string, std::string> parse_config(std::istream& is);
std::map<std::string, std::string> load_config(const std::filesystem::path& file);

/// Overwrites the fields named in `kv`.
void apply_config(StudyConfig& cfg, const std::map<std::string, std::string>& kv);

}  // namespace fracocp
