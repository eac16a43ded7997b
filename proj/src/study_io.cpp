#include "fracocp/study_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fracocp/errors.hpp"

namespace fracocp {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{"example", "scheme", "alphas", "study", "levels", "reference",
                                            "fixed_resolution", "gamma", "a", "b", "T", "out", "workers",
                                            "spatial_norm"};
    return keys;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw InvalidArgument("config key '" + key + "': not a number: " + v);
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x != std::floor(x)) throw InvalidArgument("config key '" + key + "': not an integer: " + v);
    return static_cast<int>(x);
}

std::ofstream open_out(const std::filesystem::path& file) {
    if (file.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(file.parent_path(), ec);
    }
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    return os;
}

}  // namespace

std::string format_float(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

std::string csv_name(const ErrorStudy& study) {
    return std::string(to_string(study.kind)) + "_" + std::string(to_string(study.example)) + "_" +
           std::string(to_string(study.scheme)) + ".csv";
}

void write_csv(const ErrorStudy& study, std::ostream& os) {
    os << "alpha,variable";
    for (int l : study.levels) os << ',' << l;
    os << ",eoc\n";
    for (const auto& row : study.rows) {
        os << format_float(row.alpha) << ',' << row.variable;
        for (double e : row.errors) os << ',' << format_float(e);
        os << ',' << (row.eoc.empty() ? std::string("nan") : format_float(row.eoc.back())) << '\n';
    }
}

void emit_csv(const ErrorStudy& study, const std::filesystem::path& file) {
    auto os = open_out(file);
    write_csv(study, os);
    if (!os) throw std::runtime_error("failed writing " + file.string());
}

void emit_metadata(const ErrorStudy& study, double T, const std::filesystem::path& file) {
    auto os = open_out(file);
    const bool spatial = study.kind == StudyKind::Spatial;
    os << "study = " << to_string(study.kind) << '\n'
       << "example = " << to_string(study.example) << '\n'
       << "scheme = " << to_string(study.scheme) << '\n'
       << "T = " << format_float(T) << '\n'
       << (spatial ? "reference_M = " : "reference_N = ") << study.reference << '\n'
       << (spatial ? "N = " : "M = ") << study.fixed_resolution << '\n';
    if (spatial) {
        os << "spatial_norm = " << to_string(study.spatial_norm) << '\n'
           << "# coarse and reference runs share the same time grid\n";
    }
}

void emit_profiles(const OcpSolution& sol, const TimeGrid& time, const Mesh1D& mesh,
                   const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto dump = [&](const Trajectory& traj, const char* name) {
        auto os = open_out(dir / name);
        os << "x,t,value\n";
        for (int n = 0; n < traj.entries(); ++n) {
            for (int k = 0; k < traj.dim(); ++k) {
                os << format_float(mesh.coord(k)) << ',' << format_float(time.t(n)) << ','
                   << format_float(traj[n][k]) << '\n';
            }
        }
        if (!os) throw std::runtime_error("failed writing profile " + std::string(name));
    };
    dump(sol.state, "U.csv");
    dump(sol.control, "Q.csv");
    dump(sol.adjoint, "Z.csv");
}

std::map<std::string, std::string> parse_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().contains(key)) {
            throw InvalidArgument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (kv.contains(key)) throw InvalidArgument("config line " + std::to_string(lineno) + ": duplicate key");
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> load_config(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw InvalidArgument("cannot read config " + file.string());
    return parse_config(is);
}

void apply_config(StudyConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "example") {
            cfg.example = parse_example(value);
        } else if (key == "scheme") {
            cfg.scheme = parse_scheme(value);
        } else if (key == "study") {
            cfg.study = parse_study(value);
        } else if (key == "alphas") {
            cfg.alphas.clear();
            for (const auto& s : split_list(value)) cfg.alphas.push_back(to_double(key, s));
        } else if (key == "levels") {
            cfg.levels.clear();
            for (const auto& s : split_list(value)) cfg.levels.push_back(to_int(key, s));
        } else if (key == "reference") {
            cfg.reference = to_int(key, value);
        } else if (key == "fixed_resolution") {
            cfg.fixed_resolution = to_int(key, value);
        } else if (key == "gamma") {
            cfg.gamma = to_double(key, value);
        } else if (key == "a") {
            cfg.a = to_double(key, value);
        } else if (key == "b") {
            cfg.b = to_double(key, value);
        } else if (key == "T") {
            cfg.T = to_double(key, value);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "workers") {
            cfg.workers = to_int(key, value);
        } else if (key == "spatial_norm") {
            cfg.spatial_norm = parse_spatial_norm(value);
        } else {
            throw InvalidArgument("unknown config key '" + key + "'");
        }
    }
}

}  // namespace fracocp
