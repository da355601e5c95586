#include "sqz/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sqz/errors.hpp"

namespace sqz {

namespace {

constexpr char kTraceHeader[] = "chi_rad,analytic_rel_var,sampled_rel_var,analytic_db,sampled_db";

std::string format_u64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

double parse_number(const std::string& text, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw IoError("malformed number '" + text + "' in '" + path + "'");
    }
    return v;
}

// `# key = value`
bool parse_preamble_line(const std::string& line, std::string& key, std::string& value) {
    if (line.empty() || line[0] != '#') {
        return false;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
        return false;
    }
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t#");
        const auto b = s.find_last_not_of(" \t\r");
        if (a == std::string::npos) {
            return std::string();
        }
        return s.substr(a, b - a + 1);
    };
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    return !key.empty();
}

}  // namespace

std::string format_db(double db) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", db);
    return buf;
}

std::string format_value(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_noise_trace(std::ostream& out, const NoiseTrace& trace, const DetectionChain& chain,
                       std::string_view label) {
    if (trace.analytic.size() != trace.chis.size()) {
        throw InvalidParameter("trace analytic values must match the phase grid");
    }
    if (trace.has_sampled() && trace.sampled.size() != trace.chis.size()) {
        throw InvalidParameter("trace sampled values must match the phase grid");
    }
    out << "# trace = " << label << "\n";
    out << "# detuning_ghz = " << format_value(trace.detuning_ghz) << "\n";
    out << "# rf_mhz = " << format_value(trace.rf_mhz) << "\n";
    out << "# seed = " << format_u64(trace.seed) << "\n";
    out << "# n_averages = " << trace.n_averages << "\n";
    out << "# sql_reference = " << format_value(trace.sql_reference) << "\n";
    out << "# visibility = " << format_value(chain.visibility) << "\n";
    out << "# pd_efficiency = " << format_value(chain.pd_efficiency) << "\n";
    out << "# electronic_noise = " << format_value(chain.electronic_noise) << "\n";
    out << kTraceHeader << "\n";
    for (std::size_t i = 0; i < trace.chis.size(); ++i) {
        out << format_value(trace.chis[i]) << ',' << format_value(trace.analytic[i]) << ',';
        if (trace.has_sampled()) {
            out << format_value(trace.sampled[i]);
        }
        out << ',' << format_db(to_db(trace.analytic[i])) << ',';
        if (trace.has_sampled()) {
            out << format_db(to_db(trace.sampled[i]));
        }
        out << "\n";
    }
}

void write_phase_trace_file(std::ostream& out, const NoiseTrace& signal,
                            const NoiseTrace& reference, const DetectionChain& chain) {
    write_noise_trace(out, signal, chain, "signal");
    write_noise_trace(out, reference, chain, "sql_reference");
}

TraceFile read_noise_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open trace file '" + path + "'");
    }
    TraceFile file;
    bool seen_header = false;
    bool any_sampled = false;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            if (seen_header) {
                break;  // next section starts
            }
            std::string key, value;
            if (!parse_preamble_line(line, key, value)) {
                continue;
            }
            if (key == "trace") {
                file.label = value;
            } else if (key == "detuning_ghz") {
                file.trace.detuning_ghz = parse_number(value, path);
            } else if (key == "rf_mhz") {
                file.trace.rf_mhz = parse_number(value, path);
            } else if (key == "seed") {
                file.trace.seed = std::strtoull(value.c_str(), nullptr, 10);
            } else if (key == "n_averages") {
                file.trace.n_averages = static_cast<int>(parse_number(value, path));
            } else if (key == "sql_reference") {
                file.trace.sql_reference = parse_number(value, path);
            } else if (key == "visibility") {
                file.chain.visibility = parse_number(value, path);
            } else if (key == "pd_efficiency") {
                file.chain.pd_efficiency = parse_number(value, path);
            } else if (key == "electronic_noise") {
                file.chain.electronic_noise = parse_number(value, path);
            }
            continue;
        }
        if (!seen_header) {
            if (line != kTraceHeader) {
                throw IoError("unexpected header '" + line + "' in '" + path + "'");
            }
            seen_header = true;
            continue;
        }
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 5) {
            throw IoError("expected 5 columns in '" + path + "', got " +
                          std::to_string(fields.size()));
        }
        file.trace.chis.push_back(parse_number(fields[0], path));
        file.trace.analytic.push_back(parse_number(fields[1], path));
        if (!fields[2].empty()) {
            file.trace.sampled.push_back(parse_number(fields[2], path));
            any_sampled = true;
        } else if (any_sampled) {
            throw IoError("trace in '" + path + "' mixes sampled and unsampled rows");
        }
    }
    if (!seen_header || file.trace.chis.empty()) {
        throw IoError("no trace data found in '" + path + "'");
    }
    file.chain.rng_seed = file.trace.seed;
    return file;
}

void write_noise_map(std::ostream& out, const NoiseMap& map, const ScanConfig& config) {
    if (map.min_db.size() != map.detunings.size() * map.rfs.size() ||
        map.excess_linear.size() != map.min_db.size()) {
        throw InvalidParameter("noise map shape does not match its grids");
    }
    out << "# mode = " << to_string(config.mode) << "\n";
    out << "# seed = " << format_u64(config.seed) << "\n";
    out << "# n_averages = " << config.n_averages << "\n";
    out << "# chi_points = " << config.chi_points << "\n";
    out << "# rolloff_mhz = " << format_value(config.rolloff_mhz) << "\n";
    out << "# electronic_noise_subtracted = 1\n";
    out << "detuning_ghz,rf_mhz,min_db,excess_linear\n";
    for (std::size_t i = 0; i < map.detunings.size(); ++i) {
        for (std::size_t j = 0; j < map.rfs.size(); ++j) {
            out << format_value(map.detunings[i]) << ',' << format_value(map.rfs[j]) << ','
                << format_db(map.min_db_at(i, j)) << ',' << format_value(map.excess_at(i, j))
                << "\n";
        }
    }
}

void write_selfrotation(std::ostream& out, std::span<const SelfRotationRow> rows,
                        const ScanConfig& config) {
    out << "# seed = " << format_u64(config.seed) << "\n";
    out << "detuning_ghz,gl_true,gl_fitted,gl_stderr,alpha_l,converged\n";
    for (const SelfRotationRow& row : rows) {
        out << format_value(row.detuning_ghz) << ',' << format_value(row.gl_true) << ','
            << format_value(row.gl_fitted) << ',' << format_value(row.gl_stderr) << ','
            << format_value(row.alpha_l) << ',' << (row.converged ? '1' : '0') << "\n";
    }
}

void write_wigner(std::ostream& out, const WignerGrid& grid) {
    // Corner label, then the p axis; every following row is one x value.
    out << "x";
    for (double p : grid.ps) {
        out << ',' << format_value(p);
    }
    out << "\n";
    for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
        out << format_value(grid.xs[ix]);
        for (std::size_t ip = 0; ip < grid.ps.size(); ++ip) {
            out << ',' << format_value(grid.at(ix, ip));
        }
        out << "\n";
    }
}

void write_wigner_meta(std::ostream& out, const WignerMeta& meta) {
    out << "# gl = " << format_value(meta.gl) << "\n";
    out << "# alpha_l = " << format_value(meta.alpha_l) << "\n";
    out << "# x_range = " << format_value(meta.x_min) << ' ' << format_value(meta.x_max) << "\n";
    out << "# p_range = " << format_value(meta.p_min) << ' ' << format_value(meta.p_max) << "\n";
    out << "# n_points = " << meta.n_points << "\n";
    out << "# layout = rows x, columns p\n";
}

void write_fit_result(std::ostream& out, const FitResult& result) {
    nlohmann::ordered_json params, stderrs;
    for (std::size_t i = 0; i < result.param_names.size(); ++i) {
        params[result.param_names[i]] = result.params[i];
        stderrs[result.param_names[i]] = std::sqrt(result.covariance_diag[i]);
    }
    nlohmann::ordered_json root;
    root["params"] = std::move(params);
    root["stderr"] = std::move(stderrs);
    root["residual_rms"] = result.residual_rms;
    root["converged"] = result.converged;
    root["iterations"] = result.iterations;
    out << root.dump(2) << "\n";
}

PolarimeterScan read_polarimeter_scan(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open scan file '" + path + "'");
    }
    PolarimeterScan scan;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() < 2) {
            throw IoError("expected 2 columns in '" + path + "'");
        }
        char* end = nullptr;
        const double eps = std::strtod(fields[0].c_str(), &end);
        if (end == fields[0].c_str()) {
            continue;  // header row
        }
        scan.epsilons.push_back(eps);
        scan.angles.push_back(parse_number(fields[1], path));
    }
    if (scan.epsilons.empty()) {
        throw IoError("no scan data found in '" + path + "'");
    }
    return scan;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return out;
}

void close_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
    out.close();
}

}  // namespace sqz
