#include "sqz/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "sqz/errors.hpp"

namespace sqz {

using ordered_json = nlohmann::ordered_json;

double GridSpec::at(std::size_t i) const {
    if (i >= count) {
        throw InvalidParameter("grid index out of range");
    }
    if (count == 1) {
        return start;
    }
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void GridSpec::validate(const char* what) const {
    if (!std::isfinite(start) || !std::isfinite(stop)) {
        throw ConfigError(std::string(what) + ": grid endpoints must be finite");
    }
    if (count < 1) {
        throw ConfigError(std::string(what) + ": grid count must be >= 1");
    }
}

std::string_view to_string(ScanMode mode) {
    return mode == ScanMode::analytic ? "analytic" : "sampled";
}

ScanMode scan_mode_from_string(std::string_view text) {
    if (text == "analytic") {
        return ScanMode::analytic;
    }
    if (text == "sampled") {
        return ScanMode::sampled;
    }
    throw ConfigError("mode must be 'analytic' or 'sampled', got '" + std::string(text) + "'");
}

void ScanConfig::validate() const {
    detunings.validate("scan.detuning_ghz");
    rfs.validate("scan.rf_mhz");
    if (chi_points < 2) {
        throw ConfigError("scan.chi_points must be >= 2");
    }
    if (mode == ScanMode::sampled && n_averages < 2) {
        throw ConfigError("scan.n_averages must be >= 2 in sampled mode");
    }
    if (n_averages < 0) {
        throw ConfigError("scan.n_averages must be non-negative");
    }
    if (!(rolloff_mhz >= 0.0) || !std::isfinite(rolloff_mhz)) {
        throw ConfigError("scan.rolloff_mhz must be a finite value >= 0");
    }
    if (!(excess_gamma_mhz > 0.0)) {
        throw ConfigError("excess.gamma_mhz must be > 0");
    }
    if (!(excess_peak >= 0.0)) {
        throw ConfigError("excess.peak_amplitude must be >= 0");
    }
    try {
        chain.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("chain: ") + e.what());
    }
}

ExcessNoiseModel ScanConfig::excess_model() const {
    return ExcessNoiseModel(excess_gamma_mhz, excess_peak, medium);
}

ScanConfig default_config() {
    ScanConfig config;
    config.chain.visibility = 0.98;
    config.chain.pd_efficiency = 0.91;
    config.chain.electronic_noise = 0.04;
    config.excess_gamma_mhz = 6.0;
    config.excess_peak = 0.6;
    config.detunings = {0.35, 0.35, 1};
    config.rfs = {5.0, 5.0, 1};
    return config;
}

namespace {

void reject_unknown_keys(const ordered_json& obj, const std::string& section,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown key '" + item.key() + "' in section '" + section + "'");
        }
    }
}

const ordered_json* section(const ordered_json& root, const char* name) {
    auto it = root.find(name);
    if (it == root.end()) {
        return nullptr;
    }
    if (!it->is_object()) {
        throw ConfigError(std::string("section '") + name + "' must be an object");
    }
    return &*it;
}

double number_field(const ordered_json& obj, const std::string& section_name, const char* key,
                    double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number()) {
        throw ConfigError(section_name + "." + key + ": expected a number");
    }
    return it->get<double>();
}

std::string string_field(const ordered_json& obj, const std::string& section_name,
                         const char* key, const std::string& fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_string()) {
        throw ConfigError(section_name + "." + key + ": expected a string");
    }
    return it->get<std::string>();
}

std::int64_t integer_field(const ordered_json& obj, const std::string& section_name,
                           const char* key, std::int64_t fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number_integer()) {
        throw ConfigError(section_name + "." + key + ": expected an integer");
    }
    return it->get<std::int64_t>();
}

std::uint64_t seed_field(const ordered_json& obj, const std::string& section_name,
                         const char* key, std::uint64_t fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() &&
                                     it->get<std::int64_t>() < 0)) {
        throw ConfigError(section_name + "." + key + ": expected an unsigned integer");
    }
    return it->get<std::uint64_t>();
}

LineShape shape_from_string(const std::string& text) {
    if (text == "gaussian") {
        return LineShape::gaussian;
    }
    if (text == "lorentzian") {
        return LineShape::lorentzian;
    }
    throw ConfigError("line shape must be 'gaussian' or 'lorentzian', got '" + text + "'");
}

const char* shape_to_string(LineShape shape) {
    return shape == LineShape::gaussian ? "gaussian" : "lorentzian";
}

GridSpec grid_field(const ordered_json& obj, const std::string& section_name, const char* key,
                    GridSpec fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_object()) {
        throw ConfigError(section_name + "." + key + ": expected an object");
    }
    const std::string path = section_name + "." + key;
    reject_unknown_keys(*it, path, {"start", "stop", "count"});
    GridSpec grid = fallback;
    grid.start = number_field(*it, path, "start", fallback.start);
    grid.stop = number_field(*it, path, "stop", fallback.stop);
    const std::int64_t count =
        integer_field(*it, path, "count", static_cast<std::int64_t>(fallback.count));
    if (count < 1) {
        throw ConfigError(path + ".count must be >= 1");
    }
    grid.count = static_cast<std::size_t>(count);
    return grid;
}

MediumModel medium_from_json(const ordered_json& obj, const MediumModel& fallback) {
    reject_unknown_keys(obj, "medium",
                        {"temperature_label", "slices", "saturation_cubic", "window_ghz",
                         "lines"});
    std::vector<LineComponent> lines = fallback.lines();
    if (auto it = obj.find("lines"); it != obj.end()) {
        if (!it->is_array()) {
            throw ConfigError("medium.lines: expected an array of line objects");
        }
        lines.clear();
        std::size_t index = 0;
        for (const auto& entry : *it) {
            const std::string path = "medium.lines[" + std::to_string(index++) + "]";
            if (!entry.is_object()) {
                throw ConfigError(path + ": expected an object");
            }
            reject_unknown_keys(entry, path,
                                {"center_ghz", "width_ghz", "rotation_amplitude",
                                 "absorption_amplitude", "shape"});
            LineComponent line;
            line.center_ghz = number_field(entry, path, "center_ghz", line.center_ghz);
            line.width_ghz = number_field(entry, path, "width_ghz", line.width_ghz);
            line.rotation_amplitude =
                number_field(entry, path, "rotation_amplitude", line.rotation_amplitude);
            line.absorption_amplitude =
                number_field(entry, path, "absorption_amplitude", line.absorption_amplitude);
            line.shape = shape_from_string(
                string_field(entry, path, "shape", shape_to_string(line.shape)));
            lines.push_back(line);
        }
    }
    std::string label =
        string_field(obj, "medium", "temperature_label", fallback.temperature_label());
    const std::int64_t slices =
        integer_field(obj, "medium", "slices", static_cast<std::int64_t>(fallback.slices()));
    const double saturation =
        number_field(obj, "medium", "saturation_cubic", fallback.saturation_cubic());

    double window_min = fallback.window_min_ghz();
    double window_max = fallback.window_max_ghz();
    if (auto it = obj.find("window_ghz"); it != obj.end()) {
        if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
            !(*it)[1].is_number()) {
            throw ConfigError("medium.window_ghz: expected [min, max]");
        }
        window_min = (*it)[0].get<double>();
        window_max = (*it)[1].get<double>();
    }
    try {
        return MediumModel(std::move(lines), std::move(label), static_cast<int>(slices),
                           saturation, window_min, window_max);
    } catch (const Error& e) {
        throw ConfigError(std::string("medium: ") + e.what());
    }
}

}  // namespace

ScanConfig config_from_json(const std::string& text, const std::string& origin) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(origin + ": top level must be a JSON object");
    }
    reject_unknown_keys(root, "<top>", {"medium", "chain", "excess", "scan"});

    ScanConfig config = default_config();
    if (const ordered_json* medium = section(root, "medium")) {
        config.medium = medium_from_json(*medium, config.medium);
    }
    if (const ordered_json* chain = section(root, "chain")) {
        reject_unknown_keys(*chain, "chain",
                            {"visibility", "pd_efficiency", "electronic_noise"});
        config.chain.visibility =
            number_field(*chain, "chain", "visibility", config.chain.visibility);
        config.chain.pd_efficiency =
            number_field(*chain, "chain", "pd_efficiency", config.chain.pd_efficiency);
        config.chain.electronic_noise =
            number_field(*chain, "chain", "electronic_noise", config.chain.electronic_noise);
    }
    if (const ordered_json* excess = section(root, "excess")) {
        reject_unknown_keys(*excess, "excess", {"gamma_mhz", "peak_amplitude"});
        config.excess_gamma_mhz =
            number_field(*excess, "excess", "gamma_mhz", config.excess_gamma_mhz);
        config.excess_peak =
            number_field(*excess, "excess", "peak_amplitude", config.excess_peak);
    }
    if (const ordered_json* scan = section(root, "scan")) {
        reject_unknown_keys(*scan, "scan",
                            {"detuning_ghz", "rf_mhz", "chi_points", "mode", "n_averages",
                             "seed", "output_dir", "rolloff_mhz"});
        config.detunings = grid_field(*scan, "scan", "detuning_ghz", config.detunings);
        config.rfs = grid_field(*scan, "scan", "rf_mhz", config.rfs);
        const std::int64_t chi_points =
            integer_field(*scan, "scan", "chi_points",
                          static_cast<std::int64_t>(config.chi_points));
        if (chi_points < 2) {
            throw ConfigError("scan.chi_points must be >= 2");
        }
        config.chi_points = static_cast<std::size_t>(chi_points);
        config.mode = scan_mode_from_string(
            string_field(*scan, "scan", "mode", std::string(to_string(config.mode))));
        const std::int64_t averages =
            integer_field(*scan, "scan", "n_averages", config.n_averages);
        if (averages < 0 || averages > (1ll << 31)) {
            throw ConfigError("scan.n_averages out of range");
        }
        config.n_averages = static_cast<int>(averages);
        config.seed = seed_field(*scan, "scan", "seed", config.seed);
        config.output_dir = string_field(*scan, "scan", "output_dir", config.output_dir);
        config.rolloff_mhz = number_field(*scan, "scan", "rolloff_mhz", config.rolloff_mhz);
    }
    config.validate();
    return config;
}

std::string config_to_json(const ScanConfig& config) {
    ordered_json lines = ordered_json::array();
    for (const LineComponent& line : config.medium.lines()) {
        lines.push_back({{"center_ghz", line.center_ghz},
                         {"width_ghz", line.width_ghz},
                         {"rotation_amplitude", line.rotation_amplitude},
                         {"absorption_amplitude", line.absorption_amplitude},
                         {"shape", shape_to_string(line.shape)}});
    }
    ordered_json root;
    root["medium"] = {{"temperature_label", config.medium.temperature_label()},
                      {"slices", config.medium.slices()},
                      {"saturation_cubic", config.medium.saturation_cubic()},
                      {"window_ghz",
                       {config.medium.window_min_ghz(), config.medium.window_max_ghz()}},
                      {"lines", std::move(lines)}};
    root["chain"] = {{"visibility", config.chain.visibility},
                     {"pd_efficiency", config.chain.pd_efficiency},
                     {"electronic_noise", config.chain.electronic_noise}};
    root["excess"] = {{"gamma_mhz", config.excess_gamma_mhz},
                      {"peak_amplitude", config.excess_peak}};
    root["scan"] = {
        {"detuning_ghz",
         {{"start", config.detunings.start},
          {"stop", config.detunings.stop},
          {"count", config.detunings.count}}},
        {"rf_mhz",
         {{"start", config.rfs.start}, {"stop", config.rfs.stop}, {"count", config.rfs.count}}},
        {"chi_points", config.chi_points},
        {"mode", std::string(to_string(config.mode))},
        {"n_averages", config.n_averages},
        {"seed", config.seed},
        {"output_dir", config.output_dir},
        {"rolloff_mhz", config.rolloff_mhz}};
    return root.dump(2) + "\n";
}

ScanConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed reading config file '" + path + "'");
    }
    return config_from_json(buffer.str(), path);
}

void save_config(const ScanConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << config_to_json(config);
    if (!out) {
        throw IoError("failed writing config file '" + path + "'");
    }
}

}  // namespace sqz
