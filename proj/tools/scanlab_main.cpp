#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqz/config.hpp"
#include "sqz/csvio.hpp"
#include "sqz/errors.hpp"
#include "sqz/estimation.hpp"
#include "sqz/scan.hpp"

namespace {

// Flags shared by every subcommand; applied on top of the config file and
// preset so the command line always wins.
struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string mode;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;
    bool has_out = false;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "JSON config file");
    sub->add_option("--preset", opts.preset, "named parameter bundle (paper-fig4, paper-fig5)");
    sub->add_option("--mode", opts.mode, "analytic or sampled")
        ->check(CLI::IsMember({"analytic", "sampled"}));
    sub->add_option("--out", opts.out_dir, "output directory")
        ->each([&opts](const std::string&) { opts.has_out = true; });
    sub->add_option("--seed", opts.seed, "RNG seed")
        ->each([&opts](const std::string&) { opts.has_seed = true; });
}

sqz::ScanConfig effective_config(const CommonOpts& opts) {
    sqz::ScanConfig config =
        opts.config_path.empty() ? sqz::default_config() : sqz::load_config(opts.config_path);
    if (!opts.preset.empty()) {
        sqz::apply_preset(config, opts.preset);
    }
    if (!opts.mode.empty()) {
        config.mode = sqz::scan_mode_from_string(opts.mode);
    }
    if (opts.has_seed) {
        config.seed = opts.seed;
    }
    if (opts.has_out) {
        config.output_dir = opts.out_dir;
    }
    config.validate();
    return config;
}

std::filesystem::path prepare_output_dir(const sqz::ScanConfig& config) {
    const std::filesystem::path dir = config.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw sqz::IoError("cannot create output directory '" + dir.string() + "': " +
                           ec.message());
    }
    return dir;
}

std::vector<sqz::TraceParam> parse_free_list(const std::string& text) {
    std::vector<sqz::TraceParam> params;
    std::string::size_type pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string name =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (name == "gl") {
            params.push_back(sqz::TraceParam::gl);
        } else if (name == "alpha_l") {
            params.push_back(sqz::TraceParam::alpha_l);
        } else if (name == "excess") {
            params.push_back(sqz::TraceParam::excess);
        } else if (name == "n_el") {
            params.push_back(sqz::TraceParam::n_el);
        } else if (!name.empty()) {
            throw sqz::ConfigError("unknown free parameter '" + name +
                                   "' (expected gl, alpha_l, excess, n_el)");
        }
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    if (params.empty()) {
        throw sqz::ConfigError("--free must name at least one parameter");
    }
    return params;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"squeezed-vacuum scan & estimation toolkit"};
    app.require_subcommand(1);

    CommonOpts common;

    CLI::App* cmd_map = app.add_subcommand("noise-map", "minimum noise over a detuning x RF grid");
    add_common(cmd_map, common);

    CLI::App* cmd_trace = app.add_subcommand("phase-trace", "noise vs LO phase at one grid point");
    add_common(cmd_trace, common);
    double trace_detuning = 0.0, trace_rf = 0.0;
    CLI::Option* opt_detuning = cmd_trace->add_option("--detuning", trace_detuning,
                                                      "override detuning (GHz)");
    CLI::Option* opt_rf = cmd_trace->add_option("--rf", trace_rf, "override RF frequency (MHz)");

    CLI::App* cmd_rot = app.add_subcommand("selfrotation-scan",
                                           "polarimeter scans and gl fits per detuning");
    add_common(cmd_rot, common);
    double eps_max = 0.09, rot_power = 2.0, rot_noise = 0.0;
    std::size_t eps_count = 13;
    int rot_degree = 1;
    cmd_rot->add_option("--eps-max", eps_max, "largest ellipticity (rad)");
    cmd_rot->add_option("--eps-count", eps_count, "ellipticity count")->check(CLI::Range(4, 1000));
    cmd_rot->add_option("--power", rot_power, "polarimeter total power");
    cmd_rot->add_option("--polarimeter-noise", rot_noise, "readout noise RMS");
    cmd_rot->add_option("--degree", rot_degree, "fit degree (1 or 3)")
        ->check(CLI::IsMember({1, 3}));

    CLI::App* cmd_wigner = app.add_subcommand("wigner", "phase-space density grid");
    add_common(cmd_wigner, common);
    double wig_gl = 1.0, wig_alpha = 0.0, wig_range = 4.5;
    std::size_t wig_points = 201;
    cmd_wigner->add_option("--gl", wig_gl, "shear strength");
    cmd_wigner->add_option("--alpha", wig_alpha, "absorption fraction");
    cmd_wigner->add_option("--range", wig_range, "half-width of the square grid");
    cmd_wigner->add_option("--points", wig_points, "points per axis")
        ->check(CLI::Range(2, 100000));

    CLI::App* cmd_fit_trace = app.add_subcommand("fit-trace",
                                                 "fit the cell model to a noise-trace CSV");
    add_common(cmd_fit_trace, common);
    std::string fit_trace_input;
    std::string free_list = "gl,alpha_l,excess";
    cmd_fit_trace->add_option("input", fit_trace_input, "trace CSV file")->required();
    cmd_fit_trace->add_option("--free", free_list, "comma list of free parameters");

    CLI::App* cmd_fit_pol = app.add_subcommand("fit-polarimeter",
                                               "fit gl to a polarimeter scan CSV");
    add_common(cmd_fit_pol, common);
    std::string fit_pol_input;
    int fit_pol_degree = 1;
    cmd_fit_pol->add_option("input", fit_pol_input, "scan CSV (epsilon_rad, phi_rad)")
        ->required();
    cmd_fit_pol->add_option("--degree", fit_pol_degree, "fit degree (1 or 3)")
        ->check(CLI::IsMember({1, 3}));

    CLI::App* cmd_print = app.add_subcommand("print-config",
                                             "print the effective config as JSON");
    add_common(cmd_print, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_print->parsed()) {
            std::cout << sqz::config_to_json(effective_config(common));
            return 0;
        }
        if (cmd_map->parsed()) {
            const sqz::ScanConfig config = effective_config(common);
            const sqz::NoiseMap map = sqz::run_noise_map(config);
            const auto path = prepare_output_dir(config) / "noise_map.csv";
            std::ofstream out = sqz::open_output(path.string());
            sqz::write_noise_map(out, map, config);
            sqz::close_output(out, path.string());
            std::cout << path.string() << "\n";
            return 0;
        }
        if (cmd_trace->parsed()) {
            sqz::ScanConfig config = effective_config(common);
            if (*opt_detuning) {
                config.detunings = {trace_detuning, trace_detuning, 1};
            }
            if (*opt_rf) {
                config.rfs = {trace_rf, trace_rf, 1};
            }
            const sqz::PhaseTraces traces = sqz::run_phase_trace(config);
            const auto path = prepare_output_dir(config) / "phase_trace.csv";
            std::ofstream out = sqz::open_output(path.string());
            sqz::write_phase_trace_file(out, traces.signal, traces.reference, config.chain);
            sqz::close_output(out, path.string());
            std::cout << path.string() << "\n";
            return 0;
        }
        if (cmd_rot->parsed()) {
            const sqz::ScanConfig config = effective_config(common);
            std::vector<double> epsilons(eps_count);
            for (std::size_t i = 0; i < eps_count; ++i) {
                epsilons[i] = -eps_max + 2.0 * eps_max * static_cast<double>(i) /
                                             static_cast<double>(eps_count - 1);
            }
            const std::vector<sqz::SelfRotationRow> rows =
                sqz::run_selfrotation_scan(config, epsilons, rot_power, rot_noise, rot_degree);
            const auto path = prepare_output_dir(config) / "selfrotation_scan.csv";
            std::ofstream out = sqz::open_output(path.string());
            sqz::write_selfrotation(out, rows, config);
            sqz::close_output(out, path.string());
            std::cout << path.string() << "\n";
            return 0;
        }
        if (cmd_wigner->parsed()) {
            const sqz::ScanConfig config = effective_config(common);
            const sqz::WignerGrid grid = sqz::make_wigner(wig_gl, wig_alpha, wig_range,
                                                          wig_points);
            const auto dir = prepare_output_dir(config);
            const auto grid_path = dir / "wigner.csv";
            std::ofstream out = sqz::open_output(grid_path.string());
            sqz::write_wigner(out, grid);
            sqz::close_output(out, grid_path.string());

            sqz::WignerMeta meta;
            meta.gl = wig_gl;
            meta.alpha_l = wig_alpha;
            meta.x_min = meta.p_min = -wig_range;
            meta.x_max = meta.p_max = wig_range;
            meta.n_points = wig_points;
            const auto meta_path = dir / "wigner_meta.txt";
            std::ofstream meta_out = sqz::open_output(meta_path.string());
            sqz::write_wigner_meta(meta_out, meta);
            sqz::close_output(meta_out, meta_path.string());
            std::cout << grid_path.string() << "\n";
            return 0;
        }
        if (cmd_fit_trace->parsed()) {
            const sqz::ScanConfig config = effective_config(common);
            const sqz::TraceFile file = sqz::read_noise_trace(fit_trace_input);
            const std::vector<sqz::TraceParam> free_params = parse_free_list(free_list);
            const sqz::FitResult result =
                sqz::fit_noise_trace(file.trace, file.chain, free_params);
            const auto path = prepare_output_dir(config) / "fit_trace.json";
            std::ofstream out = sqz::open_output(path.string());
            sqz::write_fit_result(out, result);
            sqz::close_output(out, path.string());
            sqz::write_fit_result(std::cout, result);
            return result.converged ? 0 : 3;
        }
        if (cmd_fit_pol->parsed()) {
            const sqz::ScanConfig config = effective_config(common);
            const sqz::PolarimeterScan scan = sqz::read_polarimeter_scan(fit_pol_input);
            const sqz::FitResult result = sqz::fit_gl_polynomial(scan, fit_pol_degree);
            const auto path = prepare_output_dir(config) / "fit_polarimeter.json";
            std::ofstream out = sqz::open_output(path.string());
            sqz::write_fit_result(out, result);
            sqz::close_output(out, path.string());
            sqz::write_fit_result(std::cout, result);
            return result.converged ? 0 : 3;
        }
    } catch (const sqz::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const sqz::DegenerateFit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const sqz::Error& e) {
        // Parameter and model problems are configuration problems from the
        // CLI user's point of view.
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
