#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "sqz/detection.hpp"
#include "sqz/estimation.hpp"
#include "sqz/scan.hpp"

namespace sqz {

// Deterministic number formatting shared by every emitter: dB values with a
// fixed 4 decimals, everything else with 12 significant digits, '.' decimal
// separator, LF line endings. Identical inputs give byte-identical files on
// any platform.
std::string format_db(double db);
std::string format_value(double value);

// One `# key = value` preamble section plus the data rows of a trace CSV.
struct TraceFile {
    NoiseTrace trace;
    DetectionChain chain;
    std::string label;  // value of the preamble key `trace`, if present
};

void write_noise_trace(std::ostream& out, const NoiseTrace& trace, const DetectionChain& chain,
                       std::string_view label);

// Signal section followed by the blocked-path reference section in one file.
void write_phase_trace_file(std::ostream& out, const NoiseTrace& signal,
                            const NoiseTrace& reference, const DetectionChain& chain);

// Reads the first trace section of a file written by the writers above.
TraceFile read_noise_trace(const std::string& path);

void write_noise_map(std::ostream& out, const NoiseMap& map, const ScanConfig& config);

void write_selfrotation(std::ostream& out, std::span<const SelfRotationRow> rows,
                        const ScanConfig& config);

void write_wigner(std::ostream& out, const WignerGrid& grid);

struct WignerMeta {
    double gl = 0.0;
    double alpha_l = 0.0;
    double x_min = 0.0, x_max = 0.0;
    double p_min = 0.0, p_max = 0.0;
    std::size_t n_points = 0;
};

void write_wigner_meta(std::ostream& out, const WignerMeta& meta);

// Structured fit report: params / stderr / residual_rms / converged /
// iterations as a JSON object.
void write_fit_result(std::ostream& out, const FitResult& result);

// Two-column CSV (epsilon_rad, phi_rad); `#` lines and a header row are
// skipped.
PolarimeterScan read_polarimeter_scan(const std::string& path);

// Opens for binary writing, throwing IoError with the path on failure.
// Callers stream into it and then call close_output to surface write errors.
std::ofstream open_output(const std::string& path);
void close_output(std::ofstream& out, const std::string& path);

}  // namespace sqz
