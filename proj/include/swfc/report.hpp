#pragma once

#include <string>
#include <vector>

#include "swfc/analysis.hpp"
#include "swfc/experiment_file.hpp"
#include "swfc/simcore.hpp"

namespace swfc::report {

extern const char* const kToolVersion;

// FNV-1a over the canonical experiment text plus axis and seed list, so any
// config change shows up in the output header.
uint64_t config_hash(const ExperimentFile& f);

// Stable CSV for simulate/sweep: '#' metadata lines (tool version, config
// hash, seeds), one header row, one row per (point, seed) followed by mean
// and stderr rows per point. The column set never varies with the data.
// `series` labels rows when several sweeps are concatenated; pass "" for the
// plain single-sweep form.
std::string sweep_csv(const ExperimentFile& cfg, const SweepResult& result,
                      const std::string& series = "");
// Header-only variant for concatenated output: metadata plus column row.
std::string sweep_csv_header(const ExperimentFile& cfg);
std::string sweep_csv_rows(const SweepResult& result, const std::string& series);

// CSV for the closed-form rate table: p_e, the no-expansion bound 1 - p_e,
// the expansion-aware maximum (empty when infeasible) and a yes/no verdict.
std::string analyze_csv(const std::vector<analysis::FeasibilityResult>& rows);

// Minimal self-contained line plot. One polyline per series over a framed,
// labeled grid; output is deterministic for identical input.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    bool y_from_zero = false;
};

std::string svg_line_plot(const PlotSpec& spec);

}  // namespace swfc::report
