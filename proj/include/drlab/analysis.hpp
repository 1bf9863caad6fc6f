#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "drlab/evolution.hpp"

namespace drlab {

/// A statistic sampled at increasing generations.
struct Series {
    std::vector<long> n;
    std::vector<double> value;
};

enum class Statistic { Survival, Mean };
Statistic parse_statistic(const std::string& s);
std::string statistic_name(Statistic s);

Series series_from_trace(const GenerationTrace<double>& trace, Statistic stat);

struct FitResult {
    long n_min = 0, n_max = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double residual_se = 0.0;
    std::vector<std::pair<long, double>> points;
};

/// Generations n_min * 2^(j/2) inside the window (half-octave steps).
std::vector<long> geometric_points(long n_min, long n_max);

/// Least-squares line through (log n, log value) at half-octave points of the
/// window; at least five points are required.
FitResult fit_exponent(const Series& s, long n_min, long n_max);

struct BandCheck {
    std::string column;
    double median = 0.0, lo = 0.0, hi = 0.0; // observed range
    bool pass = false;
};

struct ScalingRow {
    long n = 0;
    std::map<std::string, double> cols;
};

struct ScalingOptions {
    long band_lo = 128, band_hi = 2048;
    double band_factor = 8.0;
    long tail_at = 1024;
    double tail_limit = 10.0;
};

struct ScalingReport {
    bool refused = false;
    std::string notice;
    std::vector<std::string> columns;
    std::vector<ScalingRow> rows;
    std::vector<BandCheck> bands;
    bool tail_checked = false;
    bool tail_pass = true;
    double tail_max = 0.0;
    std::map<std::string, double> conjectured; // printed, never asserted
    bool pass() const;
};

/// Open-path diagnostics from the i = 0 channel, indexed by generation.
struct ChannelDiagnostics {
    std::vector<double> weighted;   // E[m^X_n N_n^(0)]
    std::vector<double> weighted_x; // E[X_n m^X_n N_n^(0)]
};

ScalingReport scaling_report(const GenerationTrace<double>& trace, Phase phase,
                             const ScalingOptions& opt = {}, const ChannelDiagnostics* diag = nullptr);

} // namespace drlab
