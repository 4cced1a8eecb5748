#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkd/engine.hpp"

namespace qkd::run {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

/// Flat key = value scenario file plus run controls.
struct RunConfig {
    engine::SourceScenario scenario;
    engine::EngineConfig engine;
    double dist_start = 0.0, dist_stop = 100.0, dist_step = 10.0;
    bool plot = true;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_text(const std::string& text, const std::string& origin);

    std::vector<double> distances() const;
    /// Canonical key=value dump of every resolved setting (CSV header comment).
    std::string resolved_text() const;
};

/// Executes the sweep and writes rates.csv (and rates.svg unless disabled).
/// Returns the process exit status: 0 ok, 3 on any uncertified bound.
int run_sweep(const RunConfig& config, const std::string& out_dir, bool plot,
              std::vector<engine::KeyRatePoint>* points_out = nullptr);

/// Runs both configs (shared distance grid required) and writes compare.csv
/// and compare.svg. Returns 0 ok, 2 on grid mismatch, 3 on uncertified bounds.
int run_compare(const RunConfig& a, const RunConfig& b, const std::string& out_dir);

/// 9-significant-digit float formatting used across all outputs.
std::string format_float(double v);

void write_rates_csv(const std::string& path,
                     const std::vector<engine::KeyRatePoint>& points,
                     const std::string& resolved_config);

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), y > 0 plotted
};

/// Static polyline plot with a log10 rate axis.
void write_rate_svg(const std::string& path, const std::vector<PlotSeries>& series);

}  // namespace qkd::run
