#ifndef FLOWSIM_METRICS_HPP
#define FLOWSIM_METRICS_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "flowsim/run_record.hpp"

namespace flowsim {

class TooFewVehicles : public std::invalid_argument {
  public:
    TooFewVehicles() : std::invalid_argument("need at least 4 vehicles (3 gaps)") {}
};

class DegenerateSeries : public std::invalid_argument {
  public:
    DegenerateSeries() : std::invalid_argument("reference series is constant") {}
};

/// Mean of the three smallest / three largest center-to-center distances at
/// one tick. Throws TooFewVehicles below 3 gaps.
std::pair<double, double> min_max_distance(const RunRecord& record, int tick);

struct FitStats {
    double r_squared = 0.0;
    double rmse = 0.0;
};

/// Goodness of series_a against reference truth series_b:
/// RMSE = sqrt(mean((a-b)^2)), R^2 = 1 - SS_res / SS_tot.
/// Throws DegenerateSeries when the truth is constant.
FitStats fit_stats(const std::vector<double>& series_a, const std::vector<double>& series_b);

/// Per-tick min/max distance traces plus where the minimum settles.
struct DistanceSummary {
    std::vector<double> min_distance;  // per recorded tick
    std::vector<double> max_distance;
    double settling_value = 0.0;   // mean of min_distance over the final 50 s
    double settling_time_s = -1.0; // from perturbation start; -1 if never settles
    int settling_tick = -1;
};

/// Settling: first tick at/after the perturbation start from which
/// min_distance stays within +-band_m of its final-50 s mean forever.
DistanceSummary distance_summary(const RunRecord& record, double band_m = 0.5);

struct HeatmapMatrix {
    int rows = 0;  // vehicles
    int cols = 0;  // sampled ticks
    std::vector<int> sampled_ticks;
    std::vector<double> values;  // row-major true velocities

    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * cols + col];
    }
};

/// True-velocity matrix sampled every stride_ticks. stride must divide the
/// recorded length.
HeatmapMatrix heatmap_matrix(const RunRecord& record, int stride_ticks);

struct WindowStat {
    double mean = 0.0;
    double rmse = 0.0;  // about the window mean
};

/// Windowed mean and RMSE-about-mean. window must divide the length.
std::vector<WindowStat> error_bar(const std::vector<double>& series, int window_ticks);

/// Measured-vs-true and estimated-vs-true fit, pooled across all pairs and
/// all ticks for which an estimate exists. Component 0 = relative position,
/// 1 = relative velocity. Requires a PBCM record.
struct ErrorReductionStats {
    FitStats measured;
    FitStats estimated;
};
ErrorReductionStats error_reduction_stats(const RunRecord& record, int component);

/// Dispersion of the fleet's velocities at one tick (RMSE about the mean).
double velocity_spread(const RunRecord& record, int tick);

}  // namespace flowsim

#endif  // FLOWSIM_METRICS_HPP
