#include "flowsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace flowsim {

std::pair<double, double> min_max_distance(const RunRecord& record, int tick) {
    if (record.n_pairs < 3) throw TooFewVehicles();
    std::vector<double> gaps(record.n_pairs);
    for (int j = 0; j < record.n_pairs; ++j) gaps[j] = record.gap(tick, j);
    std::partial_sort(gaps.begin(), gaps.begin() + 3, gaps.end());
    const double min3 = (gaps[0] + gaps[1] + gaps[2]) / 3.0;
    std::nth_element(gaps.begin(), gaps.end() - 3, gaps.end());
    std::sort(gaps.end() - 3, gaps.end());
    const double max3 = (gaps[record.n_pairs - 3] + gaps[record.n_pairs - 2] +
                         gaps[record.n_pairs - 1]) / 3.0;
    return {min3, max3};
}

FitStats fit_stats(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("fit_stats: series must have equal length >= 2");
    }
    const double n = static_cast<double>(b.size());
    double mean_b = 0.0;
    for (double x : b) mean_b += x;
    mean_b /= n;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double r = a[i] - b[i];
        const double d = b[i] - mean_b;
        ss_res += r * r;
        ss_tot += d * d;
    }
    if (ss_tot < 1e-30) throw DegenerateSeries();
    return {1.0 - ss_res / ss_tot, std::sqrt(ss_res / n)};
}

DistanceSummary distance_summary(const RunRecord& record, double band_m) {
    DistanceSummary out;
    const int ticks = record.ticks_recorded;
    out.min_distance.resize(ticks);
    out.max_distance.resize(ticks);
    for (int t = 0; t < ticks; ++t) {
        const auto mm = min_max_distance(record, t);
        out.min_distance[t] = mm.first;
        out.max_distance[t] = mm.second;
    }

    const int tail = std::min(ticks, static_cast<int>(std::lround(50.0 / record.dt)));
    double final_mean = 0.0;
    for (int t = ticks - tail; t < ticks; ++t) final_mean += out.min_distance[t];
    final_mean /= std::max(1, tail);
    out.settling_value = final_mean;

    const int pert_tick = static_cast<int>(
        std::lround(record.config.perturbation.start_time_s / record.dt));
    int first_stable = ticks;  // one past the last violation
    for (int t = ticks - 1; t >= 0; --t) {
        if (std::abs(out.min_distance[t] - final_mean) > band_m) break;
        first_stable = t;
    }
    if (first_stable < ticks) {
        out.settling_tick = std::max(first_stable, std::min(pert_tick, ticks - 1));
        out.settling_time_s = out.settling_tick * record.dt -
                              record.config.perturbation.start_time_s;
        if (out.settling_time_s < 0.0) out.settling_time_s = 0.0;
    }
    return out;
}

HeatmapMatrix heatmap_matrix(const RunRecord& record, int stride_ticks) {
    if (stride_ticks <= 0 || record.ticks_recorded % stride_ticks != 0) {
        throw std::invalid_argument("heatmap_matrix: stride must divide the record length");
    }
    HeatmapMatrix m;
    m.rows = record.n_vehicles;
    m.cols = record.ticks_recorded / stride_ticks;
    m.sampled_ticks.resize(m.cols);
    m.values.resize(static_cast<std::size_t>(m.rows) * m.cols);
    for (int c = 0; c < m.cols; ++c) {
        const int t = c * stride_ticks;
        m.sampled_ticks[c] = t;
        for (int i = 0; i < m.rows; ++i) {
            m.values[static_cast<std::size_t>(i) * m.cols + c] = record.vel(t, i);
        }
    }
    return m;
}

std::vector<WindowStat> error_bar(const std::vector<double>& series, int window_ticks) {
    if (window_ticks <= 0 || series.empty() || series.size() % window_ticks != 0) {
        throw std::invalid_argument("error_bar: window must divide the series length");
    }
    const int n_windows = static_cast<int>(series.size()) / window_ticks;
    std::vector<WindowStat> out(n_windows);
    for (int w = 0; w < n_windows; ++w) {
        double mean = 0.0;
        for (int k = 0; k < window_ticks; ++k) mean += series[w * window_ticks + k];
        mean /= window_ticks;
        double ss = 0.0;
        for (int k = 0; k < window_ticks; ++k) {
            const double d = series[w * window_ticks + k] - mean;
            ss += d * d;
        }
        out[w] = {mean, std::sqrt(ss / window_ticks)};
    }
    return out;
}

ErrorReductionStats error_reduction_stats(const RunRecord& record, int component) {
    if (!record.has_estimates) {
        throw std::invalid_argument("error_reduction_stats: record has no estimates");
    }
    if (component != 0 && component != 1) {
        throw std::invalid_argument("error_reduction_stats: component must be 0 or 1");
    }
    std::vector<double> truth, meas, est;
    for (int t = 0; t < record.ticks_recorded; ++t) {
        for (int j = 0; j < record.n_pairs; ++j) {
            const std::size_t k = record.pidx(t, j);
            const double e = component == 0 ? record.est_p[k] : record.est_v[k];
            if (std::isnan(e)) continue;  // no estimate refers to this slot
            const double m = component == 0 ? record.meas_p[k] : record.meas_v[k];
            const RelativeState rel = record.true_rel(t, j);
            truth.push_back(component == 0 ? rel.rel_position : rel.rel_velocity);
            meas.push_back(m);
            est.push_back(e);
        }
    }
    return {fit_stats(meas, truth), fit_stats(est, truth)};
}

double velocity_spread(const RunRecord& record, int tick) {
    double mean = 0.0;
    for (int i = 0; i < record.n_vehicles; ++i) mean += record.vel(tick, i);
    mean /= record.n_vehicles;
    double ss = 0.0;
    for (int i = 0; i < record.n_vehicles; ++i) {
        const double d = record.vel(tick, i) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / record.n_vehicles);
}

}  // namespace flowsim
