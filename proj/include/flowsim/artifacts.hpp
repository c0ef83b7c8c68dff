#ifndef FLOWSIM_ARTIFACTS_HPP
#define FLOWSIM_ARTIFACTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowsim/config.hpp"
#include "flowsim/metrics.hpp"
#include "flowsim/run_record.hpp"

namespace flowsim {

inline constexpr int kCaseCount = 16;

/// One row of the experiment matrix: model x measurement error x delay,
/// with the braking event fixed (vehicle 5, -3 m/s^2 for 2 s at 10 s).
struct CaseSpec {
    int case_id = 0;  // 1..16
    ControllerKind model = ControllerKind::FM;
    double error_fraction = 0.03;  // 0.03 or 0.10
    double delay_s = 0.1;          // 0.1 or 0.2
};

/// Matrix row for a 1-based case id. Throws ConfigError("case") outside 1..16.
CaseSpec case_spec(int case_id);

/// Scenario for a case id: simulation preset plus the case's cell.
ScenarioConfig case_config(int case_id, std::uint64_t seed);

enum class ExportFormat { Csv, Json };

struct CaseOutcome {
    int case_id = 0;  // 0 for ad-hoc scenario runs
    ScenarioConfig config;
    bool collided = false;
    std::optional<CollisionInfo> collision;
    double final_min_distance = 0.0;
    double final_max_distance = 0.0;
    double pre_braking_min_distance = 0.0;
    double min_distance_trough = 0.0;  // lowest MinDistance within 100 s of braking
    double min_distance_drop = 0.0;    // pre-braking minus trough
    double settling_time_s = -1.0;
    double settling_value = 0.0;
    double velocity_spread_100s = -1.0;
    std::string directory;
};

/// Runs one scenario and writes the full artifact set (config echo, run
/// record, distance/heatmap/error-bar CSVs, fit stats for PBCM, summary
/// JSON) into `dir`. Creates the directory if needed.
CaseOutcome run_and_export(const ScenarioConfig& cfg, int case_id, const std::string& dir,
                           ExportFormat format);

/// Runs a preset case into out_dir/case_NN.
CaseOutcome run_case(int case_id, std::uint64_t seed, const std::string& out_dir,
                     ExportFormat format = ExportFormat::Csv);

/// All 16 cases with a shared seed, up to `jobs` in parallel. Continues past
/// per-case collisions and writes out_dir/comparison.csv.
std::vector<CaseOutcome> run_matrix(std::uint64_t seed, const std::string& out_dir,
                                    int jobs = 1, ExportFormat format = ExportFormat::Csv);

// Individual exporters (also used by tests).
void write_run_csv(const RunRecord& record, const std::string& path);
void write_run_json(const RunRecord& record, const std::string& path);
void write_distance_csv(const RunRecord& record, const DistanceSummary& summary,
                        const std::string& path);
void write_heatmap_csv(const RunRecord& record, const HeatmapMatrix& matrix,
                       const std::string& path);
void write_error_bar_csv(const std::vector<WindowStat>& stats, double window_s,
                         const std::string& path);
void write_fit_csv(int case_id, const ErrorReductionStats& position,
                   const ErrorReductionStats& velocity, const std::string& path);
void write_summary_json(const CaseOutcome& outcome, double runtime_ms,
                        const std::string& path);
void write_comparison_csv(const std::vector<CaseOutcome>& outcomes, const std::string& path);

}  // namespace flowsim

#endif  // FLOWSIM_ARTIFACTS_HPP
