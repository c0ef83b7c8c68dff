#include "flowsim/artifacts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <stdexcept>

#include <json.hpp>

#include "flowsim/engine.hpp"
#include "flowsim/scenario_io.hpp"

namespace flowsim {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    return f;
}

int tick_at(const RunRecord& r, double time_s) {
    const int t = static_cast<int>(std::lround(time_s / r.dt));
    return std::min(std::max(t, 0), r.ticks_recorded - 1);
}

}  // namespace

CaseSpec case_spec(int case_id) {
    if (case_id < 1 || case_id > kCaseCount) {
        throw ConfigError(ConfigErrorCode::BadIndex, "case",
                          "unknown case id (valid: 1..16)");
    }
    static constexpr ControllerKind kModels[] = {ControllerKind::FM, ControllerKind::BCM,
                                                 ControllerKind::MBCM, ControllerKind::PBCM};
    const int group = (case_id - 1) / 4;
    const int cell = (case_id - 1) % 4;
    CaseSpec spec;
    spec.case_id = case_id;
    spec.model = kModels[group];
    spec.error_fraction = cell < 2 ? 0.03 : 0.10;
    spec.delay_s = cell % 2 == 0 ? 0.1 : 0.2;
    return spec;
}

ScenarioConfig case_config(int case_id, std::uint64_t seed) {
    const CaseSpec spec = case_spec(case_id);
    ScenarioConfig cfg;  // Table-style simulation preset is the default config
    cfg.controller = spec.model;
    cfg.error_fraction = spec.error_fraction;
    cfg.delay_ticks = static_cast<int>(std::lround(spec.delay_s / cfg.dt));
    cfg.rng_seed = seed;
    cfg.kalman.r = default_measurement_covariance(spec.error_fraction);
    return cfg;
}

void write_run_csv(const RunRecord& r, const std::string& path) {
    auto f = open_out(path);
    f << "tick,time_s,index,p_true,v_true,a_applied";
    if (r.has_estimates) {
        f << ",meas_p,meas_v,pred_p,pred_v,est_p,est_v";
    }
    f << "\n";
    for (int t = 0; t < r.ticks_recorded; ++t) {
        for (int i = 0; i < r.n_vehicles; ++i) {
            f << t << ',' << fmt(r.time_s(t)) << ',' << i + 1 << ',' << fmt(r.pos(t, i))
              << ',' << fmt(r.vel(t, i)) << ',' << fmt(r.acc(t, i));
            if (r.has_estimates) {
                // Pair columns describe the vehicle's front pair; the lead has none.
                if (i == 0) {
                    f << ",,,,,,";
                    f.seekp(-1, std::ios_base::cur);
                } else {
                    const std::size_t k = r.pidx(t, i - 1);
                    f << ',' << fmt(r.meas_p[k]) << ',' << fmt(r.meas_v[k]) << ','
                      << fmt(r.pred_p[k]) << ',' << fmt(r.pred_v[k]) << ','
                      << fmt(r.est_p[k]) << ',' << fmt(r.est_v[k]);
                }
            }
            f << "\n";
        }
    }
}

void write_run_json(const RunRecord& r, const std::string& path) {
    nlohmann::json j;
    j["ticks"] = r.ticks_recorded;
    j["n_vehicles"] = r.n_vehicles;
    j["dt_s"] = r.dt;
    j["position"] = r.position;
    j["velocity"] = r.velocity;
    j["accel"] = r.accel;
    if (r.has_estimates) {
        j["meas_p"] = r.meas_p;
        j["meas_v"] = r.meas_v;
        j["pred_p"] = r.pred_p;
        j["pred_v"] = r.pred_v;
        j["est_p"] = r.est_p;
        j["est_v"] = r.est_v;
    }
    auto f = open_out(path);
    f << j.dump();
}

void write_distance_csv(const RunRecord& r, const DistanceSummary& s, const std::string& path) {
    auto f = open_out(path);
    f << "tick,time_s,min_distance,max_distance\n";
    for (int t = 0; t < r.ticks_recorded; ++t) {
        f << t << ',' << fmt(r.time_s(t)) << ',' << fmt(s.min_distance[t]) << ','
          << fmt(s.max_distance[t]) << "\n";
    }
}

void write_heatmap_csv(const RunRecord& r, const HeatmapMatrix& m, const std::string& path) {
    auto f = open_out(path);
    f << "vehicle";
    for (int c = 0; c < m.cols; ++c) f << ',' << fmt(r.time_s(m.sampled_ticks[c]));
    f << "\n";
    for (int i = 0; i < m.rows; ++i) {
        f << i + 1;
        for (int c = 0; c < m.cols; ++c) f << ',' << fmt(m.at(i, c));
        f << "\n";
    }
}

void write_error_bar_csv(const std::vector<WindowStat>& stats, double window_s,
                         const std::string& path) {
    auto f = open_out(path);
    f << "window,start_time_s,mean,rmse\n";
    for (std::size_t w = 0; w < stats.size(); ++w) {
        f << w << ',' << fmt(w * window_s) << ',' << fmt(stats[w].mean) << ','
          << fmt(stats[w].rmse) << "\n";
    }
}

void write_fit_csv(int case_id, const ErrorReductionStats& position,
                   const ErrorReductionStats& velocity, const std::string& path) {
    auto f = open_out(path);
    f << "case_id,quantity,r2_measured,r2_estimated,rmse_measured,rmse_estimated\n";
    f << case_id << ",rel_position," << fmt(position.measured.r_squared) << ','
      << fmt(position.estimated.r_squared) << ',' << fmt(position.measured.rmse) << ','
      << fmt(position.estimated.rmse) << "\n";
    f << case_id << ",rel_velocity," << fmt(velocity.measured.r_squared) << ','
      << fmt(velocity.estimated.r_squared) << ',' << fmt(velocity.measured.rmse) << ','
      << fmt(velocity.estimated.rmse) << "\n";
}

void write_summary_json(const CaseOutcome& o, double runtime_ms, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["case_id"] = o.case_id;
    j["model"] = to_string(o.config.controller);
    j["seed"] = o.config.rng_seed;
    j["error_fraction"] = o.config.error_fraction;
    j["delay_ticks"] = o.config.delay_ticks;
    j["dt_s"] = o.config.dt;
    j["total_duration_s"] = o.config.total_duration;
    j["n_vehicles"] = o.config.n_vehicles;
    j["collided"] = o.collided;
    if (o.collision) {
        j["collision"] = {{"tick", o.collision->tick},
                          {"pair_index", o.collision->pair_index},
                          {"gap_m", o.collision->gap}};
    }
    j["final_min_distance_m"] = o.final_min_distance;
    j["final_max_distance_m"] = o.final_max_distance;
    j["min_distance_drop_m"] = o.min_distance_drop;
    j["settling_time_s"] = o.settling_time_s;
    j["settling_value_m"] = o.settling_value;
    j["velocity_spread_100s_mps"] = o.velocity_spread_100s;
    j["runtime_ms"] = runtime_ms;
    auto f = open_out(path);
    f << j.dump(2) << "\n";
}

void write_comparison_csv(const std::vector<CaseOutcome>& outcomes, const std::string& path) {
    auto f = open_out(path);
    f << "case_id,model,error_fraction,delay_s,collided,final_min_distance,"
         "final_max_distance,min_distance_drop,settling_time_s,velocity_spread_100s\n";
    for (const auto& o : outcomes) {
        f << o.case_id << ',' << to_string(o.config.controller) << ','
          << fmt(o.config.error_fraction) << ','
          << fmt(o.config.delay_ticks * o.config.dt) << ',' << (o.collided ? 1 : 0) << ','
          << fmt(o.final_min_distance) << ',' << fmt(o.final_max_distance) << ','
          << fmt(o.min_distance_drop) << ',' << fmt(o.settling_time_s) << ','
          << fmt(o.velocity_spread_100s) << "\n";
    }
}

CaseOutcome run_and_export(const ScenarioConfig& cfg, int case_id, const std::string& dir,
                           ExportFormat format) {
    const auto started = std::chrono::steady_clock::now();
    std::filesystem::create_directories(dir);

    const ValidatedConfig valid = validate_config(cfg);
    RunResult result = run_scenario(valid);
    const RunRecord& r = result.record;

    CaseOutcome o;
    o.case_id = case_id;
    o.config = cfg;
    o.collided = result.collision.has_value();
    o.collision = result.collision;
    o.directory = dir;

    {
        auto f = open_out(dir + "/scenario.ini");
        f << serialize_scenario(cfg);
    }
    if (format == ExportFormat::Json) {
        write_run_json(r, dir + "/run.json");
    } else {
        write_run_csv(r, dir + "/run.csv");
    }

    if (r.n_pairs >= 3 && r.ticks_recorded > 0) {
        const DistanceSummary s = distance_summary(r);
        write_distance_csv(r, s, dir + "/distance.csv");

        const int last = r.ticks_recorded - 1;
        o.final_min_distance = s.min_distance[last];
        o.final_max_distance = s.max_distance[last];
        o.settling_time_s = s.settling_time_s;
        o.settling_value = s.settling_value;

        const int pert_tick = tick_at(r, cfg.perturbation.start_time_s);
        const int trough_end = std::min(r.ticks_recorded,
                                        pert_tick + static_cast<int>(std::lround(100.0 / r.dt)));
        o.pre_braking_min_distance = s.min_distance[pert_tick];
        o.min_distance_trough = o.pre_braking_min_distance;
        for (int t = pert_tick; t < trough_end; ++t) {
            o.min_distance_trough = std::min(o.min_distance_trough, s.min_distance[t]);
        }
        o.min_distance_drop = o.pre_braking_min_distance - o.min_distance_trough;

        if (r.ticks_recorded * r.dt > 100.0) {
            o.velocity_spread_100s = velocity_spread(r, tick_at(r, 100.0));
        }

        const int window = std::min(static_cast<int>(std::lround(50.0 / r.dt)),
                                    r.ticks_recorded);
        if (window >= 1) {
            const int usable = (r.ticks_recorded / window) * window;
            std::vector<double> series(s.min_distance.begin(),
                                       s.min_distance.begin() + usable);
            if (!series.empty()) {
                write_error_bar_csv(error_bar(series, window), window * r.dt,
                                    dir + "/error_bar.csv");
            }
        }
    }

    if (r.ticks_recorded > 0) {
        int stride = static_cast<int>(std::lround(1.0 / r.dt));
        if (stride < 1 || r.ticks_recorded % stride != 0) stride = 1;
        write_heatmap_csv(r, heatmap_matrix(r, stride), dir + "/heatmap.csv");
    }

    if (r.has_estimates && r.ticks_recorded > 1) {
        write_fit_csv(case_id, error_reduction_stats(r, 0), error_reduction_stats(r, 1),
                      dir + "/fit_stats.csv");
    }

    const auto elapsed = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - started);
    write_summary_json(o, elapsed.count(), dir + "/summary.json");
    return o;
}

CaseOutcome run_case(int case_id, std::uint64_t seed, const std::string& out_dir,
                     ExportFormat format) {
    char name[16];
    std::snprintf(name, sizeof(name), "case_%02d", case_id);
    return run_and_export(case_config(case_id, seed), case_id, out_dir + "/" + name, format);
}

std::vector<CaseOutcome> run_matrix(std::uint64_t seed, const std::string& out_dir, int jobs,
                                    ExportFormat format) {
    std::filesystem::create_directories(out_dir);
    std::vector<CaseOutcome> outcomes(kCaseCount);
    const int workers = std::max(1, jobs);

    int next_case = 1;
    while (next_case <= kCaseCount) {
        std::vector<std::future<std::pair<int, CaseOutcome>>> batch;
        for (int w = 0; w < workers && next_case <= kCaseCount; ++w, ++next_case) {
            const int id = next_case;
            batch.push_back(std::async(std::launch::async, [=]() {
                return std::make_pair(id, run_case(id, seed, out_dir, format));
            }));
        }
        for (auto& fut : batch) {
            auto [id, outcome] = fut.get();
            outcomes[id - 1] = std::move(outcome);
        }
    }

    write_comparison_csv(outcomes, out_dir + "/comparison.csv");
    return outcomes;
}

}  // namespace flowsim
