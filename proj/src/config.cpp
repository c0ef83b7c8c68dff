#include "flowsim/config.hpp"

#include <cmath>

namespace flowsim {

namespace {

constexpr double kMinDt = 0.06;  // s, smallest tick the delay model supports
constexpr double kMaxErrorFraction = 0.10;

bool finite(double x) { return std::isfinite(x); }

void check_covariance(const Matrix2& m, const char* field) {
    if (!m.all_finite() || !m.is_valid_covariance(1e-9)) {
        throw ConfigError(ConfigErrorCode::NonPSDCovariance, field,
                          "covariance must be finite, symmetric and PSD");
    }
}

}  // namespace

Matrix2 default_measurement_covariance(double error_fraction) {
    const double sp = error_fraction * 37.5;
    const double sv = error_fraction * 30.0;
    return Matrix2::diagonal(sp * sp, sv * sv);
}

ScenarioConfig::ScenarioConfig() {
    // 2-ahead/2-behind pattern, positive side normalized to unit total so the
    // effective front gain matches plain BCM.
    mbcm_weights = {{+1, 2.0 / 3.0}, {+2, 1.0 / 3.0}, {-1, -2.0 / 3.0}, {-2, -1.0 / 3.0}};
    kalman.r = default_measurement_covariance(error_fraction);
}

ValidatedConfig validate_config(const ScenarioConfig& cfg) {
    if (!finite(cfg.dt) || cfg.dt < kMinDt) {
        throw ConfigError(ConfigErrorCode::DtTooSmall, "dt_s",
                          "tick must be at least 0.06 s to cover the modeled delay");
    }
    if (cfg.n_vehicles < 2) {
        throw ConfigError(ConfigErrorCode::FleetTooSmall, "n_vehicles",
                          "need at least 2 vehicles (no pairs to control)");
    }
    if (!finite(cfg.road_length) || cfg.road_length <= 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "road_length_m", "road length must be > 0");
    }
    if (!finite(cfg.vehicle_length) || cfg.vehicle_length <= 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "vehicle_length_m",
                          "vehicle length must be > 0");
    }
    if (!finite(cfg.initial_spacing) || cfg.initial_spacing <= cfg.vehicle_length) {
        throw ConfigError(ConfigErrorCode::BadField, "initial_spacing_m",
                          "initial spacing must exceed the vehicle length");
    }
    if (cfg.initial_spacing * (cfg.n_vehicles - 1) > cfg.road_length) {
        throw ConfigError(ConfigErrorCode::FleetOverflow, "initial_spacing_m",
                          "fleet does not fit on the road at the requested spacing");
    }
    if (!finite(cfg.initial_velocity) || cfg.initial_velocity < 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "initial_velocity_mps",
                          "initial velocity must be >= 0");
    }
    if (!finite(cfg.total_duration) || cfg.total_duration <= 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "total_duration_s",
                          "duration must be > 0");
    }
    const double ticks_exact = cfg.total_duration / cfg.dt;
    const double ticks_round = std::round(ticks_exact);
    if (std::abs(ticks_exact - ticks_round) > 1e-9 || ticks_round < 1.0) {
        throw ConfigError(ConfigErrorCode::NonIntegralDuration, "total_duration_s",
                          "total duration must be an integer number of ticks");
    }
    if (!finite(cfg.fm_warmup) || cfg.fm_warmup < 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "fm_warmup_s", "warmup must be >= 0");
    }
    if (!finite(cfg.gains.k_d) || cfg.gains.k_d <= 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "gains.k_d", "k_d must be > 0");
    }
    if (!finite(cfg.gains.k_v) || cfg.gains.k_v <= 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "gains.k_v", "k_v must be > 0");
    }
    if (!finite(cfg.gains.k_c) || cfg.gains.k_c < 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "gains.k_c",
                          "k_c is a damping magnitude and must be >= 0");
    }
    if (!finite(cfg.gains.v_des) || cfg.gains.v_des < 0.0) {
        throw ConfigError(ConfigErrorCode::BadField, "gains.v_des_mps", "v_des must be >= 0");
    }
    if (!finite(cfg.gains.p_des) || cfg.gains.p_des <= cfg.vehicle_length) {
        throw ConfigError(ConfigErrorCode::BadField, "gains.p_des_m",
                          "p_des must exceed the vehicle length");
    }
    if (cfg.mbcm_weights.empty() && cfg.controller == ControllerKind::MBCM) {
        throw ConfigError(ConfigErrorCode::BadField, "mbcm.weights",
                          "MBCM requires a non-empty weight list");
    }
    for (const auto& w : cfg.mbcm_weights) {
        if (w.offset == 0 || std::abs(w.offset) >= cfg.n_vehicles) {
            throw ConfigError(ConfigErrorCode::BadField, "mbcm.weights",
                              "weight offsets must be nonzero and smaller than the fleet");
        }
        if (!finite(w.weight)) {
            throw ConfigError(ConfigErrorCode::BadField, "mbcm.weights",
                              "weights must be finite");
        }
    }
    if (!finite(cfg.error_fraction) || cfg.error_fraction < 0.0 ||
        cfg.error_fraction > kMaxErrorFraction) {
        throw ConfigError(ConfigErrorCode::BadField, "error_fraction",
                          "error fraction must lie in [0, 0.10]");
    }
    if (cfg.delay_ticks < 0) {
        throw ConfigError(ConfigErrorCode::BadField, "delay_ticks", "delay must be >= 0 ticks");
    }
    if (cfg.perturbation.vehicle_index < 1 || cfg.perturbation.vehicle_index > cfg.n_vehicles) {
        throw ConfigError(ConfigErrorCode::BadIndex, "perturbation.vehicle_index",
                          "perturbed vehicle index out of range");
    }
    if (!finite(cfg.perturbation.start_time_s) || cfg.perturbation.start_time_s < 0.0 ||
        !finite(cfg.perturbation.duration_s) || cfg.perturbation.duration_s < 0.0 ||
        !finite(cfg.perturbation.acceleration)) {
        throw ConfigError(ConfigErrorCode::BadField, "perturbation",
                          "perturbation times must be >= 0 and acceleration finite");
    }
    check_covariance(cfg.kalman.q, "kalman.q");
    check_covariance(cfg.kalman.r, "kalman.r");
    check_covariance(cfg.kalman.p0, "kalman.p0");

    return ValidatedConfig(cfg, static_cast<int>(ticks_round));
}

const char* to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::FM: return "fm";
        case ControllerKind::BCM: return "bcm";
        case ControllerKind::MBCM: return "mbcm";
        case ControllerKind::PBCM: return "pbcm";
    }
    return "unknown";
}

bool controller_from_string(const std::string& name, ControllerKind& out) {
    if (name == "fm") { out = ControllerKind::FM; return true; }
    if (name == "bcm") { out = ControllerKind::BCM; return true; }
    if (name == "mbcm") { out = ControllerKind::MBCM; return true; }
    if (name == "pbcm") { out = ControllerKind::PBCM; return true; }
    return false;
}

}  // namespace flowsim
