#ifndef FLOWSIM_CONFIG_HPP
#define FLOWSIM_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flowsim/types.hpp"

namespace flowsim {

/// Scripted braking event. During the active window [start_time, start_time
/// + duration) the vehicle's controller output is replaced by `acceleration`
/// (still clamped).
struct Perturbation {
    int vehicle_index = 5;  // 1-based, lead vehicle is 1
    double start_time_s = 10.0;
    double duration_s = 2.0;
    double acceleration = -3.0;  // m/s^2
};

struct KalmanConfig {
    Matrix2 q = Matrix2::diagonal(0.01, 0.01);
    Matrix2 r = Matrix2::diagonal(14.0625, 9.0);  // see default_measurement_covariance
    Matrix2 p0 = Matrix2::identity();
};

/// R derived from the relative error fraction at the nominal operating
/// point (spacing 37.5 m, speed 30 m/s): R = diag((e*37.5)^2, (e*30)^2).
Matrix2 default_measurement_covariance(double error_fraction);

enum class NoiseModel { Multiplicative, Additive };

struct MbcmWeight {
    int offset = 0;      // signed pair offset: +k = k-th pair ahead, -k behind
    double weight = 0.0;
};

struct ScenarioConfig {
    int n_vehicles = 40;
    double road_length = 1500.0;     // m, used for initial placement only
    double vehicle_length = 5.0;     // m
    double initial_spacing = 37.5;   // m, center to center
    double initial_velocity = 30.0;  // m/s
    double dt = 0.1;                 // s, >= 0.06
    double total_duration = 500.0;   // s
    double fm_warmup = 10.0;         // s, every run starts under FM
    ControllerKind controller = ControllerKind::PBCM;
    ControllerGains gains;
    std::vector<MbcmWeight> mbcm_weights;  // antisymmetric by default
    double error_fraction = 0.03;          // in [0, 0.10]
    NoiseModel noise_model = NoiseModel::Multiplicative;
    int delay_ticks = 1;
    Perturbation perturbation;
    std::uint64_t rng_seed = 1;
    KalmanConfig kalman;

    ScenarioConfig();  // fills mbcm_weights and kalman.r defaults
};

enum class ConfigErrorCode {
    DtTooSmall,
    FleetOverflow,
    FleetTooSmall,
    BadIndex,
    NonPSDCovariance,
    NonIntegralDuration,
    BadField,
};

class ConfigError : public std::runtime_error {
  public:
    ConfigError(ConfigErrorCode code, std::string field, const std::string& message)
        : std::runtime_error(message + " (field: " + field + ")"),
          code_(code),
          field_(std::move(field)) {}

    ConfigErrorCode code() const { return code_; }
    const std::string& field() const { return field_; }

  private:
    ConfigErrorCode code_;
    std::string field_;
};

/// A ScenarioConfig that passed validate_config. Constructible only through
/// validate_config so the engine never sees an unchecked scenario.
class ValidatedConfig {
  public:
    const ScenarioConfig& get() const { return cfg_; }
    const ScenarioConfig* operator->() const { return &cfg_; }
    int tick_count() const { return tick_count_; }

  private:
    friend ValidatedConfig validate_config(const ScenarioConfig& cfg);
    ValidatedConfig(ScenarioConfig cfg, int ticks) : cfg_(std::move(cfg)), tick_count_(ticks) {}

    ScenarioConfig cfg_;
    int tick_count_;
};

/// Checks every scenario invariant; throws ConfigError naming the violated
/// field, or returns a validated copy.
ValidatedConfig validate_config(const ScenarioConfig& cfg);

const char* to_string(ControllerKind kind);
bool controller_from_string(const std::string& name, ControllerKind& out);

}  // namespace flowsim

#endif  // FLOWSIM_CONFIG_HPP
