#ifndef FLOWSIM_ENGINE_HPP
#define FLOWSIM_ENGINE_HPP

#include <optional>
#include <vector>

#include "flowsim/config.hpp"
#include "flowsim/controllers.hpp"
#include "flowsim/delay_line.hpp"
#include "flowsim/estimation.hpp"
#include "flowsim/noise.hpp"
#include "flowsim/run_record.hpp"

namespace flowsim {

/// Deterministic fixed-step engine for a single-lane vehicle string.
///
/// Per tick: every controller reads a snapshot of the world that is
/// delay_ticks old (sensing, V2V and control-loop latency modeled jointly),
/// decisions are clamped and optionally overridden by the scripted braking
/// event, kinematics integrate with the decision held over the tick, and
/// fresh noisy pair measurements enter the delay pipeline. All decisions of
/// a tick read the previously published state, so update order is
/// irrelevant.
///
/// PBCM vehicles additionally run one Kalman cycle per tracked pair and
/// propagate the posterior forward by delay_ticks kinematic steps (holding
/// the last delivered relative acceleration) so the decision acts on an
/// estimate of the current state rather than the stale snapshot.
class Simulator {
  public:
    explicit Simulator(const ValidatedConfig& cfg);

    /// Advances one tick. Returns the collision that ended the run, if any.
    std::optional<CollisionInfo> step();

    /// Runs to completion (or collision) and takes the record.
    RunResult run();

    int tick() const { return tick_; }
    const std::vector<double>& positions() const { return pos_; }
    const std::vector<double>& velocities() const { return vel_; }

    /// Test seam: iterate vehicles/pairs in descending order. Results must
    /// be identical because updates are synchronous.
    void set_reverse_update_order(bool reverse) { reverse_order_ = reverse; }

  private:
    struct PairPayload {
        StateVector2 meas;   // noisy relative state at the stamp tick
        double a_rel = 0.0;  // relative acceleration over the interval ending
                             // at the stamp tick (applied, clamped decisions)
    };

    void sense_and_publish();
    void run_filters();
    double decide(int i) const;
    StateVector2 compensated_pair_state(int pair) const;
    double reconstructed_own_velocity(int i) const;
    RelativeState delayed_rel(int pair, int depth) const;

    ScenarioConfig cfg_;
    int n_;
    int n_pairs_;
    int delay_;
    int warmup_ticks_;
    int n_ticks_;

    std::vector<double> pos_;
    std::vector<double> vel_;
    std::vector<double> applied_;

    std::vector<DelayLine<PairPayload>> pair_lines_;
    std::vector<DelayLine<double>> own_vel_lines_;
    std::vector<DelayLine<double>> own_acc_lines_;
    std::vector<NoiseInjector> injectors_;
    std::vector<PairFilter> filters_;

    RunRecord record_;
    int tick_ = 0;
    bool reverse_order_ = false;
};

/// Full scenario run: FM warm-up, model switch, perturbation, metrics-ready
/// record. Deterministic for a fixed config (seed included).
RunResult run_scenario(const ValidatedConfig& cfg);

}  // namespace flowsim

#endif  // FLOWSIM_ENGINE_HPP
