#include "flowsim/engine.hpp"

#include <cmath>

namespace flowsim {

namespace {

constexpr double kTimeEps = 1e-9;
constexpr int kRadarSensor = 0;

StateVector2 propagate_kinematic(const StateVector2& x, double a_rel, double dt, int steps) {
    StateVector2 out = x;
    for (int s = 0; s < steps; ++s) {
        out = {out.p + out.v * dt + 0.5 * a_rel * dt * dt, out.v + a_rel * dt};
    }
    return out;
}

}  // namespace

Simulator::Simulator(const ValidatedConfig& vcfg)
    : cfg_(vcfg.get()),
      n_(cfg_.n_vehicles),
      n_pairs_(cfg_.n_vehicles - 1),
      delay_(cfg_.delay_ticks),
      warmup_ticks_(0),
      n_ticks_(vcfg.tick_count()) {
    pos_.resize(n_);
    vel_.assign(n_, cfg_.initial_velocity);
    applied_.assign(n_, 0.0);

    // Vehicle 0 leads; positions descend down the string.
    for (int i = 0; i < n_; ++i) {
        pos_[i] = cfg_.initial_spacing * (n_ - 1 - i);
    }

    const int pair_depth = delay_ + 1;  // multi-node views reach one tick deeper
    pair_lines_.assign(n_pairs_, DelayLine<PairPayload>(pair_depth));
    own_vel_lines_.assign(n_, DelayLine<double>(delay_));
    own_acc_lines_.assign(n_, DelayLine<double>(delay_));

    injectors_.reserve(n_pairs_);
    for (int j = 0; j < n_pairs_; ++j) {
        // Pair j is measured by the radar of its rear member, vehicle j+1.
        const std::uint64_t s = substream_seed(cfg_.rng_seed, j + 2, kRadarSensor);
        injectors_.emplace_back(cfg_.error_fraction, cfg_.noise_model, s);
    }

    if (cfg_.controller == ControllerKind::PBCM) {
        filters_.reserve(n_pairs_);
        for (int j = 0; j < n_pairs_; ++j) {
            filters_.emplace_back(cfg_.dt, cfg_.kalman.q, cfg_.kalman.r, cfg_.kalman.p0);
        }
    }

    record_.config = cfg_;
    record_.n_vehicles = n_;
    record_.n_pairs = n_pairs_;
    record_.dt = cfg_.dt;
    record_.has_estimates = cfg_.controller == ControllerKind::PBCM;
    record_.reserve(n_ticks_);

    warmup_ticks_ = static_cast<int>(std::ceil(cfg_.fm_warmup / cfg_.dt - kTimeEps));

    // Seed the pipeline with tick-0 observations so a zero-delay view is
    // already serviceable at the first decision.
    for (int i = 0; i < n_; ++i) {
        own_vel_lines_[i].push(vel_[i]);
        own_acc_lines_[i].push(0.0);
    }
    for (int j = 0; j < n_pairs_; ++j) {
        const RelativeState truth{pos_[j] - pos_[j + 1], vel_[j] - vel_[j + 1]};
        const StateVector2 meas = injectors_[j].measure(truth);
        pair_lines_[j].push({meas, 0.0});
        record_.meas_p[record_.pidx(0, j)] = meas.p;
        record_.meas_v[record_.pidx(0, j)] = meas.v;
    }
}

RelativeState Simulator::delayed_rel(int pair, int depth) const {
    const StateVector2& m = pair_lines_[pair].view(depth).meas;
    return {m.p, m.v};
}

StateVector2 Simulator::compensated_pair_state(int pair) const {
    const PairPayload& payload = pair_lines_[pair].view(delay_);
    const PairFilter& f = filters_[pair];
    if (!f.bootstrapped()) {
        return payload.meas;  // filter not warmed up yet (delay > warm-up)
    }
    // The posterior describes the state delay_ ticks ago; roll it forward to
    // now, holding the newest delivered relative acceleration.
    return propagate_kinematic(f.estimate(), payload.a_rel, cfg_.dt, delay_);
}

double Simulator::reconstructed_own_velocity(int i) const {
    // A vehicle knows every acceleration it applied, so it can roll its own
    // delayed speedometer reading forward to the present exactly.
    double v = own_vel_lines_[i].view(delay_);
    for (int k = delay_ - 1; k >= 0; --k) {
        v = std::max(0.0, predict_own_velocity(v, own_acc_lines_[i].view(k), cfg_.dt));
    }
    return v;
}

void Simulator::run_filters() {
    if (cfg_.controller != ControllerKind::PBCM || tick_ < delay_) return;
    const int slot = tick_ - delay_;
    for (int jj = 0; jj < n_pairs_; ++jj) {
        const int j = reverse_order_ ? n_pairs_ - 1 - jj : jj;
        const PairPayload& payload = pair_lines_[j].view(delay_);
        filters_[j].filter_tick(payload.meas, payload.a_rel);
        const std::size_t k = record_.pidx(slot, j);
        record_.est_p[k] = filters_[j].estimate().p;
        record_.est_v[k] = filters_[j].estimate().v;
        record_.pred_p[k] = filters_[j].prediction().p;
        record_.pred_v[k] = filters_[j].prediction().v;
    }
}

double Simulator::decide(int i) const {
    if (i == 0) {
        return 0.0;  // lead vehicle holds its velocity
    }

    const bool warmup = tick_ * cfg_.dt < cfg_.fm_warmup - kTimeEps;
    const ControllerKind active = warmup ? ControllerKind::FM : cfg_.controller;
    const bool tail = i == n_ - 1;
    const double v_del = own_vel_lines_[i].view(delay_);

    switch (active) {
        case ControllerKind::FM:
            return fm_decision(delayed_rel(i - 1, delay_), v_del, cfg_.gains);

        case ControllerKind::BCM:
            if (tail) {
                return boundary_decision(VehicleRole::Tail, delayed_rel(i - 1, delay_), v_del,
                                         cfg_.gains);
            }
            return bcm_decision(delayed_rel(i - 1, delay_), delayed_rel(i, delay_), v_del,
                                cfg_.gains);

        case ControllerKind::MBCM: {
            if (tail) {
                return boundary_decision(VehicleRole::Tail, delayed_rel(i - 1, delay_), v_del,
                                         cfg_.gains);
            }
            std::vector<NeighborTerm> terms;
            terms.reserve(cfg_.mbcm_weights.size());
            for (const auto& w : cfg_.mbcm_weights) {
                const int k = std::abs(w.offset);
                const int pidx = w.offset > 0 ? i - k : i + k - 1;
                if (pidx < 0 || pidx >= n_pairs_) continue;
                // Drop a term whose configured mirror has no pair here, so an
                // antisymmetric weight set stays balanced at the boundary.
                bool mirror_missing = false;
                for (const auto& m : cfg_.mbcm_weights) {
                    if (m.offset == -w.offset) {
                        const int mp = m.offset > 0 ? i - k : i + k - 1;
                        mirror_missing = mp < 0 || mp >= n_pairs_;
                        break;
                    }
                }
                if (mirror_missing) continue;
                // Information beyond the adjacent pair needs one more V2V hop.
                const int depth = k == 1 ? delay_ : delay_ + 1;
                terms.push_back({w.offset, delayed_rel(pidx, depth), w.weight});
            }
            if (terms.empty()) {
                return bcm_decision(delayed_rel(i - 1, delay_), delayed_rel(i, delay_), v_del,
                                    cfg_.gains);
            }
            return mbcm_decision(terms, v_del, cfg_.gains);
        }

        case ControllerKind::PBCM: {
            const double v_own = reconstructed_own_velocity(i);
            const StateVector2 front = compensated_pair_state(i - 1);
            if (tail) {
                return boundary_decision(VehicleRole::Tail, to_relative(front), v_own,
                                         cfg_.gains);
            }
            const StateVector2 rear = compensated_pair_state(i);
            return pbcm_decision(front, rear, v_own, cfg_.gains);
        }
    }
    return 0.0;
}

void Simulator::sense_and_publish() {
    const int stamp = tick_ + 1;
    for (int ii = 0; ii < n_; ++ii) {
        const int i = reverse_order_ ? n_ - 1 - ii : ii;
        own_vel_lines_[i].push(vel_[i]);
        own_acc_lines_[i].push(applied_[i]);
    }
    for (int jj = 0; jj < n_pairs_; ++jj) {
        const int j = reverse_order_ ? n_pairs_ - 1 - jj : jj;
        const RelativeState truth{pos_[j] - pos_[j + 1], vel_[j] - vel_[j + 1]};
        const StateVector2 meas = injectors_[j].measure(truth);
        pair_lines_[j].push({meas, applied_[j] - applied_[j + 1]});
        if (stamp < n_ticks_) {
            record_.meas_p[record_.pidx(stamp, j)] = meas.p;
            record_.meas_v[record_.pidx(stamp, j)] = meas.v;
        }
    }
}

std::optional<CollisionInfo> Simulator::step() {
    run_filters();

    // Synchronous decision phase: every controller sees the same published
    // snapshot, so iteration order cannot matter.
    std::vector<double> decision(n_, 0.0);
    const double ts = tick_ * cfg_.dt;
    const auto& pert = cfg_.perturbation;
    const bool pert_active =
        ts >= pert.start_time_s - kTimeEps && ts < pert.start_time_s + pert.duration_s - kTimeEps;
    for (int ii = 0; ii < n_; ++ii) {
        const int i = reverse_order_ ? n_ - 1 - ii : ii;
        double a = decide(i);
        if (pert_active && i == pert.vehicle_index - 1) {
            a = pert.acceleration;
        }
        decision[i] = clamp_acceleration(a);
    }
    applied_ = decision;

    for (int i = 0; i < n_; ++i) {
        record_.position.push_back(pos_[i]);
        record_.velocity.push_back(vel_[i]);
        record_.accel.push_back(applied_[i]);
    }
    record_.ticks_recorded = tick_ + 1;

    // Kinematic update with the decision held over the tick. A vehicle that
    // would cross zero velocity stops partway and stays stopped; it never
    // reverses.
    for (int i = 0; i < n_; ++i) {
        const double a = applied_[i];
        const double v = vel_[i];
        const double v_next = v + a * cfg_.dt;
        if (v_next < 0.0) {
            pos_[i] += -0.5 * v * v / a;
            vel_[i] = 0.0;
        } else {
            pos_[i] += v * cfg_.dt + 0.5 * a * cfg_.dt * cfg_.dt;
            vel_[i] = v_next;
        }
    }

    for (int j = 0; j < n_pairs_; ++j) {
        const double gap = pos_[j] - pos_[j + 1];
        if (gap <= cfg_.vehicle_length) {
            return CollisionInfo{tick_, j, gap};
        }
    }

    sense_and_publish();
    ++tick_;
    return std::nullopt;
}

RunResult Simulator::run() {
    std::optional<CollisionInfo> collision;
    while (tick_ < n_ticks_) {
        collision = step();
        if (collision) break;
    }
    return RunResult{std::move(record_), collision};
}

RunResult run_scenario(const ValidatedConfig& cfg) {
    Simulator sim(cfg);
    return sim.run();
}

}  // namespace flowsim
