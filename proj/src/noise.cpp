#include "flowsim/noise.hpp"

#include <cmath>

namespace flowsim {

namespace {

// splitmix64, the usual seed scrambler.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

NormalStream::NormalStream(std::uint64_t seed) : state_(seed) {
    // Scramble once so nearby seeds do not start in nearby states.
    (void)next_u64();
}

std::uint64_t NormalStream::next_u64() { return splitmix64(state_); }

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on two uniforms in (0, 1].
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740993.0);
    const double u2 =
        static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t substream_seed(std::uint64_t seed, int vehicle_index, int sensor_id) {
    std::uint64_t x = seed;
    (void)splitmix64(x);
    x ^= 0x5851F42D4C957F2Dull * static_cast<std::uint64_t>(vehicle_index + 1);
    (void)splitmix64(x);
    x ^= 0x14057B7EF767814Full * static_cast<std::uint64_t>(sensor_id + 1);
    return splitmix64(x);
}

NoiseInjector::NoiseInjector(double error_fraction, NoiseModel model,
                             std::uint64_t stream_seed)
    : e_(error_fraction), model_(model), stream_(stream_seed) {}

StateVector2 NoiseInjector::measure(const RelativeState& truth) {
    const double zp = stream_.next();
    const double zv = stream_.next();
    if (model_ == NoiseModel::Multiplicative) {
        return {truth.rel_position * (1.0 + e_ * zp), truth.rel_velocity * (1.0 + e_ * zv)};
    }
    return {truth.rel_position + e_ * 37.5 * zp, truth.rel_velocity + e_ * 30.0 * zv};
}

}  // namespace flowsim
