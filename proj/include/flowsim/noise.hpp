#ifndef FLOWSIM_NOISE_HPP
#define FLOWSIM_NOISE_HPP

#include <cstdint>

#include "flowsim/config.hpp"
#include "flowsim/types.hpp"

namespace flowsim {

/// Deterministic standard-normal stream. Keeps its own xoshiro-style 64-bit
/// generator and a Box-Muller spare so identical seeds give bit-identical
/// sequences on any platform, independent of the standard library.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed);

    double next();

  private:
    std::uint64_t next_u64();

    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Derives an independent substream id for (seed, vehicle, sensor).
std::uint64_t substream_seed(std::uint64_t seed, int vehicle_index, int sensor_id);

/// Measurement corruption for one sensor. Multiplicative mode scales each
/// component by (1 + e*z); additive mode shifts by e*z*nominal scale
/// (37.5 m, 30 m/s). e = 0 reproduces the truth bit-exactly in both modes.
class NoiseInjector {
  public:
    NoiseInjector(double error_fraction, NoiseModel model, std::uint64_t stream_seed);

    StateVector2 measure(const RelativeState& truth);

    double error_fraction() const { return e_; }

  private:
    double e_;
    NoiseModel model_;
    NormalStream stream_;
};

}  // namespace flowsim

#endif  // FLOWSIM_NOISE_HPP
