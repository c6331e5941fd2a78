#pragma once

#include <cstdint>
#include <random>

namespace serlab {

/// Deterministic standard-normal stream on top of mt19937_64.
/// Box-Muller with a cached spare keeps the draw sequence a pure function
/// of the seed (no rejection, no library-dependent distribution code).
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : eng_(seed) {}

    /// uniform in (0, 1]
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double two_pi = 6.283185307179586476925286766559;
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace serlab
