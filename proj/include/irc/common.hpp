#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace irc {

using ComplexGain = std::complex<double>;

// Shannon capacity for complex signals, log2(1 + SINR). Tiny negative SINRs
// from floating-point cancellation clamp to zero rate.
inline double capacity(double sinr) {
    return sinr > 0.0 ? std::log2(1.0 + sinr) : 0.0;
}

inline double sq(double x) { return x * x; }

inline double mag2(const ComplexGain& c) {
    return c.real() * c.real() + c.imag() * c.imag();
}

// Power unit conversions. Configs may quote dBm; all internal math is linear.
inline double dbm_to_linear(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double linear_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Deterministic random source for scenario generation and property tests.
// mt19937_64 plus hand-rolled conversions so that a seed pins the byte stream
// independently of the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace irc
