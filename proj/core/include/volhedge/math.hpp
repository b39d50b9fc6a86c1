#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace volhedge {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Standard normal CDF, evaluated as 0.5*erfc(-x/sqrt(2)).
// Absolute error below 1e-15 over the whole real line.
double norm_cdf(double x);

// Standard normal density.
double norm_pdf(double x);

// Inverse standard normal CDF (Wichura's AS 241, PPND16 variant).
// Relative error around 1e-15 for p in (0, 1).
double norm_ppf(double p);

// Neumaier-compensated sum; deterministic for a fixed element order.
double compensated_sum(std::span<const double> values);

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;   // unbiased sample variance
    double std_error = 0.0;  // sqrt(variance / n)
    std::size_t n = 0;
};

// Two-pass compensated mean/variance.
MeanVar mean_var(std::span<const double> values);

// --- deterministic RNG streams ------------------------------------------
//
// Engines are derived from (seed, stream, substream) by a splitmix64 chain
// so that per-path streams are independent of any thread schedule.

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t substream = 0);

// Uniform draw in the open interval (0, 1).
inline double uniform01(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal draw via the inverse CDF (bit-stable across platforms).
inline double normal_draw(std::mt19937_64& eng) {
    return norm_ppf(uniform01(eng));
}

}  // namespace volhedge
