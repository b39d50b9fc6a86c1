#pragma once

#include <vector>

#include "volhedge/adjusted.hpp"

namespace volhedge {

// The zero-vanna point of an adjusted smile: the strike where
// log(spot/K) = 0.5 * (I^H)^2 * tau, i.e. d_minus = 0, together with the
// local slope and d_minus-convexity used by the hedging formulas.
struct ZeroVannaQuote {
    double strike = 0.0;            // K_-
    double vol = 0.0;               // I^H_-
    double slope = 0.0;             // d(I^H sqrt(tau)) / d logK at K_-
    double dminus_slope = 0.0;      // d(I^H sqrt(tau)) / d d_minus at 0
    double dminus_convexity = 0.0;  // d^2(I^H sqrt(tau)) / d d_minus^2 at 0
    bool wing_warning = false;

    // Provenance, so downstream hedging calls can verify consistency.
    double spot = 0.0;
    double t = 0.0;
    double T = 0.0;
    double accrued_var = 0.0;

    double total_vol() const;  // I^H_- * sqrt(tau)
    double tau() const { return T - t; }
};

// Solves the scalar fixed point by bisection on the adjusted smile's strike
// grid (tolerance 1e-12 in log-strike). Throws BracketingError when the grid
// does not bracket a sign change.
ZeroVannaQuote zero_vanna_point(const AdjustedSmile& adj);

// Seasoned volatility-swap value: I^H_- * sqrt(tau / T).
double seasoned_volswap_price(const MarketSmile& smile,
                              const RealizedState& realized,
                              const AdjustedConfig& config = {});
double seasoned_volswap_price(const AdjustedSmile& adj);

// Piecewise-constant deterministic vol term structure on [0, horizon].
// Segment i has value vols[i] on [end_times[i-1], end_times[i]).
class VolTermStructure {
public:
    VolTermStructure(std::vector<double> end_times, std::vector<double> vols);

    double horizon() const { return end_times_.back(); }
    double vol_at(double u) const;
    double integral_sq(double a, double b) const;  // exact piecewise integral

private:
    std::vector<double> end_times_;
    std::vector<double> vols_;
};

// Exact Black-Scholes seasoned volatility-swap value for a deterministic
// term structure: sqrt( (1/T) int_0^T sigma^2 ).
double bs_exact_seasoned_price(const VolTermStructure& ts, double t, double T);

struct GaussianIdentity {
    double lhs = 0.0;  // quadrature of int Phi(a + b x) phi(x) dx
    double rhs = 0.0;  // Phi(a / sqrt(1 + b^2))
};

// Self-test hook for the Gaussian integral identity used by the exact
// Black-Scholes analysis.
GaussianIdentity gaussian_identity_check(double a, double b);

}  // namespace volhedge
