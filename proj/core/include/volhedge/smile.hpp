#pragma once

#include <cstddef>
#include <vector>

#include "volhedge/curve.hpp"

namespace volhedge {

struct SmileQuote {
    double strike = 0.0;
    double vol = 0.0;  // annualized implied vol
};

// One expiry's implied-vol smile. Interpolation is monotone cubic in
// (log-strike, total implied variance (I*sqrt(tau))^2); total variance is
// extrapolated flat beyond the outermost quotes. Immutable once built.
class MarketSmile {
public:
    // Quotes are sorted by strike during construction. Requires T > t,
    // strictly increasing strikes after sorting, positive vols, and at
    // least five quotes.
    MarketSmile(double t, double T, double spot, std::vector<SmileQuote> quotes);

    double t() const { return t_; }
    double T() const { return T_; }
    double tau() const { return T_ - t_; }
    double spot() const { return spot_; }
    const std::vector<SmileQuote>& quotes() const { return quotes_; }
    double min_strike() const { return quotes_.front().strike; }
    double max_strike() const { return quotes_.back().strike; }
    bool in_quoted_range(double strike) const {
        return strike >= min_strike() && strike <= max_strike();
    }

    // Interpolated implied vol; reproduces quotes at quoted strikes.
    double vol(double strike) const;

    // Total implied variance (I*sqrt(tau))^2 at a strike.
    double total_var(double strike) const;

    struct Slope {
        double value = 0.0;  // d(I*sqrt(tau)) / d logK
        bool wing = false;   // true when the query left the quoted range
    };

    // Central finite difference of I(K)*sqrt(tau) in log-strike, bump 1e-3.
    // Outside the quoted range the slope is 0 with the wing flag set.
    Slope slope(double strike) const;

private:
    double t_ = 0.0;
    double T_ = 0.0;
    double spot_ = 0.0;
    std::vector<SmileQuote> quotes_;
    PchipCurve curve_;  // log-strike -> total implied variance
};

}  // namespace volhedge
