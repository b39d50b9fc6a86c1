#pragma once

#include <vector>

namespace volhedge {

// Monotone cubic Hermite interpolant (Fritsch-Carlson). Node slopes use the
// weighted-harmonic-mean rule with one-sided parabolic end slopes, so data
// monotone on a segment stays monotone and values never leave the local node
// range. Evaluation is flat beyond the first/last node.
class PchipCurve {
public:
    PchipCurve() = default;
    PchipCurve(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;  // node derivatives
};

}  // namespace volhedge
