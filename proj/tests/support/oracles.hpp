#pragma once

#include <cstdint>
#include <functional>

#include "volhedge/models.hpp"

namespace volhedge::testing {

// Adaptive Simpson quadrature, independent of the library's Gauss rules.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12);

struct JointMcPrice {
    double price = 0.0;
    double std_error = 0.0;
};

// Plain joint Euler simulation of (spot, vol): prices a vanilla call by
// averaging the payoff. Uses std::normal_distribution on its own engine, so
// it shares no code path with the mixing estimator it cross-checks.
JointMcPrice joint_euler_call_price(const SvModelSpec& spec, double strike,
                                    double T, int steps_per_year, int n_paths,
                                    std::uint32_t seed);

}  // namespace volhedge::testing
