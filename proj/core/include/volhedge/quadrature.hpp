#pragma once

#include <vector>

namespace volhedge {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Hermite rule for weight exp(-x^2) on the real line.
// Rules are cached per node count; references stay valid for process life.
const GaussRule& gauss_hermite(int n);

// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

}  // namespace volhedge
