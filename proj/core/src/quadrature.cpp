#include "volhedge/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "volhedge/errors.hpp"

namespace volhedge {

namespace {

// Orthonormal Hermite recurrence keeps values O(1) up to large n.
// Returns p_n(x) and writes p_{n-1}(x) into *prev.
double hermite_orthonormal(int n, double x, double* prev) {
    double p0 = 0.7511255444649425;  // pi^{-1/4}
    double p1 = std::sqrt(2.0) * x * p0;
    if (n == 0) {
        *prev = 0.0;
        return p0;
    }
    for (int j = 1; j < n; ++j) {
        const double p2 = x * std::sqrt(2.0 / (j + 1.0)) * p1 -
                          std::sqrt(j / (j + 1.0)) * p0;
        p0 = p1;
        p1 = p2;
    }
    *prev = p0;
    return p1;
}

GaussRule build_hermite(int n) {
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    double z = 0.0;
    double z1 = 0.0;
    double z2 = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) -
                1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * z2;
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * z2;
        } else {
            z = 2.0 * z - z2;
        }
        double pm1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double p = hermite_orthonormal(n, z, &pm1);
            const double dp = std::sqrt(2.0 * n) * pm1;
            const double dz = p / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-15 * (1.0 + std::fabs(z))) break;
        }
        hermite_orthonormal(n, z, &pm1);
        const double dp = std::sqrt(2.0 * n) * pm1;
        const double w = 2.0 / (dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
        z2 = z1;
        z1 = z;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_hermite(int n) {
    if (n < 1) throw ConfigError("gauss_hermite: node count must be positive");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_hermite(n)).first;
    }
    return it->second;
}

GaussRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ConfigError("gauss_legendre: node count must be positive");
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = z;
            for (int j = 1; j < n; ++j) {
                const double p2 = ((2.0 * j + 1.0) * z * p1 - j * p0) / (j + 1.0);
                p0 = p1;
                p1 = p2;
            }
            pp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        const double w = 2.0 * half / ((1.0 - z * z) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace volhedge
