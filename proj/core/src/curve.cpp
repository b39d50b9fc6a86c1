#include "volhedge/curve.hpp"

#include <algorithm>
#include <cmath>

#include "volhedge/errors.hpp"

namespace volhedge {

namespace {

double edge_slope(double h0, double h1, double m0, double m1) {
    // One-sided three-point estimate, limited to stay shape-preserving.
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (d * m0 <= 0.0) {
        d = 0.0;
    } else if (m0 * m1 < 0.0 && std::fabs(d) > 3.0 * std::fabs(m0)) {
        d = 3.0 * m0;
    }
    return d;
}

}  // namespace

PchipCurve::PchipCurve(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n == 0 || n != y_.size()) {
        throw ConfigError("PchipCurve: empty or mismatched node arrays");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(x_[i] < x_[i + 1])) {
            throw ConfigError("PchipCurve: abscissae must be strictly increasing");
        }
    }
    d_.assign(n, 0.0);
    if (n == 1) return;
    if (n == 2) {
        const double m = (y_[1] - y_[0]) / (x_[1] - x_[0]);
        d_[0] = d_[1] = m;
        return;
    }
    std::vector<double> h(n - 1);
    std::vector<double> m(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        m[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (m[i - 1] * m[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / m[i - 1] + w2 / m[i]);
        }
    }
    d_[0] = edge_slope(h[0], h[1], m[0], m[1]);
    d_[n - 1] = edge_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
}

double PchipCurve::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

}  // namespace volhedge
