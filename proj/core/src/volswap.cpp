#include "volhedge/volswap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "volhedge/errors.hpp"
#include "volhedge/math.hpp"
#include "volhedge/quadrature.hpp"

namespace volhedge {

double ZeroVannaQuote::total_vol() const { return vol * std::sqrt(tau()); }

namespace {

// Least-squares quadratic y = a + b d + c d^2 through the five d_minus nodes
// nearest zero. Spline second derivatives are noisy at node boundaries; the
// local fit is not.
void dminus_local_fit(const AdjustedSmile& adj, double* slope_out,
                      double* convexity_out) {
    const auto& nodes = adj.dminus_nodes();
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(nodes[a].d_minus) < std::fabs(nodes[b].d_minus);
    });
    const std::size_t m = std::min<std::size_t>(5, order.size());
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = nodes[order[i]].d_minus;
        const double y = nodes[order[i]].total_vol;
        const double d2 = d * d;
        s0 += 1.0;
        s1 += d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
        t0 += y;
        t1 += d * y;
        t2 += d2 * y;
    }
    // Solve the 3x3 normal equations by Gaussian elimination.
    std::array<std::array<double, 4>, 3> a{{{s0, s1, s2, t0},
                                            {s1, s2, s3, t1},
                                            {s2, s3, s4, t2}}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        if (std::fabs(a[col][col]) < 1e-300) {
            throw NumericalError("dminus fit: singular normal equations");
        }
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    *slope_out = a[1][3] / a[1][1];
    *convexity_out = 2.0 * a[2][3] / a[2][2];
}

}  // namespace

ZeroVannaQuote zero_vanna_point(const AdjustedSmile& adj) {
    const double log_spot = std::log(adj.spot());
    const auto& nodes = adj.nodes();
    const auto g = [&](double x) {
        return (log_spot - x) - 0.5 * adj.total_var(std::exp(x));
    };

    // Locate a bracketing pair of grid nodes, preferring the one nearest the
    // money if the grid somehow produces several sign changes.
    double lo = 0.0, hi = 0.0;
    bool found = false;
    double best_dist = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double xa = std::log(nodes[i].strike);
        const double xb = std::log(nodes[i + 1].strike);
        const double ga = g(xa);
        const double gb = g(xb);
        if (ga * gb <= 0.0) {
            const double dist = std::fabs(0.5 * (xa + xb) - log_spot);
            if (!found || dist < best_dist) {
                lo = xa;
                hi = xb;
                best_dist = dist;
                found = true;
            }
        }
    }
    if (!found) {
        throw BracketingError(
            "zero_vanna_point: no sign change on the adjusted grid (grid too "
            "narrow)");
    }
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (glo * gm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    const double x = 0.5 * (lo + hi);
    const double strike = std::exp(x);

    ZeroVannaQuote quote;
    quote.strike = strike;
    quote.vol = adj.vol(strike);
    const auto sl = adj.slope(strike);
    quote.slope = sl.value;
    quote.wing_warning = sl.wing || adj.wing_warning();
    dminus_local_fit(adj, &quote.dminus_slope, &quote.dminus_convexity);
    quote.spot = adj.spot();
    quote.t = adj.realized().t();
    quote.T = adj.realized().T();
    quote.accrued_var = adj.realized().accrued_var();
    return quote;
}

double seasoned_volswap_price(const AdjustedSmile& adj) {
    const ZeroVannaQuote zv = zero_vanna_point(adj);
    return zv.vol * std::sqrt(adj.tau() / adj.realized().T());
}

double seasoned_volswap_price(const MarketSmile& smile,
                              const RealizedState& realized,
                              const AdjustedConfig& config) {
    return seasoned_volswap_price(build_adjusted_smile(smile, realized, config));
}

VolTermStructure::VolTermStructure(std::vector<double> end_times,
                                   std::vector<double> vols)
    : end_times_(std::move(end_times)), vols_(std::move(vols)) {
    if (end_times_.empty() || end_times_.size() != vols_.size()) {
        throw DomainError("VolTermStructure: empty or mismatched segments");
    }
    double prev = 0.0;
    for (std::size_t i = 0; i < end_times_.size(); ++i) {
        if (!std::isfinite(end_times_[i]) || !(end_times_[i] > prev)) {
            throw DomainError("VolTermStructure: end times must increase from 0");
        }
        if (!std::isfinite(vols_[i]) || vols_[i] < 0.0) {
            throw DomainError("VolTermStructure: negative vol segment");
        }
        prev = end_times_[i];
    }
}

double VolTermStructure::vol_at(double u) const {
    if (u < 0.0 || u > horizon()) {
        throw DomainError("VolTermStructure: time outside [0, horizon]");
    }
    const auto it = std::upper_bound(end_times_.begin(), end_times_.end(), u);
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(it - end_times_.begin()), vols_.size() - 1);
    return vols_[i];
}

double VolTermStructure::integral_sq(double a, double b) const {
    if (!(a >= 0.0 && b >= a && b <= horizon() + 1e-12)) {
        throw DomainError("VolTermStructure: integral limits outside domain");
    }
    double acc = 0.0;
    double seg_start = 0.0;
    for (std::size_t i = 0; i < end_times_.size(); ++i) {
        const double seg_end = end_times_[i];
        const double left = std::max(a, seg_start);
        const double right = std::min(b, seg_end);
        if (right > left) acc += vols_[i] * vols_[i] * (right - left);
        seg_start = seg_end;
    }
    return acc;
}

double bs_exact_seasoned_price(const VolTermStructure& ts, double t, double T) {
    if (!(t >= 0.0 && t < T && T <= ts.horizon() + 1e-12)) {
        throw DomainError("bs_exact_seasoned_price: requires 0 <= t < T <= horizon");
    }
    return std::sqrt(ts.integral_sq(0.0, t) / T + ts.integral_sq(t, T) / T);
}

GaussianIdentity gaussian_identity_check(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("gaussian_identity_check: inputs must be finite");
    }
    // phi mass beyond |x| = 9 is ~1e-18; Gauss-Legendre resolves the rest.
    static const GaussRule rule = gauss_legendre(400, -9.0, 9.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        acc += rule.weights[i] * norm_cdf(a + b * x) * norm_pdf(x);
    }
    return {acc, norm_cdf(a / std::sqrt(1.0 + b * b))};
}

}  // namespace volhedge
