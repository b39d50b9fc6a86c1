#include "volhedge/adjusted.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volhedge/analytics.hpp"
#include "volhedge/errors.hpp"
#include "volhedge/parallel.hpp"
#include "volhedge/quadrature.hpp"

namespace volhedge {

RealizedState::RealizedState(double t, double T, double accrued_var)
    : t_(t), T_(T), accrued_var_(accrued_var) {
    if (!std::isfinite(t_) || !std::isfinite(T_) || !std::isfinite(accrued_var_)) {
        throw DomainError("RealizedState: non-finite input");
    }
    if (!(t_ >= 0.0 && t_ < T_)) {
        throw DomainError("RealizedState: requires 0 <= t < T");
    }
    if (accrued_var_ < 0.0) {
        throw DomainError("RealizedState: accrued variance must be non-negative");
    }
    if (t_ == 0.0 && accrued_var_ != 0.0) {
        throw DomainError("RealizedState: t = 0 implies zero accrued variance");
    }
}

double RealizedState::c() const { return std::sqrt(c2()); }

bool RealizedState::same_as(const RealizedState& other, double tol) const {
    return std::fabs(t_ - other.t_) <= tol && std::fabs(T_ - other.T_) <= tol &&
           std::fabs(accrued_var_ - other.accrued_var_) <= tol;
}

LognormalMix LognormalMix::make(double c, double tau, int nodes) {
    if (nodes < 8) {
        throw ConfigError("LognormalMix: at least 8 quadrature nodes required");
    }
    LognormalMix mix;
    const double nu = c * std::sqrt(tau);
    if (nu == 0.0) {
        mix.h = {1.0};
        mix.w = {1.0};
        return mix;
    }
    const double mu = -0.5 * nu * nu;
    const GaussRule& rule = gauss_hermite(nodes);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    mix.h.resize(rule.nodes.size());
    mix.w.resize(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        mix.h[i] = std::exp(mu + nu * M_SQRT2 * rule.nodes[i]);
        mix.w[i] = rule.weights[i] * inv_sqrt_pi;
    }
    return mix;
}

namespace {

void check_consistent(const MarketSmile& smile, const RealizedState& realized) {
    if (std::fabs(smile.t() - realized.t()) > 1e-12 ||
        std::fabs(smile.T() - realized.T()) > 1e-12) {
        throw ConsistencyError("smile and realized state disagree on (t, T)");
    }
}

double price_through_mix(const MarketSmile& smile, const LognormalMix& mix,
                         double strike) {
    const double spot = smile.spot();
    const double tau = smile.tau();
    if (mix.degenerate()) {
        return bs_price({spot, strike, smile.vol(strike), tau, true});
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < mix.h.size(); ++i) {
        const double k = strike / mix.h[i];
        acc += mix.w[i] * mix.h[i] * bs_price({spot, k, smile.vol(k), tau, true});
    }
    const double intrinsic = std::max(spot - strike, 0.0);
    return std::clamp(acc, intrinsic, spot);
}

}  // namespace

double adjusted_call_price(const MarketSmile& smile, const RealizedState& realized,
                           double strike, int quad_nodes) {
    if (!(strike > 0.0) || !std::isfinite(strike)) {
        throw DomainError("adjusted_call_price: strike must be positive");
    }
    check_consistent(smile, realized);
    const auto mix = LognormalMix::make(realized.c(), realized.tau(), quad_nodes);
    return price_through_mix(smile, mix, strike);
}

AdjustedSmile::AdjustedSmile(MarketSmile base, RealizedState realized,
                             std::vector<Node> nodes, LognormalMix mix,
                             bool wing_warning)
    : base_(std::move(base)),
      realized_(realized),
      nodes_(std::move(nodes)),
      mix_(std::move(mix)),
      wing_warning_(wing_warning) {
    if (nodes_.size() < 5) {
        throw ConstructionError("AdjustedSmile: fewer than 5 usable nodes");
    }
    const double tau = realized_.tau();
    const double sqrt_tau = std::sqrt(tau);
    const double log_spot = std::log(base_.spot());
    std::vector<double> x(nodes_.size());
    std::vector<double> w(nodes_.size());
    dminus_nodes_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double total_vol = nodes_[i].vol * sqrt_tau;
        x[i] = std::log(nodes_[i].strike);
        w[i] = total_vol * total_vol;
        dminus_nodes_[i] = {(log_spot - x[i]) / total_vol - 0.5 * total_vol,
                            total_vol};
    }
    curve_ = PchipCurve(std::move(x), std::move(w));
    std::sort(dminus_nodes_.begin(), dminus_nodes_.end(),
              [](const DminusNode& a, const DminusNode& b) {
                  return a.d_minus < b.d_minus;
              });
    std::vector<double> dx(dminus_nodes_.size());
    std::vector<double> dy(dminus_nodes_.size());
    for (std::size_t i = 0; i < dminus_nodes_.size(); ++i) {
        if (i > 0 && !(dminus_nodes_[i - 1].d_minus < dminus_nodes_[i].d_minus)) {
            throw ConstructionError(
                "AdjustedSmile: d_minus nodes are not strictly increasing");
        }
        dx[i] = dminus_nodes_[i].d_minus;
        dy[i] = dminus_nodes_[i].total_vol;
    }
    dminus_curve_ = PchipCurve(std::move(dx), std::move(dy));
}

double AdjustedSmile::total_var(double strike) const {
    if (!(strike > 0.0) || !std::isfinite(strike)) {
        throw DomainError("AdjustedSmile: strike must be positive");
    }
    return curve_(std::log(strike));
}

double AdjustedSmile::vol(double strike) const {
    return std::sqrt(total_var(strike) / tau());
}

MarketSmile::Slope AdjustedSmile::slope(double strike) const {
    const double h = 1e-3;
    const double x = std::log(strike);
    const bool wing = x - h < curve_.min_x() || x + h > curve_.max_x();
    const double up = std::sqrt(curve_(x + h));
    const double dn = std::sqrt(curve_(x - h));
    return {(up - dn) / (2.0 * h), wing};
}

double AdjustedSmile::total_vol_at_dminus(double d_minus) const {
    return dminus_curve_(d_minus);
}

AdjustedSmile build_adjusted_smile(const MarketSmile& smile,
                                   const RealizedState& realized,
                                   std::span<const double> strike_grid,
                                   const AdjustedConfig& config) {
    check_consistent(smile, realized);
    if (strike_grid.size() < 5) {
        throw ConfigError("build_adjusted_smile: need at least 5 grid strikes");
    }
    for (std::size_t i = 0; i < strike_grid.size(); ++i) {
        if (!(strike_grid[i] > 0.0) || !std::isfinite(strike_grid[i])) {
            throw DomainError("build_adjusted_smile: grid strikes must be positive");
        }
        if (i > 0 && !(strike_grid[i - 1] < strike_grid[i])) {
            throw ConfigError("build_adjusted_smile: grid must be increasing");
        }
    }
    const auto mix = LognormalMix::make(realized.c(), realized.tau(),
                                        config.quad_nodes);
    const double spot = smile.spot();
    const double tau = realized.tau();

    std::vector<AdjustedSmile::Node> nodes(strike_grid.size());
    std::vector<std::string> failures(strike_grid.size());
    parallel_for(strike_grid.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double strike = strike_grid[i];
            const double price = price_through_mix(smile, mix, strike);
            try {
                nodes[i] = {strike, implied_vol(price, spot, strike, tau, true)};
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    });
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i].empty()) {
            throw ConstructionError("adjusted smile inversion failed at strike " +
                                    std::to_string(strike_grid[i]) + ": " +
                                    failures[i]);
        }
    }

    // Queries at K/h beyond the outermost market quotes rely on the flat
    // total-variance extrapolation; surface that as a wing warning.
    const double h_max = *std::max_element(mix.h.begin(), mix.h.end());
    const double h_min = *std::min_element(mix.h.begin(), mix.h.end());
    const bool wings = strike_grid.front() / h_max < smile.min_strike() ||
                       strike_grid.back() / h_min > smile.max_strike();

    return AdjustedSmile(smile, realized, std::move(nodes), mix, wings);
}

std::vector<double> default_strike_grid(const MarketSmile& smile,
                                        const RealizedState& realized,
                                        const AdjustedConfig& config) {
    if (config.grid_strikes < 5) {
        throw ConfigError("default_strike_grid: need at least 5 strikes");
    }
    if (!(config.grid_halfwidth_sds >= 3.0)) {
        throw ConfigError("default_strike_grid: half-width below 3 sds");
    }
    const double spot = smile.spot();
    const double tau = realized.tau();
    const double c2 = realized.c2();
    // Anticipate the zero-vanna strike, refining the vol estimate once.
    double vol_h = std::sqrt(c2 + smile.vol(spot) * smile.vol(spot));
    double center = std::log(spot) - 0.5 * vol_h * vol_h * tau;
    const double refined = smile.vol(std::exp(center));
    vol_h = std::sqrt(c2 + refined * refined);
    center = std::log(spot) - 0.5 * vol_h * vol_h * tau;

    const double half = config.grid_halfwidth_sds * vol_h * std::sqrt(tau);
    std::vector<double> grid(config.grid_strikes);
    for (int i = 0; i < config.grid_strikes; ++i) {
        const double u = (config.grid_strikes == 1)
                             ? 0.0
                             : -1.0 + 2.0 * i / (config.grid_strikes - 1.0);
        grid[i] = std::exp(center + half * u);
    }
    return grid;
}

}  // namespace volhedge
