#include "volhedge/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volhedge/analytics.hpp"
#include "volhedge/errors.hpp"
#include "volhedge/math.hpp"
#include "volhedge/parallel.hpp"

namespace volhedge {

namespace {

void check_common(double rho, double spot0) {
    if (!std::isfinite(rho) || !(std::fabs(rho) < 1.0)) {
        throw DomainError("SvModelSpec: requires |rho| < 1");
    }
    if (!std::isfinite(spot0) || !(spot0 > 0.0)) {
        throw DomainError("SvModelSpec: spot must be positive");
    }
}

void require_positive(double x, const char* name) {
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw DomainError(std::string("SvModelSpec: ") + name +
                          " must be positive");
    }
}

}  // namespace

SvModelSpec SvModelSpec::heston(const HestonParams& p, double rho, double spot0) {
    check_common(rho, spot0);
    require_positive(p.kappa, "kappa");
    require_positive(p.theta, "theta");
    require_positive(p.v0, "v0");
    if (!std::isfinite(p.xi) || p.xi < 0.0) {
        throw DomainError("SvModelSpec: xi must be non-negative");
    }
    SvModelSpec spec;
    spec.variant_ = SvVariant::Heston;
    spec.params_ = p;
    spec.rho_ = rho;
    spec.spot0_ = spot0;
    return spec;
}

SvModelSpec SvModelSpec::lognormal_sabr(const LognormalSabrParams& p, double rho,
                                        double spot0) {
    check_common(rho, spot0);
    require_positive(p.sigma0, "sigma0");
    if (!std::isfinite(p.alpha) || p.alpha < 0.0) {
        throw DomainError("SvModelSpec: alpha must be non-negative");
    }
    SvModelSpec spec;
    spec.variant_ = SvVariant::LognormalSabr;
    spec.params_ = p;
    spec.rho_ = rho;
    spec.spot0_ = spot0;
    return spec;
}

SvModelSpec SvModelSpec::three_halves(const ThreeHalvesParams& p, double rho,
                                      double spot0) {
    check_common(rho, spot0);
    require_positive(p.kappa, "kappa");
    require_positive(p.theta, "theta");
    require_positive(p.v0, "v0");
    if (!std::isfinite(p.xi) || p.xi < 0.0) {
        throw DomainError("SvModelSpec: xi must be non-negative");
    }
    SvModelSpec spec;
    spec.variant_ = SvVariant::ThreeHalves;
    spec.params_ = p;
    spec.rho_ = rho;
    spec.spot0_ = spot0;
    return spec;
}

const HestonParams& SvModelSpec::heston_params() const {
    if (variant_ != SvVariant::Heston) {
        throw ConfigError("SvModelSpec: not a Heston spec");
    }
    return std::get<HestonParams>(params_);
}

const LognormalSabrParams& SvModelSpec::sabr_params() const {
    if (variant_ != SvVariant::LognormalSabr) {
        throw ConfigError("SvModelSpec: not a lognormal SABR spec");
    }
    return std::get<LognormalSabrParams>(params_);
}

const ThreeHalvesParams& SvModelSpec::three_halves_params() const {
    if (variant_ != SvVariant::ThreeHalves) {
        throw ConfigError("SvModelSpec: not a 3/2 spec");
    }
    return std::get<ThreeHalvesParams>(params_);
}

std::optional<double> SvModelSpec::feller_ratio() const {
    if (variant_ != SvVariant::Heston) return std::nullopt;
    const auto& p = std::get<HestonParams>(params_);
    if (p.xi == 0.0) return std::nullopt;
    return 2.0 * p.kappa * p.theta / (p.xi * p.xi);
}

VolDynamics::VolDynamics(const SvModelSpec& spec) : variant_(spec.variant()) {
    switch (variant_) {
        case SvVariant::Heston: {
            const auto& p = spec.heston_params();
            a_ = p.kappa;
            b_ = p.theta;
            c_ = p.xi;
            state0_ = p.v0;
            break;
        }
        case SvVariant::LognormalSabr: {
            const auto& p = spec.sabr_params();
            a_ = p.alpha;
            state0_ = p.sigma0;
            break;
        }
        case SvVariant::ThreeHalves: {
            const auto& p = spec.three_halves_params();
            a_ = p.kappa;
            b_ = p.theta;
            c_ = p.xi;
            state0_ = p.v0;
            break;
        }
    }
}

double VolDynamics::sigma(double state) const {
    if (variant_ == SvVariant::LognormalSabr) return state;
    return std::sqrt(std::max(state, 0.0));
}

double VolDynamics::step(double state, double dt, double dw) const {
    switch (variant_) {
        case SvVariant::Heston: {
            const double vp = std::max(state, 0.0);
            return state + a_ * (b_ - vp) * dt + c_ * std::sqrt(vp) * dw;
        }
        case SvVariant::LognormalSabr:
            return state * std::exp(-0.5 * a_ * a_ * dt + a_ * dw);
        case SvVariant::ThreeHalves: {
            const double vp = std::max(state, 0.0);
            return state + a_ * vp * (b_ - vp) * dt +
                   c_ * vp * std::sqrt(vp) * dw;
        }
    }
    return state;
}

std::optional<double> VolDynamics::expected_remaining_variance(double state,
                                                               double tau) const {
    switch (variant_) {
        case SvVariant::Heston: {
            const double vp = std::max(state, 0.0);
            return b_ * tau + (vp - b_) * (1.0 - std::exp(-a_ * tau)) / a_;
        }
        case SvVariant::LognormalSabr: {
            const double s2 = state * state;
            if (a_ == 0.0) return s2 * tau;
            return s2 * std::expm1(a_ * a_ * tau) / (a_ * a_);
        }
        case SvVariant::ThreeHalves:
            return std::nullopt;
    }
    return std::nullopt;
}

PathSet simulate(const SvModelSpec& spec, double t, double T, int steps_per_year,
                 int n_paths, std::uint64_t seed, const SimulateConfig& config) {
    if (!(T > t) || !std::isfinite(t) || !std::isfinite(T) || t < 0.0) {
        throw DomainError("simulate: requires 0 <= t < T");
    }
    if (n_paths < 1) throw ConfigError("simulate: n_paths must be >= 1");
    if (steps_per_year < 50) {
        throw ConfigError("simulate: steps_per_year must be >= 50");
    }
    const double tau = T - t;
    const int steps = std::max(1, static_cast<int>(std::ceil(tau * steps_per_year)));
    const double dt = tau / steps;
    const double sqrt_dt = std::sqrt(dt);
    const double rho = spec.rho();
    const double rho_bar_sq = 1.0 - rho * rho;
    const VolDynamics dyn(spec);

    PathSet out;
    out.spec = spec;
    out.t = t;
    out.T = T;
    out.steps_per_year = steps_per_year;
    out.seed = seed;
    out.time_grid.resize(steps + 1);
    for (int i = 0; i <= steps; ++i) out.time_grid[i] = t + dt * i;
    const std::size_t n = static_cast<std::size_t>(n_paths);
    out.integrated_var.resize(n);
    out.mixing_m.resize(n);
    out.mixing_vol.resize(n);
    out.final_sigma.resize(n);
    if (config.store_sigma_panel) {
        out.sigma_panel.resize(n * out.time_grid.size());
    }

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            auto eng = make_engine(seed, p, 0);
            double state = dyn.initial_state();
            double sig = dyn.sigma(state);
            double ivar = 0.0;
            double log_m = 0.0;
            if (config.store_sigma_panel) {
                out.sigma_panel[p * out.time_grid.size()] = sig;
            }
            for (int i = 0; i < steps; ++i) {
                const double dw = sqrt_dt * normal_draw(eng);
                // Left-point increments keep M a discrete-time martingale.
                log_m += rho * sig * dw - 0.5 * rho * rho * sig * sig * dt;
                state = dyn.step(state, dt, dw);
                const double sig_next = dyn.sigma(state);
                ivar += 0.5 * (sig * sig + sig_next * sig_next) * dt;
                sig = sig_next;
                if (config.store_sigma_panel) {
                    out.sigma_panel[p * out.time_grid.size() + i + 1] = sig;
                }
            }
            out.integrated_var[p] = ivar;
            out.mixing_m[p] = std::exp(log_m);
            out.mixing_vol[p] = std::sqrt(rho_bar_sq * ivar / tau);
            out.final_sigma[p] = sig;
        }
    });
    return out;
}

McSmileResult mc_smile(const PathSet& paths, std::span<const double> strikes) {
    if (strikes.empty()) throw ConfigError("mc_smile: empty strike list");
    for (double k : strikes) {
        if (!(k > 0.0) || !std::isfinite(k)) {
            throw DomainError("mc_smile: strikes must be positive");
        }
    }
    const double spot = paths.spec.spot0();
    const double tau = paths.tau();
    const std::size_t n = paths.n_paths();

    struct StrikeResult {
        double price = 0.0;
        double price_se = 0.0;
        double vol = 0.0;
        double vol_se = 0.0;
        bool ok = false;
    };
    std::vector<StrikeResult> results(strikes.size());

    parallel_for(strikes.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> payoff(n);
        for (std::size_t s = begin; s < end; ++s) {
            const double strike = strikes[s];
            for (std::size_t p = 0; p < n; ++p) {
                payoff[p] = bs_price({spot * paths.mixing_m[p], strike,
                                      paths.mixing_vol[p], tau, true});
            }
            const MeanVar mv = mean_var(payoff);
            StrikeResult r;
            r.price = mv.mean;
            r.price_se = mv.std_error;
            try {
                r.vol = implied_vol(mv.mean, spot, strike, tau, true);
                const BsGreeks g = bs_greeks({spot, strike, r.vol, tau, true});
                r.vol_se = (g.vega > 0.0) ? r.price_se / g.vega : 0.0;
                r.ok = true;
            } catch (const std::exception&) {
                r.ok = false;
            }
            results[s] = r;
        }
    });

    std::vector<SmileQuote> quotes;
    std::vector<double> price_se;
    std::vector<double> vol_se;
    std::vector<double> dropped;
    for (std::size_t s = 0; s < strikes.size(); ++s) {
        if (results[s].ok && results[s].vol > 0.0) {
            quotes.push_back({strikes[s], results[s].vol});
            price_se.push_back(results[s].price_se);
            vol_se.push_back(results[s].vol_se);
        } else {
            dropped.push_back(strikes[s]);
        }
    }
    if (quotes.size() < 5) {
        throw ConstructionError("mc_smile: fewer than 5 strikes survived inversion");
    }
    return {MarketSmile(paths.t, paths.T, spot, std::move(quotes)),
            std::move(price_se), std::move(vol_se), std::move(dropped)};
}

namespace {

void check_paths_realized(const PathSet& paths, const RealizedState& realized) {
    if (std::fabs(paths.t - realized.t()) > 1e-12 ||
        std::fabs(paths.T - realized.T()) > 1e-12) {
        throw ConsistencyError("paths and realized state disagree on (t, T)");
    }
}

}  // namespace

McEstimate mc_volswap(const PathSet& paths, const RealizedState& realized) {
    check_paths_realized(paths, realized);
    const double accrued = realized.accrued_var();
    const double T = realized.T();
    std::vector<double> values(paths.n_paths());
    for (std::size_t p = 0; p < values.size(); ++p) {
        values[p] = std::sqrt((accrued + paths.integrated_var[p]) / T);
    }
    const MeanVar mv = mean_var(values);
    return {mv.mean, mv.std_error};
}

SvModelSpec with_initial_state(const SvModelSpec& spec, double sigma,
                               double spot) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("with_initial_state: sigma must be positive");
    }
    switch (spec.variant()) {
        case SvVariant::Heston: {
            HestonParams p = spec.heston_params();
            p.v0 = sigma * sigma;
            return SvModelSpec::heston(p, spec.rho(), spot);
        }
        case SvVariant::LognormalSabr: {
            LognormalSabrParams p = spec.sabr_params();
            p.sigma0 = sigma;
            return SvModelSpec::lognormal_sabr(p, spec.rho(), spot);
        }
        case SvVariant::ThreeHalves: {
            ThreeHalvesParams p = spec.three_halves_params();
            p.v0 = sigma * sigma;
            return SvModelSpec::three_halves(p, spec.rho(), spot);
        }
    }
    throw ConfigError("with_initial_state: unknown variant");
}

McEstimate mc_varswap(const PathSet& paths, const RealizedState& realized) {
    check_paths_realized(paths, realized);
    const double accrued = realized.accrued_var();
    const double T = realized.T();
    std::vector<double> values(paths.n_paths());
    for (std::size_t p = 0; p < values.size(); ++p) {
        values[p] = (accrued + paths.integrated_var[p]) / T;
    }
    const MeanVar mv = mean_var(values);
    return {mv.mean, mv.std_error};
}

}  // namespace volhedge
