#include "oracles.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace volhedge::testing {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, b, fa, fm, fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

JointMcPrice joint_euler_call_price(const SvModelSpec& spec, double strike,
                                    double T, int steps_per_year, int n_paths,
                                    std::uint32_t seed) {
    std::mt19937 eng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int steps = static_cast<int>(std::ceil(T * steps_per_year));
    const double dt = T / steps;
    const double sqrt_dt = std::sqrt(dt);
    const double rho = spec.rho();
    const double rho_bar = std::sqrt(1.0 - rho * rho);

    double sum = 0.0;
    double sum_sq = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        double log_s = std::log(spec.spot0());
        double sigma = 0.0;
        double state = 0.0;
        switch (spec.variant()) {
            case SvVariant::Heston:
                state = spec.heston_params().v0;
                break;
            case SvVariant::LognormalSabr:
                state = spec.sabr_params().sigma0;
                break;
            case SvVariant::ThreeHalves:
                state = spec.three_halves_params().v0;
                break;
        }
        for (int i = 0; i < steps; ++i) {
            const double zw = normal(eng);
            const double zz = normal(eng);
            switch (spec.variant()) {
                case SvVariant::Heston: {
                    const auto& hp = spec.heston_params();
                    const double vp = std::max(state, 0.0);
                    sigma = std::sqrt(vp);
                    state = state + hp.kappa * (hp.theta - vp) * dt +
                            hp.xi * std::sqrt(vp) * sqrt_dt * zw;
                    break;
                }
                case SvVariant::LognormalSabr: {
                    const auto& sp = spec.sabr_params();
                    sigma = state;
                    state = state * std::exp(-0.5 * sp.alpha * sp.alpha * dt +
                                             sp.alpha * sqrt_dt * zw);
                    break;
                }
                case SvVariant::ThreeHalves: {
                    const auto& tp = spec.three_halves_params();
                    const double vp = std::max(state, 0.0);
                    sigma = std::sqrt(vp);
                    state = state + tp.kappa * vp * (tp.theta - vp) * dt +
                            tp.xi * vp * std::sqrt(vp) * sqrt_dt * zw;
                    break;
                }
            }
            log_s += -0.5 * sigma * sigma * dt +
                     sigma * sqrt_dt * (rho * zw + rho_bar * zz);
        }
        const double payoff = std::max(std::exp(log_s) - strike, 0.0);
        sum += payoff;
        sum_sq += payoff * payoff;
    }
    const double mean = sum / n_paths;
    const double var = (sum_sq - n_paths * mean * mean) / (n_paths - 1.0);
    return {mean, std::sqrt(var / n_paths)};
}

}  // namespace volhedge::testing
