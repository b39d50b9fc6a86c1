#include "volhedge/smile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volhedge/errors.hpp"

namespace volhedge {

MarketSmile::MarketSmile(double t, double T, double spot,
                         std::vector<SmileQuote> quotes)
    : t_(t), T_(T), spot_(spot), quotes_(std::move(quotes)) {
    if (!std::isfinite(t_) || !std::isfinite(T_) || !std::isfinite(spot_)) {
        throw DomainError("MarketSmile: non-finite time or spot");
    }
    if (!(T_ > t_)) throw DomainError("MarketSmile: requires T > t");
    if (!(spot_ > 0.0)) throw DomainError("MarketSmile: spot must be positive");
    if (quotes_.empty()) throw ConfigError("MarketSmile: empty quote list");
    if (quotes_.size() < 5) {
        throw ConfigError("MarketSmile: at least 5 quotes required, got " +
                          std::to_string(quotes_.size()));
    }
    std::sort(quotes_.begin(), quotes_.end(),
              [](const SmileQuote& a, const SmileQuote& b) {
                  return a.strike < b.strike;
              });
    const double tau = T_ - t_;
    std::vector<double> x(quotes_.size());
    std::vector<double> w(quotes_.size());
    for (std::size_t i = 0; i < quotes_.size(); ++i) {
        const auto& q = quotes_[i];
        if (!std::isfinite(q.strike) || !std::isfinite(q.vol)) {
            throw DomainError("MarketSmile: non-finite quote");
        }
        if (q.strike <= 0.0) throw DomainError("MarketSmile: strike must be positive");
        if (q.vol <= 0.0) throw DomainError("MarketSmile: vol must be positive");
        if (i > 0 && !(quotes_[i - 1].strike < q.strike)) {
            throw DomainError("MarketSmile: duplicate strike " +
                              std::to_string(q.strike));
        }
        x[i] = std::log(q.strike);
        w[i] = q.vol * q.vol * tau;
    }
    curve_ = PchipCurve(std::move(x), std::move(w));
}

double MarketSmile::total_var(double strike) const {
    if (!(strike > 0.0) || !std::isfinite(strike)) {
        throw DomainError("MarketSmile: strike must be positive and finite");
    }
    return curve_(std::log(strike));
}

double MarketSmile::vol(double strike) const {
    return std::sqrt(total_var(strike) / tau());
}

MarketSmile::Slope MarketSmile::slope(double strike) const {
    if (!in_quoted_range(strike)) {
        return {0.0, true};
    }
    const double h = 1e-3;
    const double x = std::log(strike);
    const double up = std::sqrt(curve_(x + h));
    const double dn = std::sqrt(curve_(x - h));
    return {(up - dn) / (2.0 * h), false};
}

}  // namespace volhedge
