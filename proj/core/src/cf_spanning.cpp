#include "volrough/cf_spanning.hpp"

#include <cmath>
#include <string>

#include "volrough/error.hpp"
#include "volrough/numerics.hpp"

namespace volrough {

namespace {

void require_quotes(const OptionChain& chain) {
    if (chain.quotes.size() < 2) {
        throw ValidationError("spanning estimator needs at least two quotes");
    }
    if (!(chain.tenor > 0.0)) {
        throw ValidationError("tenor must be positive");
    }
}

}  // namespace

cplx spanning_cf(const OptionChain& chain, double u) {
    require_quotes(chain);
    const double x = chain.spot_log;
    const double v = u / std::sqrt(chain.tenor);
    const auto& q = chain.quotes;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 1; j < q.size(); ++j) {
        const double d = q[j - 1].log_strike - x;
        const double mass = std::exp(-d) * q[j - 1].price * (q[j].log_strike - q[j - 1].log_strike);
        re += std::cos(v * d) * mass;
        im += std::sin(v * d) * mass;
    }
    const double scale = std::exp(-x);
    const cplx pre(u * u / chain.tenor, v);
    return 1.0 - pre * cplx(scale * re, scale * im);
}

double spanning_mean(const OptionChain& chain) {
    require_quotes(chain);
    const auto& q = chain.quotes;
    double acc = 0.0;
    for (std::size_t j = 1; j < q.size(); ++j) {
        acc += std::exp(-q[j - 1].log_strike) * q[j - 1].price * (q[j].log_strike - q[j - 1].log_strike);
    }
    return -acc / chain.tenor;
}

double arg_statistic(const OptionChain& chain, double u, double m_hat) {
    const cplx l = spanning_cf(chain, u);
    if (l == cplx(0.0, 0.0)) {
        throw NumericalError("argument undefined: spanning CF is zero at u=" + std::to_string(u));
    }
    return std::arg(l) - u * std::sqrt(chain.tenor) * m_hat;
}

double arg_statistic(const OptionChain& chain, double u) { return arg_statistic(chain, u, spanning_mean(chain)); }

CFPortfolioEstimate estimate_cf(const OptionChain& chain, const std::vector<double>& u_grid) {
    CFPortfolioEstimate est;
    est.tenor = chain.tenor;
    est.u_grid = u_grid;
    est.M_hat = spanning_mean(chain);
    est.L_values.reserve(u_grid.size());
    est.arg_values.reserve(u_grid.size());
    const double drift = std::sqrt(chain.tenor) * est.M_hat;
    for (double u : u_grid) {
        const cplx l = spanning_cf(chain, u);
        if (l == cplx(0.0, 0.0)) {
            throw NumericalError("argument undefined: spanning CF is zero at u=" + std::to_string(u));
        }
        est.L_values.push_back(l);
        est.arg_values.push_back(std::arg(l) - u * drift);
    }
    return est;
}

cplx oracle_spanning_integral(const std::function<double(double)>& otm_price, double spot_log, double tenor,
                              double u, double scale, const OracleOptions& options) {
    if (!(tenor > 0.0) || !(scale > 0.0)) {
        throw ValidationError("oracle needs positive tenor and scale");
    }
    if (u == 0.0) {
        return {1.0, 0.0};
    }
    const double x = spot_log;
    const double v = u / std::sqrt(tenor);
    // Weight e^{-x} e^{-(k-x)} O(k) = O(k) / K.
    auto weight = [&](double k) { return otm_price(k) * std::exp(-k); };

    double lo = options.initial_width * scale;
    double hi = lo;
    for (int i = 0; i < 200 && std::abs(weight(x - lo)) >= options.boundary; ++i) {
        lo *= 1.5;
    }
    for (int i = 0; i < 200 && std::abs(weight(x + hi)) >= options.boundary; ++i) {
        hi *= 1.5;
    }
    if (std::abs(weight(x - lo)) >= options.boundary || std::abs(weight(x + hi)) >= options.boundary) {
        throw NumericalError("spanning oracle: integrand does not decay in the wings");
    }

    const auto rule = numerics::gauss_legendre(16);
    auto integrate = [&](double a, double b, int panels) {
        cplx acc = 0.0;
        const double width = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double left = a + p * width;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double k = left + 0.5 * width * (rule.nodes[i] + 1.0);
                const double d = k - x;
                acc += 0.5 * width * rule.weights[i] * weight(k) * cplx(std::cos(v * d), std::sin(v * d));
            }
        }
        return acc;
    };

    cplx previous;
    bool have_previous = false;
    for (int panels = options.initial_panels; panels <= options.max_panels; panels *= 2) {
        const cplx value = integrate(x - lo, x, panels) + integrate(x, x + hi, panels);
        if (have_previous && std::abs(value - previous) <= options.tolerance * std::max(1.0, std::abs(value))) {
            return 1.0 - cplx(u * u / tenor, v) * value;
        }
        previous = value;
        have_previous = true;
    }
    throw NumericalError("spanning oracle did not converge by " + std::to_string(options.max_panels) + " panels");
}

cplx oracle_spanning_integral(const FourierPricer& pricer, double u, const OracleOptions& options) {
    const auto& p = pricer.params();
    return oracle_spanning_integral([&](double k) { return pricer.otm(k); }, p.x0, pricer.tenor(), u,
                                    std::sqrt(p.v0 * pricer.tenor()), options);
}

}  // namespace volrough
