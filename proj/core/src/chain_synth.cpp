#include "volrough/chain_synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "volrough/error.hpp"
#include "volrough/numerics.hpp"
#include "volrough/parallel.hpp"

namespace volrough {

double OptionChain::spot() const { return std::exp(spot_log); }

OptionChain make_chain(double tenor, double spot_log, std::vector<OptionQuote> quotes, bool noisy) {
    if (!(tenor > 0.0) || !std::isfinite(tenor)) {
        throw ValidationError("tenor must be positive");
    }
    if (!std::isfinite(spot_log)) {
        throw ValidationError("log spot must be finite");
    }
    OptionChain chain;
    chain.tenor = tenor;
    chain.spot_log = spot_log;
    chain.noisy = noisy;
    for (std::size_t j = 0; j < quotes.size(); ++j) {
        const auto& q = quotes[j];
        if (!std::isfinite(q.log_strike)) {
            throw ValidationError("non-finite log-strike");
        }
        if (!(q.price >= 0.0) || !std::isfinite(q.price)) {
            throw ValidationError("negative price");
        }
        if (q.is_put != (q.log_strike <= spot_log)) {
            throw ValidationError("OTM convention violated");
        }
        if (j > 0) {
            const double gap = q.log_strike - quotes[j - 1].log_strike;
            if (!(gap > 0.0)) {
                throw ValidationError("log-strikes must be strictly increasing");
            }
            chain.min_spacing = (j == 1) ? gap : std::min(chain.min_spacing, gap);
            chain.max_spacing = std::max(chain.max_spacing, gap);
        }
    }
    chain.quotes = std::move(quotes);
    return chain;
}

FourierPricer::FourierPricer(const RoughHestonParams& params, double tenor, PricerOptions options)
    : params_(validate(params)), tenor_(tenor) {
    if (!(tenor > 0.0) || !std::isfinite(tenor)) {
        throw ValidationError("tenor must be positive");
    }
    if (options.nodes_per_panel < 2) {
        throw ValidationError("need at least two nodes per panel");
    }
    const double width =
        options.panel_width > 0.0 ? options.panel_width : std::min(0.5, 0.5 / std::sqrt(params_.v0 * tenor));
    const RiccatiCf cf(params_, tenor, options.riccati);
    const auto rule = numerics::gauss_legendre(options.nodes_per_panel);
    const std::size_t per = rule.nodes.size();

    // The damping factor has poles at v = +-i/2, so panels start narrow and grow with v.
    // Panels are evaluated in batches; the integrand test runs in panel order.
    constexpr std::size_t kBatch = 8;
    const double max_width = std::max(width, options.max_panel_width);
    double left = 0.0;
    bool done = false;
    while (!done) {
        if (left > options.max_v) {
            throw NumericalError("Fourier integrand not negligible by v=" + std::to_string(options.max_v));
        }
        std::vector<double> v(kBatch * per);
        std::vector<double> w(kBatch * per);
        std::vector<cplx> phi(kBatch * per);
        std::vector<double> edges(kBatch + 1, left);
        for (std::size_t p = 0; p < kBatch; ++p) {
            const double lo = edges[p];
            const double h = std::clamp(lo / 4.0, width, max_width);
            edges[p + 1] = lo + h;
            for (std::size_t i = 0; i < per; ++i) {
                v[p * per + i] = lo + 0.5 * h * (rule.nodes[i] + 1.0);
                w[p * per + i] = 0.5 * h * rule.weights[i];
            }
        }
        parallel_for(v.size(), [&](std::size_t i) {
            const double damp = v[i] * v[i] + 0.25;
            const double tol = std::max(options.cf_floor, options.cf_slope * damp);
            phi[i] = cf(cplx(v[i], -0.5), tol);
        });
        for (std::size_t p = 0; p < kBatch && !done; ++p) {
            double panel_max = 0.0;
            for (std::size_t i = 0; i < per; ++i) {
                const std::size_t j = p * per + i;
                const double damp = v[j] * v[j] + 0.25;
                panel_max = std::max(panel_max, std::abs(phi[j]) / damp);
                v_.push_back(v[j]);
                w_.push_back(w[j]);
                phi_.push_back(w[j] * phi[j] / damp);
            }
            if (panel_max < options.truncation) {
                done = true;
                v_max_ = edges[p + 1];
            }
        }
        left = edges[kBatch];
    }
}

double FourierPricer::integral(double log_strike) const {
    const double kt = params_.x0 - log_strike;
    double acc = 0.0;
    for (std::size_t j = 0; j < v_.size(); ++j) {
        const double arg = v_[j] * kt;
        acc += std::cos(arg) * phi_[j].real() - std::sin(arg) * phi_[j].imag();
    }
    return acc;
}

double FourierPricer::call(double log_strike) const {
    const double s = std::exp(params_.x0);
    const double k = std::exp(log_strike);
    return s - std::sqrt(s * k) / std::numbers::pi * integral(log_strike);
}

double FourierPricer::put(double log_strike) const {
    const double s = std::exp(params_.x0);
    const double k = std::exp(log_strike);
    return k - std::sqrt(s * k) / std::numbers::pi * integral(log_strike);
}

double FourierPricer::otm(double log_strike) const {
    const double price = log_strike <= params_.x0 ? put(log_strike) : call(log_strike);
    return std::max(0.0, price);
}

double price_otm(const RoughHestonParams& params, double tenor, double log_strike, int n_quad, double tolerance) {
    PricerOptions coarse;
    coarse.nodes_per_panel = n_quad;
    PricerOptions fine = coarse;
    fine.nodes_per_panel = 2 * n_quad;
    const double a = FourierPricer(params, tenor, coarse).otm(log_strike);
    const double b = FourierPricer(params, tenor, fine).otm(log_strike);
    if (std::abs(a - b) > tolerance) {
        throw NumericalError("Fourier quadrature not converged: doubling nodes moved the price by " +
                             std::to_string(std::abs(a - b)));
    }
    return b;
}

OptionChain generate_chain(const FourierPricer& pricer, double strike_step, double cutoff) {
    if (!(strike_step > 0.0)) {
        throw ValidationError("strike step must be positive");
    }
    if (!(cutoff >= 0.0)) {
        throw ValidationError("cutoff must be nonnegative");
    }
    const double x0 = pricer.params().x0;
    const double s = std::exp(x0);
    const double k0 = std::round(s / strike_step) * strike_step;
    auto quote = [&](double strike) {
        const double k = std::log(strike);
        return OptionQuote{k, pricer.otm(k), k <= x0};
    };
    std::vector<OptionQuote> below;
    for (double strike = k0; strike > 0.5 * strike_step; strike -= strike_step) {
        auto q = quote(strike);
        if (q.price < cutoff) {
            break;
        }
        below.push_back(q);
    }
    std::vector<OptionQuote> quotes(below.rbegin(), below.rend());
    if (!below.empty()) {
        for (double strike = k0 + strike_step;; strike += strike_step) {
            auto q = quote(strike);
            if (q.price < cutoff) {
                break;
            }
            quotes.push_back(q);
        }
    }
    if (quotes.empty()) {
        throw ValidationError("empty chain");
    }
    return make_chain(pricer.tenor(), x0, std::move(quotes));
}

OptionChain generate_chain(const RoughHestonParams& params, double tenor, double strike_step, double cutoff,
                           const PricerOptions& options) {
    return generate_chain(FourierPricer(params, tenor, options), strike_step, cutoff);
}

OptionChain chain_on_log_strikes(const FourierPricer& pricer, const std::vector<double>& log_strikes) {
    const double x0 = pricer.params().x0;
    std::vector<OptionQuote> quotes(log_strikes.size());
    parallel_for(log_strikes.size(), [&](std::size_t j) {
        const double k = log_strikes[j];
        quotes[j] = OptionQuote{k, pricer.otm(k), k <= x0};
    });
    return make_chain(pricer.tenor(), x0, std::move(quotes));
}

OptionChain add_noise(const OptionChain& chain, const NoiseModel& noise) {
    if (!(noise.level >= 0.0) || !std::isfinite(noise.level)) {
        throw ValidationError("noise level must be nonnegative");
    }
    OptionChain out = chain;
    out.noisy = true;
    std::seed_seq seq{static_cast<std::uint32_t>(noise.seed), static_cast<std::uint32_t>(noise.seed >> 32),
                      static_cast<std::uint32_t>(noise.stream), static_cast<std::uint32_t>(noise.stream >> 32)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& q : out.quotes) {
        const double eps = normal(gen);
        q.price = std::max(0.0, q.price * (1.0 + noise.level * eps));
    }
    return out;
}

}  // namespace volrough
