#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "volrough/chain_synth.hpp"
#include "volrough/spot_model.hpp"

namespace testing_support {

using cplx = std::complex<double>;

inline volrough::RoughHestonParams desk_params(double v0 = 0.03, double hurst = 0.25) {
    return {std::log(3000.0), v0, 0.5, -0.9, hurst};
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Zero rates, zero dividends.
inline double bs_call(double s, double k, double sigma, double t) {
    const double sd = sigma * std::sqrt(t);
    const double d1 = (std::log(s / k) + 0.5 * sd * sd) / sd;
    return s * norm_cdf(d1) - k * norm_cdf(d1 - sd);
}

inline double bs_put(double s, double k, double sigma, double t) {
    const double sd = sigma * std::sqrt(t);
    const double d1 = (std::log(s / k) + 0.5 * sd * sd) / sd;
    return k * norm_cdf(sd - d1) - s * norm_cdf(-d1);
}

inline double bs_otm(double x0, double k, double sigma, double t) {
    const double s = std::exp(x0);
    const double strike = std::exp(k);
    return k <= x0 ? bs_put(s, strike, sigma, t) : bs_call(s, strike, sigma, t);
}

// E[exp(i w (x_T - x_0))] for log-normal x with zero drift of the price.
inline cplx bs_cf(cplx w, double sigma, double t) {
    const cplx i(0.0, 1.0);
    return std::exp(-0.5 * sigma * sigma * t * w * (w + i));
}

// Closed-form Black-Scholes chain on a uniform log-strike mesh covering +-wings standard deviations.
inline volrough::OptionChain bs_chain(double sigma, double t, double x0, double dk, double wings) {
    const double half = wings * sigma * std::sqrt(t);
    std::vector<volrough::OptionQuote> quotes;
    const long n = static_cast<long>(std::ceil(half / dk));
    for (long j = -n; j <= n; ++j) {
        const double k = x0 + static_cast<double>(j) * dk;
        quotes.push_back({k, bs_otm(x0, k, sigma, t), k <= x0});
    }
    return volrough::make_chain(t, x0, std::move(quotes));
}

// Seeded draws for property tests.
struct Gen {
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    volrough::RoughHestonParams params() {
        return {std::log(uniform(100.0, 5000.0)), uniform(0.005, 0.1), uniform(0.05, 1.0), uniform(-0.95, 0.95),
                uniform(0.05, 0.5)};
    }

    std::mt19937_64 rng;
};

}  // namespace testing_support
