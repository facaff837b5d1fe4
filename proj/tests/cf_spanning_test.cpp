#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "support.hpp"
#include "volrough/cf_spanning.hpp"
#include "volrough/error.hpp"
#include "volrough/hurst_est.hpp"
#include "volrough/numerics.hpp"
#include "volrough/riccati_cf.hpp"

using namespace volrough;
using testing_support::bs_cf;
using testing_support::bs_chain;
using testing_support::bs_otm;
using testing_support::desk_params;

namespace {

const double kShort = 3.0 / 252.0;

const OptionChain& dense_bs_chain() {
    static const auto chain = std::make_unique<OptionChain>(bs_chain(0.2, 0.25, std::log(3000.0), 1e-4, 10.0));
    return *chain;
}

const FourierPricer& desk_pricer() {
    static const auto pricer = std::make_unique<FourierPricer>(desk_params(0.03, 0.25), kShort);
    return *pricer;
}

}  // namespace

TEST(SpanningCf, ExactlyOneAtZero) {
    const auto& c = dense_bs_chain();
    EXPECT_EQ(spanning_cf(c, 0.0), cplx(1.0, 0.0));
    const auto e = estimate_cf(c, {0.0, 1.0});
    EXPECT_EQ(std::abs(e.L_values[0]), 1.0);
    EXPECT_EQ(e.arg_values[0], 0.0);
}

TEST(SpanningCf, BlackScholesDenseChain) {
    const auto& c = dense_bs_chain();
    EXPECT_LT(std::abs(spanning_cf(c, 1.0) - std::exp(cplx(-0.02, -0.01))), 1e-3);
    EXPECT_LT(std::abs(spanning_cf(c, 2.0) - bs_cf(2.0 / std::sqrt(0.25), 0.2, 0.25)), 1e-3);
}

TEST(SpanningCf, ConjugateSymmetryIsExact) {
    const auto& c = dense_bs_chain();
    for (double u : {0.3, 1.0, 2.5, 7.0}) {
        EXPECT_EQ(spanning_cf(c, -u), std::conj(spanning_cf(c, u)));
    }
    const auto noisy = add_noise(generate_chain(desk_pricer()), NoiseModel{0.025, 3, 0});
    for (double u : {0.5, 2.0, 4.0}) {
        EXPECT_EQ(spanning_cf(noisy, -u), std::conj(spanning_cf(noisy, u)));
    }
}

TEST(SpanningCf, NeedsTwoQuotes) {
    const double x0 = std::log(100.0);
    const auto one = make_chain(0.1, x0, {{x0, 1.0, true}});
    EXPECT_THROW(spanning_cf(one, 1.0), ValidationError);
    EXPECT_THROW(spanning_mean(one), ValidationError);
}

TEST(SpanningMean, BlackScholesVarianceIdentity) {
    EXPECT_NEAR(spanning_mean(dense_bs_chain()), -0.02, 2e-4);
}

TEST(SpanningMean, ZeroPricesGiveZero) {
    const double x0 = std::log(100.0);
    const auto c = make_chain(0.1, x0, {{x0 - 0.1, 0.0, true}, {x0, 0.0, true}, {x0 + 0.1, 0.0, false}});
    EXPECT_EQ(spanning_mean(c), 0.0);
    EXPECT_EQ(spanning_cf(c, 2.0), cplx(1.0));
}

TEST(SpanningMean, TruncatedWingsAddBias) {
    const auto& full = dense_bs_chain();
    const double x0 = full.spot_log;
    const double half = 5.0 * 0.2 * 0.5 * 0.5;
    std::vector<OptionQuote> kept;
    for (const auto& q : full.quotes) {
        if (std::abs(q.log_strike - x0) <= half) {
            kept.push_back(q);
        }
    }
    const auto cut = make_chain(full.tenor, x0, kept);
    EXPECT_GT(std::abs(spanning_mean(cut) + 0.02), std::abs(spanning_mean(full) + 0.02));
}

TEST(ArgStatistic, BlackScholesPhaseCancels) {
    // Tenor of the desk's longer chain.
    const double t = 6.0 / 252.0;
    const auto c = bs_chain(0.2, t, std::log(3000.0), 1e-4, 10.0);
    const auto grid = adaptive_ugrid(c);
    const double m = spanning_mean(c);
    for (double u : grid.u_values) {
        EXPECT_NEAR(arg_statistic(c, u, m), 0.0, 2e-3) << "u=" << u;
    }
    EXPECT_EQ(arg_statistic(c, 0.0), 0.0);
}

TEST(ArgStatistic, RoughLeverageSign) {
    const auto c = generate_chain(desk_pricer());
    EXPECT_GT(arg_statistic(c, 2.0), 0.0);
    const double a = arg_statistic(c, 2.0);
    EXPECT_LE(std::abs(a), std::numbers::pi);
}

TEST(EstimateCf, GridAlignment) {
    const auto& c = dense_bs_chain();
    const std::vector<double> grid = {0.5, 1.0, 1.5};
    const auto e = estimate_cf(c, grid);
    ASSERT_EQ(e.L_values.size(), grid.size());
    ASSERT_EQ(e.arg_values.size(), grid.size());
    EXPECT_EQ(e.tenor, c.tenor);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(e.L_values[i], spanning_cf(c, grid[i]));
        EXPECT_EQ(e.arg_values[i], arg_statistic(c, grid[i], e.M_hat));
    }
}

TEST(Oracle, BlackScholesPricesGiveBlackScholesCf) {
    const double x0 = std::log(3000.0);
    const double t = 0.25;
    auto price = [&](double k) { return bs_otm(x0, k, 0.2, t); };
    const cplx o = oracle_spanning_integral(price, x0, t, 1.0, 0.2 * std::sqrt(t));
    EXPECT_LT(std::abs(o - std::exp(cplx(-0.02, -0.01))), 1e-8);
    EXPECT_EQ(oracle_spanning_integral(price, x0, t, 0.0, 0.1), cplx(1.0));
}

TEST(Oracle, FourierPricedRoughChainMatchesRiccati) {
    const auto& pr = desk_pricer();
    const auto p = pr.params();
    for (double u : {1.0, 2.0}) {
        const cplx direct = cf(u / std::sqrt(kShort), p, kShort);
        EXPECT_LT(std::abs(oracle_spanning_integral(pr, u) - direct), 1e-6) << "u=" << u;
    }
}

TEST(Oracle, RejectsBadScale) {
    auto price = [](double) { return 0.0; };
    EXPECT_THROW(oracle_spanning_integral(price, 0.0, 0.1, 1.0, 0.0), ValidationError);
}

TEST(SpanningRate, DeterministicRiemannErrorIsFirstOrder) {
    // Wide noiseless chains; the O(step) term takes over once step is well below 1.
    const auto& pr = desk_pricer();
    const cplx truth = cf(1.0 / std::sqrt(kShort), pr.params(), kShort);
    std::vector<double> lx;
    std::vector<double> ly;
    for (double step : {0.625, 0.3125, 0.15625}) {
        const auto c = generate_chain(pr, step, 1e-9);
        lx.push_back(std::log(step));
        ly.push_back(std::log(std::abs(spanning_cf(c, 1.0) - truth)));
    }
    const double slope = numerics::ols_slope(lx, ly);
    EXPECT_GE(slope, 0.8);
    EXPECT_LE(slope, 1.2);
    // On the coarse desk lattices the error stays within a first-order bound.
    for (double step : {20.0, 10.0, 5.0, 2.5, 1.25}) {
        const auto c = generate_chain(pr, step, 1e-9);
        EXPECT_LT(std::abs(spanning_cf(c, 1.0) - truth), 2e-5 * step) << "step " << step;
    }
}

TEST(SpanningRate, ModulusBoundedByNoise) {
    const auto clean = generate_chain(desk_pricer());
    const auto grid = adaptive_ugrid(clean);
    std::vector<std::vector<double>> mods(grid.u_values.size());
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto noisy = add_noise(clean, NoiseModel{0.025, seed, 0});
        for (std::size_t i = 0; i < grid.u_values.size(); ++i) {
            mods[i].push_back(std::abs(spanning_cf(noisy, grid.u_values[i])));
        }
    }
    for (std::size_t i = 0; i < mods.size(); ++i) {
        double mean = 0.0;
        for (double m : mods[i]) {
            mean += m / mods[i].size();
        }
        double var = 0.0;
        for (double m : mods[i]) {
            var += (m - mean) * (m - mean) / (mods[i].size() - 1);
        }
        for (double m : mods[i]) {
            EXPECT_LE(m, 1.0 + 10.0 * std::sqrt(var));
        }
    }
}
