#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "support.hpp"
#include "volrough/error.hpp"
#include "volrough/spot_model.hpp"

using namespace volrough;
using testing_support::desk_params;
using testing_support::Gen;

namespace {

std::string validation_message(const RoughHestonParams& p) {
    try {
        validate(p);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Validate, AcceptsDeskParameters) {
    const auto p = desk_params();
    const auto q = validate(p);
    EXPECT_EQ(q.v0, p.v0);
    EXPECT_EQ(q.hurst, p.hurst);
}

TEST(Validate, NamesFirstViolation) {
    auto p = desk_params();
    p.v0 = 0.0;
    EXPECT_EQ(validation_message(p), "V0 must be positive");
    p = desk_params();
    p.rho = -1.2;
    EXPECT_EQ(validation_message(p), "rho out of range");
    p = desk_params();
    p.nu = -0.1;
    EXPECT_EQ(validation_message(p), "nu must be nonnegative");
    p = desk_params();
    p.hurst = 0.0;
    EXPECT_EQ(validation_message(p), "H out of range");
    p.hurst = 0.5;
    EXPECT_EQ(validation_message(p), "");
    p.hurst = 0.51;
    EXPECT_EQ(validation_message(p), "H out of range");
    p = desk_params();
    p.rho = 1.0;
    EXPECT_EQ(validation_message(p), "");
}

TEST(SpotFromRoughHeston, DeskValues) {
    const auto s = spot_from_rough_heston(desk_params(0.03, 0.25));
    EXPECT_NEAR(s.eta, -0.225, 1e-15);
    EXPECT_NEAR(s.eta_tilde, 0.25 * std::sqrt(0.19), 1e-15);
    EXPECT_NEAR(s.eta_tilde, 0.108972, 1e-6);
    EXPECT_NEAR(s.sigma, 0.173205, 1e-6);
    EXPECT_NEAR(s.alpha, -0.015, 1e-15);
    EXPECT_EQ(s.eta_sigma, 0.0);
    EXPECT_EQ(s.sigma_eta, 0.0);
    EXPECT_FALSE(s.jumps.has_value());
    EXPECT_EQ(s.hurst, 0.25);
}

TEST(SpotFromRoughHeston, NoLeverageAndNoVolOfVol) {
    auto p = desk_params();
    p.rho = 0.0;
    auto s = spot_from_rough_heston(p);
    EXPECT_EQ(s.eta, 0.0);
    EXPECT_DOUBLE_EQ(s.eta_tilde, 0.25);
    p.nu = 0.0;
    s = spot_from_rough_heston(p);
    EXPECT_EQ(s.eta, 0.0);
    EXPECT_EQ(s.eta_tilde, 0.0);
    EXPECT_DOUBLE_EQ(s.sigma, std::sqrt(p.v0));
}

TEST(SpotFromRoughHeston, PropertyEtaIdentityAndProjections) {
    Gen gen(11);
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = gen.params();
        const auto s = spot_from_rough_heston(p);
        EXPECT_NEAR(s.eta * s.eta + s.eta_tilde * s.eta_tilde, p.nu * p.nu / 4.0, 4e-16);
        const double lag = gen.uniform(0.0, 1.0);
        EXPECT_EQ(s.sigma_at(0.0), s.sigma);
        EXPECT_EQ(s.eta_at(0.0), s.eta);
        EXPECT_EQ(s.sigma_at(lag), s.sigma);
        EXPECT_NO_THROW(validate(s));
    }
}

TEST(SpotCharacteristics, ProjectionMustStartAtSpot) {
    auto s = spot_from_rough_heston(desk_params());
    s.sigma_proj = [&](double lag) { return s.sigma + 0.1 * lag; };
    EXPECT_NO_THROW(validate(s));
    s.sigma_proj = [](double) { return 0.5; };
    EXPECT_THROW(validate(s), ValidationError);
    s.sigma_proj = {};
    s.eta_proj = [](double) { return 0.0; };
    EXPECT_THROW(validate(s), ValidationError);
    s.eta_proj = {};
    s.sigma = 0.0;
    EXPECT_THROW(validate(s), ValidationError);
}

TEST(GaussianCompoundPoisson, MassAndMean) {
    const auto t = gaussian_compound_poisson(2.0, -0.05, 0.03);
    double mass = 0.0;
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < t.sizes.size(); ++i) {
        mass += t.weights[i];
        mean += t.weights[i] * t.sizes[i];
        second += t.weights[i] * t.sizes[i] * t.sizes[i];
    }
    EXPECT_NEAR(mass, 2.0, 1e-12);
    EXPECT_NEAR(mean, 2.0 * -0.05, 1e-12);
    EXPECT_NEAR(second, 2.0 * (0.05 * 0.05 + 0.03 * 0.03), 1e-12);
    const auto atom = gaussian_compound_poisson(1.0, -0.05, 0.0);
    ASSERT_EQ(atom.sizes.size(), 1u);
    EXPECT_EQ(atom.sizes[0], -0.05);
    EXPECT_THROW(gaussian_compound_poisson(-1.0, 0.0, 0.1), ValidationError);
}

namespace {

bool admissible(double h, double hg, double hd, double q, double r) {
    return hg > h - (2.0 / q - 1.0) * (0.5 - h) && hd > h - (2.0 / r - 1.0) * std::min(0.5 - h, 0.25);
}

SmallJumps two_point_small() {
    SmallJumps s;
    s.delta = {{-0.01, 0.01}, {5.0, 5.0}};
    return s;
}

}  // namespace

TEST(JumpSpec, RoughnessConstraintProperty) {
    Gen gen(5);
    int accepted = 0;
    int rejected = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const double h = gen.uniform(0.02, 0.49);
        JumpActivity act;
        act.h_gamma = gen.uniform(0.01, 0.49);
        act.h_delta = gen.uniform(0.01, 0.49);
        act.q = gen.uniform(0.05, 1.0);
        act.r = gen.uniform(1.0, 1.99);
        const bool ok = admissible(h, act.h_gamma, act.h_delta, act.q, act.r);
        try {
            JumpSpec::make(gaussian_compound_poisson(1.0, 0.0, 0.02, 21), two_point_small(), act, h);
            EXPECT_TRUE(ok) << "accepted h=" << h << " hg=" << act.h_gamma << " hd=" << act.h_delta;
            ++accepted;
        } catch (const ValidationError&) {
            EXPECT_FALSE(ok) << "rejected h=" << h << " hg=" << act.h_gamma << " hd=" << act.h_delta;
            ++rejected;
        }
    }
    EXPECT_GT(accepted, 100);
    EXPECT_GT(rejected, 100);
}

TEST(JumpSpec, RejectsBadTables) {
    JumpActivity act;
    JumpTable bad{{0.1, 0.2}, {1.0}};
    EXPECT_THROW(JumpSpec::make(bad, std::nullopt, act, 0.25), ValidationError);
    JumpTable neg{{0.1}, {-1.0}};
    EXPECT_THROW(JumpSpec::make(neg, std::nullopt, act, 0.25), ValidationError);
    auto small = two_point_small();
    small.sigma_delta = std::vector<double>{1.0};
    EXPECT_THROW(JumpSpec::make(std::nullopt, small, act, 0.25), ValidationError);
    act.r = 2.0;
    EXPECT_THROW(JumpSpec::make(std::nullopt, two_point_small(), act, 0.25), ValidationError);
}
