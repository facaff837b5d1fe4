#include "volrough/spot_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volrough/error.hpp"

namespace volrough {

RoughHestonParams validate(const RoughHestonParams& params) {
    if (!std::isfinite(params.x0)) {
        throw ValidationError("x0 must be finite");
    }
    if (!(params.v0 > 0.0) || !std::isfinite(params.v0)) {
        throw ValidationError("V0 must be positive");
    }
    if (!(params.nu >= 0.0) || !std::isfinite(params.nu)) {
        throw ValidationError("nu must be nonnegative");
    }
    if (!(params.rho >= -1.0 && params.rho <= 1.0)) {
        throw ValidationError("rho out of range");
    }
    if (!(params.hurst > 0.0 && params.hurst <= 0.5)) {
        throw ValidationError("H out of range");
    }
    return params;
}

JumpTable gaussian_compound_poisson(double intensity, double mean, double stdev, int nodes) {
    if (!(intensity >= 0.0) || !(stdev >= 0.0) || !std::isfinite(mean)) {
        throw ValidationError("compound Poisson needs intensity >= 0, stdev >= 0 and a finite mean");
    }
    if (stdev == 0.0) {
        return JumpTable{{mean}, {intensity}};
    }
    if (nodes < 3) {
        throw ValidationError("compound Poisson needs at least 3 nodes");
    }
    // Equally spaced nodes over +-8 standard deviations; the trapezoid rule converges
    // geometrically for the Gaussian weight. Weights are renormalised so the mass is exact.
    JumpTable table;
    table.sizes.resize(nodes);
    table.weights.resize(nodes);
    const double h = 16.0 / (nodes - 1);
    double total = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double x = -8.0 + h * i;
        table.sizes[i] = mean + stdev * x;
        table.weights[i] = std::exp(-0.5 * x * x);
        total += table.weights[i];
    }
    for (double& w : table.weights) {
        w *= intensity / total;
    }
    return table;
}

namespace {

void check_table(const JumpTable& table, const char* name) {
    if (table.sizes.size() != table.weights.size()) {
        throw ValidationError(std::string(name) + ": sizes and weights differ in length");
    }
    for (std::size_t i = 0; i < table.sizes.size(); ++i) {
        if (!std::isfinite(table.sizes[i])) {
            throw ValidationError(std::string(name) + ": non-finite jump size");
        }
        if (!(table.weights[i] >= 0.0) || !std::isfinite(table.weights[i])) {
            throw ValidationError(std::string(name) + ": weights must be finite and nonnegative");
        }
    }
}

void check_coefficients(const std::optional<std::vector<double>>& table, std::size_t expected,
                        const char* name) {
    if (!table) {
        return;
    }
    if (table->size() != expected) {
        throw ValidationError(std::string(name) + " table has the wrong length");
    }
    if (!std::all_of(table->begin(), table->end(), [](double v) { return std::isfinite(v); })) {
        throw ValidationError(std::string(name) + " table has non-finite entries");
    }
}

}  // namespace

JumpSpec JumpSpec::make(std::optional<JumpTable> big, std::optional<SmallJumps> small,
                        JumpActivity activity, double hurst) {
    if (!(hurst > 0.0 && hurst <= 0.5)) {
        throw ValidationError("H out of range");
    }
    if (!(activity.q > 0.0 && activity.q <= 1.0)) {
        throw ValidationError("q must lie in (0, 1]");
    }
    if (!(activity.r >= 1.0 && activity.r < 2.0)) {
        throw ValidationError("r must lie in [1, 2)");
    }
    if (!(activity.h_gamma > 0.0 && activity.h_gamma < 0.5)) {
        throw ValidationError("H_gamma must lie in (0, 1/2)");
    }
    if (!(activity.h_delta > 0.0 && activity.h_delta < 0.5)) {
        throw ValidationError("H_delta must lie in (0, 1/2)");
    }
    const double gamma_bound = hurst - (2.0 / activity.q - 1.0) * (0.5 - hurst);
    if (!(activity.h_gamma > gamma_bound)) {
        throw ValidationError("H_gamma violates the roughness constraint for big jumps");
    }
    const double delta_bound = hurst - (2.0 / activity.r - 1.0) * std::min(0.5 - hurst, 0.25);
    if (!(activity.h_delta > delta_bound)) {
        throw ValidationError("H_delta violates the roughness constraint for small jumps");
    }

    if (big) {
        check_table(*big, "big jumps");
    }
    if (small) {
        check_table(small->delta, "small jumps");
        double activity_sum = 0.0;
        for (std::size_t i = 0; i < small->delta.sizes.size(); ++i) {
            activity_sum += small->delta.weights[i] * std::pow(std::abs(small->delta.sizes[i]), activity.r);
        }
        if (!std::isfinite(activity_sum)) {
            throw ValidationError("small jumps: r-th absolute moment is not finite");
        }
        const std::size_t n = small->delta.sizes.size();
        check_coefficients(small->sigma_delta, n, "sigma_delta");
        check_coefficients(small->eta_delta, n, "eta_delta");
        check_coefficients(small->delta_sigma, n, "delta_sigma");
        check_coefficients(small->delta_delta, n * n, "delta_delta");
    }

    JumpSpec spec;
    spec.big_ = std::move(big);
    spec.small_ = std::move(small);
    spec.activity_ = activity;
    return spec;
}

const SpotCharacteristics& validate(const SpotCharacteristics& spot) {
    if (!(spot.sigma > 0.0) || !std::isfinite(spot.sigma)) {
        throw ValidationError("sigma must be positive");
    }
    if (!(spot.hurst > 0.0 && spot.hurst <= 0.5)) {
        throw ValidationError("H out of range");
    }
    for (double v : {spot.alpha, spot.eta, spot.eta_tilde, spot.eta_sigma, spot.sigma_eta}) {
        if (!std::isfinite(v)) {
            throw ValidationError("spot characteristics must be finite");
        }
    }
    constexpr double tol = 1e-12;
    if (std::abs(spot.sigma_at(0.0) - spot.sigma) > tol * std::max(1.0, spot.sigma)) {
        throw ValidationError("sigma projection does not start at sigma");
    }
    if (std::abs(spot.eta_at(0.0) - spot.eta) > tol * std::max(1.0, std::abs(spot.eta))) {
        throw ValidationError("eta projection does not start at eta");
    }
    if (spot.jumps && spot.jumps->small() && spot.jumps->small()->delta_proj) {
        const auto& small = *spot.jumps->small();
        for (std::size_t i = 0; i < small.delta.sizes.size(); ++i) {
            double d = small.delta.sizes[i];
            if (std::abs(small.projected(0.0, i) - d) > tol * std::max(1.0, std::abs(d))) {
                throw ValidationError("delta projection does not start at delta");
            }
        }
    }
    return spot;
}

SpotCharacteristics spot_from_rough_heston(const RoughHestonParams& params) {
    const auto p = validate(params);
    SpotCharacteristics spot;
    spot.alpha = -0.5 * p.v0;
    spot.sigma = std::sqrt(p.v0);
    spot.eta = 0.5 * p.nu * p.rho;
    spot.eta_tilde = 0.5 * p.nu * std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho));
    spot.eta_sigma = 0.0;
    spot.sigma_eta = 0.0;
    spot.hurst = p.hurst;
    return spot;
}

}  // namespace volrough
