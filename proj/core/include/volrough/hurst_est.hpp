#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "volrough/cf_spanning.hpp"
#include "volrough/error.hpp"

namespace volrough {

/// Adaptive u-grid built from the longer-tenor spanning CF.
struct UGrid {
    std::vector<double> u_values;
    double step = 0.01;
    double u1 = 0.0;                 ///< first u with |L| < u1_threshold
    double uK = 0.0;                 ///< first u with |L| < uK_threshold
    std::optional<double> cap;       ///< first u with |A| > cap_threshold, if reached before uK
    double u1_threshold = 0.9;
    double uK_threshold = 0.75;
    double cap_threshold = 1.5707963267948966;
};

struct UGridOptions {
    double step = 0.01;
    double u1_threshold = 0.9;
    double uK_threshold = 0.75;
    double cap_threshold = 1.5707963267948966;
    /// Largest scan index before giving up.
    int max_points = 100000;
};

/// Grid from a scan on u_i = i * step. Runs from u1 to uK; if |A| exceeds the cap first, the grid
/// stops at the last point before the cap. Throws NumericalError "empty u-grid" for fewer than 2 points.
UGrid adaptive_ugrid(const CFPortfolioEstimate& scan, const UGridOptions& options = {});
/// Same, scanning the chain lazily until the grid end is known.
UGrid adaptive_ugrid(const OptionChain& chain, const UGridOptions& options = {});

/// Intercept of the least-squares fit of -u^3 / A(u) on (1, u^2), in closed form.
double regression_intercept(const std::vector<double>& u_values, const std::vector<double>& a_values);

enum HurstFlag : unsigned {
    kFlagNone = 0,
    kFlagSignMismatch = 1u << 0,   ///< intercepts of the two tenors differ in sign
    kFlagOutOfBand = 1u << 1,      ///< estimate outside (-0.25, 1)
    kFlagWeakSignal = 1u << 2,     ///< |A| on the grid below the configured signal floor
    kFlagNoSignal = 1u << 3,       ///< second differences vanish; F ratio undefined
    kFlagOutOfRange = 1u << 4,     ///< F ratio outside the range of F
    kFlagNonFinite = 1u << 5,
};

enum class HurstMethod { plain, jump_robust };

struct HurstEstimate {
    double value = 0.0;
    HurstMethod method = HurstMethod::plain;
    std::vector<double> tenors;
    std::vector<double> u_grid;  ///< grid (plain) or the single u (jump-robust)
    double intercept_t1 = 0.0;
    double intercept_t2 = 0.0;
    double f_ratio = 0.0;
    double second_diff_124 = 0.0;
    double second_diff_134 = 0.0;
    std::optional<double> nearest_endpoint;
    unsigned flags = kFlagNone;
    std::vector<std::string> warnings;

    bool reliable() const { return flags == kFlagNone && std::isfinite(value); }
};

struct HurstOptions {
    UGridOptions grid = {};
    /// Estimates with max |A| on the grid below this are flagged weak.
    double min_signal = 1e-4;
};

/// Plain estimator from A_T(u) values on a common grid for two tenors.
HurstEstimate estimate_h_from_args(const std::vector<double>& u_grid, const std::vector<double>& a_t1,
                                   const std::vector<double>& a_t2, double t1, double t2,
                                   const HurstOptions& options = {});

/// Synthetic route: A(T, u) supplied directly.
HurstEstimate estimate_h(const std::function<double(double tenor, double u)>& a_fn, double t1, double t2,
                         const std::vector<double>& u_grid, const HurstOptions& options = {});

/// Full pipeline: u-grid from the longer tenor, A from both chains, intercepts, log-ratio.
HurstEstimate estimate_h(const OptionChain& chain_t1, const OptionChain& chain_t2, const HurstOptions& options = {});

/// (Arg L1 - Arg Lj / tau_j) / u^3 with principal arguments.
double first_diff(cplx l1, cplx lj, double u, double tau_j);

/// A_1j - (tau_j - 1) / (tau_4 - 1) * A_14.
double second_diff(double a_1j, double a_14, double tau_j, double tau_4);

/// Ratio of the second-difference brackets at tau_2 and tau_3; the H = 1/2 value is the limit.
double f_of_h(double H, double tau2, double tau3, double tau4);

/// Thrown by invert_f for ratios outside the range of F; carries the H of the nearer endpoint.
class FRangeError : public NumericalError {
public:
    FRangeError(const std::string& what, double nearest) : NumericalError(what), nearest_(nearest) {}
    double nearest_endpoint() const { return nearest_; }

private:
    double nearest_;
};

/// Bisection inverse of F on [0, 1/2] to |dH| < 1e-10. Checks monotonicity on 101 points.
double invert_f(double ratio, double tau2, double tau3, double tau4);

/// Synthetic route: L(T, u) supplied directly for the four tenors.
HurstEstimate estimate_h_jump_robust(const std::function<cplx(double tenor, double u)>& l_fn,
                                     const std::array<double, 4>& tenors, double u);

/// Full pipeline over four chains with increasing tenors. Without u, the midpoint of the
/// adaptive grid of the longest tenor is used.
HurstEstimate estimate_h_jump_robust(const std::array<OptionChain, 4>& chains, std::optional<double> u = std::nullopt,
                                     const UGridOptions& grid = {});

}  // namespace volrough
