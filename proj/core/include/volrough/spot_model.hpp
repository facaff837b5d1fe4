#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace volrough {

/// Zero-mean-reversion rough Heston model for X = exp(x):
///   dX/X = sqrt(V) dW,
///   V_t = V0 + nu / Gamma(H + 1/2) * int_0^t (t - s)^(H - 1/2) sqrt(V_s) (rho dW_s + sqrt(1 - rho^2) dW~_s).
struct RoughHestonParams {
    double x0 = 0.0;     ///< log spot
    double v0 = 0.0;     ///< initial variance, per year
    double nu = 0.0;     ///< vol-of-vol
    double rho = 0.0;    ///< price/variance correlation
    double hurst = 0.25; ///< roughness, in (0, 1/2]
};

/// Returns `params` unchanged if every invariant holds; throws ValidationError naming the first violation.
RoughHestonParams validate(const RoughHestonParams& params);

/// Finite quadrature representation of a jump compensator: jump size `sizes[i]` carries mass `weights[i]`.
struct JumpTable {
    std::vector<double> sizes;
    std::vector<double> weights;
};

/// Compound-Poisson table with Gaussian(mean, stdev) sizes at the given intensity (per year).
/// A zero stdev collapses the table to a single atom.
JumpTable gaussian_compound_poisson(double intensity, double mean, double stdev, int nodes = 401);

/// Infinite-variation component: small jumps delta(t, z_i) plus the coefficient tables
/// that drive its dynamics. Each coefficient table is aligned with `delta.sizes`;
/// `delta_delta` is row-major n x n over (z_i, z_j).
struct SmallJumps {
    JumpTable delta;
    std::optional<std::vector<double>> sigma_delta;
    std::optional<std::vector<double>> eta_delta;
    std::optional<std::vector<double>> delta_sigma;
    std::optional<std::vector<double>> delta_delta;
    /// Projected size delta(t + lag | t, z_i) for lag in years. Empty means constant in lag.
    std::function<double(double lag, std::size_t i)> delta_proj;

    double projected(double lag, std::size_t i) const {
        return delta_proj ? delta_proj(lag, i) : delta.sizes[i];
    }
};

/// Roughness and activity bounds attached to the jump components.
struct JumpActivity {
    double h_gamma = 0.25;  ///< time smoothness of big jumps, (0, 1/2)
    double h_delta = 0.25;  ///< roughness of small jumps, (0, 1/2)
    double q = 1.0;         ///< finite-variation activity, (0, 1]
    double r = 1.0;         ///< infinite-variation activity, [1, 2)
};

/// Validated jump specification. Construction enforces the admissible region
///   H_gamma > H - (2/q - 1)(1/2 - H),   H_delta > H - (2/r - 1) min(1/2 - H, 1/4).
class JumpSpec {
public:
    static JumpSpec make(std::optional<JumpTable> big, std::optional<SmallJumps> small,
                         JumpActivity activity, double hurst);

    const std::optional<JumpTable>& big() const { return big_; }
    const std::optional<SmallJumps>& small() const { return small_; }
    const JumpActivity& activity() const { return activity_; }

private:
    JumpSpec() = default;

    std::optional<JumpTable> big_;
    std::optional<SmallJumps> small_;
    JumpActivity activity_;
};

/// Spot quantities of the general model at the conditioning time.
/// Projection curves are functions of the lag t' - t in years; empty curves are constant.
struct SpotCharacteristics {
    double alpha = 0.0;
    double sigma = 0.0;
    double eta = 0.0;
    double eta_tilde = 0.0;
    double eta_sigma = 0.0;
    double sigma_eta = 0.0;
    double hurst = 0.25;
    std::optional<JumpSpec> jumps;
    std::function<double(double lag)> sigma_proj;
    std::function<double(double lag)> eta_proj;

    double sigma_at(double lag) const { return sigma_proj ? sigma_proj(lag) : sigma; }
    double eta_at(double lag) const { return eta_proj ? eta_proj(lag) : eta; }
};

/// Checks sigma > 0, 0 < H < 1 and that projection curves start at the spot values.
const SpotCharacteristics& validate(const SpotCharacteristics& spot);

/// Spot characteristics implied by the rough Heston model: alpha = -V0/2, sigma = sqrt(V0),
/// eta = nu rho / 2, eta~ = nu sqrt(1 - rho^2) / 2, no jumps, constant projections.
SpotCharacteristics spot_from_rough_heston(const RoughHestonParams& params);

}  // namespace volrough
