#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "volrough/spot_model.hpp"

namespace volrough {

using cplx = std::complex<double>;

/// Solution of the fractional Riccati equation
///   D^a h = -1/2 w (w + i) + i rho nu w h + 1/2 nu^2 h^2,  h(w, 0) = 0,  a = H + 1/2,
/// on a uniform grid of n_steps + 1 points over [0, T].
struct RiccatiSolution {
    cplx u;
    double tenor = 0.0;
    int n_steps = 0;
    std::vector<cplx> h_path;
    cplx frac_integral;  ///< I^{1-a} h(w, T)
};

/// Product-integration weights of the fractional Adams predictor-corrector for one
/// (order, n_steps) pair. Immutable and shareable across threads and arguments.
class AdamsKernel {
public:
    AdamsKernel(double order, int n_steps);

    double order() const { return order_; }
    int n_steps() const { return n_; }

    /// Predictor weight for lag k = n - j (unscaled): (k+1)^a - k^a.
    double predictor(int k) const { return pred_[k]; }
    /// Corrector weight for interior lag k = n - j, j >= 1 (unscaled).
    double corrector(int k) const { return corr_[k]; }
    /// Corrector weight on the initial node when stepping to n + 1 (unscaled).
    double corrector_start(int n) const { return start_[n]; }
    /// Weights of I^{1-a} at t_N on nodes 0..N (unscaled, multiply by dt^{1-a}/Gamma(3-a)).
    const std::vector<double>& integral_weights() const { return integral_; }

private:
    double order_;
    int n_;
    std::vector<double> pred_;
    std::vector<double> corr_;
    std::vector<double> start_;
    std::vector<double> integral_;
};

/// Solves for h(w, .) with the fractional Adams predictor-corrector. The corrector equation is
/// quadratic in the new value and is solved exactly, which keeps the scheme stable for large |w|. Throws ValidationError for
/// n_steps < 16 or T <= 0 and NumericalError if |h| overflows.
RiccatiSolution solve_h(cplx w, const RoughHestonParams& params, double tenor, int n_steps);
RiccatiSolution solve_h(cplx w, const RoughHestonParams& params, double tenor, const AdamsKernel& kernel);

/// Convergence controls for the characteristic function. The step count is doubled until the
/// Richardson correction (I_2n - I_n) / (2^{1+a} - 1) is below `tolerance`, either on I^{1-a} h or
/// on the characteristic function itself. The extrapolated value is returned.
struct RiccatiOptions {
    int n_steps = 512;
    double tolerance = 1e-7;
    int max_steps = 8192;
};

/// Characteristic function E[exp(i w (x_T - x_0))] = exp(V0 I^{1-a} h(w, T)) for complex w.
cplx cf_complex(cplx w, const RoughHestonParams& params, double tenor, const RiccatiOptions& options = {});

/// Same for real w. Callers wanting the CF of (x_T - x_0)/sqrt(T) at u pass w = u / sqrt(T).
cplx cf(double w, const RoughHestonParams& params, double tenor, const RiccatiOptions& options = {});

/// Kernel-caching evaluator for many arguments at fixed (params, T).
class RiccatiCf {
public:
    RiccatiCf(const RoughHestonParams& params, double tenor, RiccatiOptions options = {});

    cplx operator()(cplx w) const;
    /// Same with a per-call tolerance.
    cplx operator()(cplx w, double tolerance) const;

    const RoughHestonParams& params() const { return params_; }
    double tenor() const { return tenor_; }

private:
    const AdamsKernel& kernel(int n_steps) const;

    RoughHestonParams params_;
    double tenor_;
    RiccatiOptions options_;
    std::vector<std::shared_ptr<const AdamsKernel>> kernels_;
};

}  // namespace volrough
