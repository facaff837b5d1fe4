#include "volrough/riccati_cf.hpp"

#include <cmath>
#include <string>

#include "volrough/error.hpp"

namespace volrough {

namespace {

constexpr double kOverflow = 1e100;

// (k+2)^p - 2 (k+1)^p + k^p in extended precision; the terms cancel to O(k^{p-2}).
long double second_difference(long double k, long double p) {
    return std::pow(k + 2.0L, p) - 2.0L * std::pow(k + 1.0L, p) + std::pow(k, p);
}

// Solves h = b (c0 + c1 h + c2 h^2 + s) exactly; of the two roots, the one nearest the
// predictor continues the solution branch.
cplx implicit_step(cplx c0, cplx c1, double c2, double b, cplx s, cplx h_pred) {
    if (c2 == 0.0) {
        return b * (c0 + s) / (1.0 - b * c1);
    }
    const cplx qa = b * c2;
    const cplx qb = b * c1 - 1.0;
    const cplx qc = b * (c0 + s);
    cplx disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    if (std::real(std::conj(qb) * disc) < 0.0) {
        disc = -disc;
    }
    const cplx q = -0.5 * (qb + disc);
    if (q == cplx(0.0, 0.0)) {
        return 0.0;
    }
    const cplx r1 = q / qa;
    const cplx r2 = qc / q;
    return std::abs(r1 - h_pred) < std::abs(r2 - h_pred) ? r1 : r2;
}

}  // namespace

AdamsKernel::AdamsKernel(double order, int n_steps) : order_(order), n_(n_steps) {
    if (!(order > 0.0 && order <= 1.0)) {
        throw ValidationError("fractional order must lie in (0, 1]");
    }
    if (n_steps < 1) {
        throw ValidationError("kernel needs at least one step");
    }
    const long double a = order;
    pred_.resize(n_ + 1);
    corr_.resize(n_ + 1);
    start_.resize(n_ + 1);
    for (int k = 0; k <= n_; ++k) {
        const long double kk = k;
        pred_[k] = static_cast<double>(std::pow(kk + 1.0L, a) - std::pow(kk, a));
        corr_[k] = static_cast<double>(second_difference(kk, a + 1.0L));
        start_[k] = static_cast<double>(std::pow(kk, a + 1.0L) - (kk - a) * std::pow(kk + 1.0L, a));
    }

    // Product trapezoidal weights of I^beta on nodes 0..N, beta = 1 - a.
    const long double beta = 1.0L - a;
    const long double nn = n_;
    integral_.assign(n_ + 1, 0.0);
    integral_[0] = static_cast<double>(std::pow(nn - 1.0L, beta + 1.0L) - (nn - 1.0L - beta) * std::pow(nn, beta));
    for (int j = 1; j < n_; ++j) {
        integral_[j] = static_cast<double>(second_difference(static_cast<long double>(n_ - 1 - j), beta + 1.0L));
    }
    integral_[n_] = 1.0;
}

RiccatiSolution solve_h(cplx w, const RoughHestonParams& params, double tenor, int n_steps) {
    if (n_steps < 16) {
        throw ValidationError("n_steps must be at least 16");
    }
    const auto p = validate(params);
    return solve_h(w, p, tenor, AdamsKernel(p.hurst + 0.5, n_steps));
}

RiccatiSolution solve_h(cplx w, const RoughHestonParams& params, double tenor, const AdamsKernel& kernel) {
    if (!(tenor > 0.0) || !std::isfinite(tenor)) {
        throw ValidationError("tenor must be positive");
    }
    if (kernel.n_steps() < 16) {
        throw ValidationError("n_steps must be at least 16");
    }
    const double a = kernel.order();
    if (std::abs(a - (params.hurst + 0.5)) > 1e-14) {
        throw ValidationError("kernel order does not match H + 1/2");
    }
    const int n = kernel.n_steps();
    const cplx i1(0.0, 1.0);
    const cplx c0 = -0.5 * w * (w + i1);
    const cplx c1 = i1 * params.rho * params.nu * w;
    const double c2 = 0.5 * params.nu * params.nu;
    auto forcing = [&](cplx h) { return c0 + h * (c1 + c2 * h); };

    const double dt = tenor / n;
    const double dta = std::pow(dt, a);
    const double pred_scale = dta / std::tgamma(a + 1.0);
    const double corr_scale = dta / std::tgamma(a + 2.0);

    RiccatiSolution sol;
    sol.u = w;
    sol.tenor = tenor;
    sol.n_steps = n;
    sol.h_path.assign(n + 1, cplx(0.0, 0.0));
    std::vector<cplx> f(n + 1);
    f[0] = forcing(sol.h_path[0]);

    for (int m = 0; m < n; ++m) {
        cplx pred_sum = 0.0;
        cplx corr_sum = kernel.corrector_start(m) * f[0];
        pred_sum += kernel.predictor(m) * f[0];
        for (int j = 1; j <= m; ++j) {
            const int k = m - j;
            pred_sum += kernel.predictor(k) * f[j];
            corr_sum += kernel.corrector(k) * f[j];
        }
        const cplx h_pred = pred_scale * pred_sum;
        const cplx h_next = implicit_step(c0, c1, c2, corr_scale, corr_sum, h_pred);
        if (!std::isfinite(h_next.real()) || !std::isfinite(h_next.imag()) || std::abs(h_next) > kOverflow) {
            throw NumericalError("Riccati solution overflow at n_steps=" + std::to_string(n));
        }
        sol.h_path[m + 1] = h_next;
        f[m + 1] = forcing(h_next);
    }

    const double beta = 1.0 - a;
    const auto& iw = kernel.integral_weights();
    cplx acc = 0.0;
    for (int j = 0; j <= n; ++j) {
        acc += iw[j] * sol.h_path[j];
    }
    sol.frac_integral = acc * (std::pow(dt, beta) / std::tgamma(beta + 2.0));
    return sol;
}

namespace {

template <typename KernelFor>
cplx converged_cf(cplx w, const RoughHestonParams& params, double tenor, const RiccatiOptions& options,
                  double tolerance, KernelFor&& kernel_for) {
    if (w == cplx(0.0, 0.0)) {
        return {1.0, 0.0};
    }
    // Global error is O(dt^{1+a}); one Richardson step removes the leading term.
    const double ratio = std::pow(2.0, 1.5 + params.hurst) - 1.0;
    bool have_previous = false;
    cplx previous_integral;
    std::string last_failure;
    for (int n = options.n_steps; n <= options.max_steps; n *= 2) {
        cplx integral;
        try {
            integral = solve_h(w, params, tenor, kernel_for(n)).frac_integral;
        } catch (const NumericalError& e) {
            have_previous = false;
            last_failure = e.what();
            continue;
        }
        if (have_previous) {
            const cplx correction = (integral - previous_integral) / ratio;
            const cplx value = std::exp(params.v0 * integral);
            const cplx extrapolated = std::exp(params.v0 * (integral + correction));
            if (std::abs(correction) <= tolerance || std::abs(extrapolated - value) <= tolerance) {
                return extrapolated;
            }
        }
        have_previous = true;
        previous_integral = integral;
    }
    std::string msg = "Riccati solver did not converge by n_steps=" + std::to_string(options.max_steps);
    if (!last_failure.empty()) {
        msg += " (" + last_failure + ")";
    }
    throw NumericalError(msg);
}

void check_options(const RiccatiOptions& options) {
    if (options.n_steps < 16) {
        throw ValidationError("n_steps must be at least 16");
    }
    if (!(options.tolerance > 0.0)) {
        throw ValidationError("Riccati tolerance must be positive");
    }
}

}  // namespace

cplx cf_complex(cplx w, const RoughHestonParams& params, double tenor, const RiccatiOptions& options) {
    const auto p = validate(params);
    check_options(options);
    if (!(tenor > 0.0) || !std::isfinite(tenor)) {
        throw ValidationError("tenor must be positive");
    }
    return converged_cf(w, p, tenor, options, options.tolerance, [&](int n) { return AdamsKernel(p.hurst + 0.5, n); });
}

cplx cf(double w, const RoughHestonParams& params, double tenor, const RiccatiOptions& options) {
    return cf_complex(cplx(w, 0.0), params, tenor, options);
}

RiccatiCf::RiccatiCf(const RoughHestonParams& params, double tenor, RiccatiOptions options)
    : params_(validate(params)), tenor_(tenor), options_(options) {
    check_options(options_);
    if (!(tenor > 0.0) || !std::isfinite(tenor)) {
        throw ValidationError("tenor must be positive");
    }
    for (int n = options_.n_steps; n <= options_.max_steps; n *= 2) {
        kernels_.push_back(std::make_shared<const AdamsKernel>(params_.hurst + 0.5, n));
    }
}

const AdamsKernel& RiccatiCf::kernel(int n_steps) const {
    for (const auto& k : kernels_) {
        if (k->n_steps() == n_steps) {
            return *k;
        }
    }
    throw ValidationError("no cached kernel for n_steps=" + std::to_string(n_steps));
}

cplx RiccatiCf::operator()(cplx w) const {
    return (*this)(w, options_.tolerance);
}

cplx RiccatiCf::operator()(cplx w, double tolerance) const {
    if (!(tolerance > 0.0)) {
        throw ValidationError("Riccati tolerance must be positive");
    }
    return converged_cf(w, params_, tenor_, options_, tolerance, [&](int n) -> const AdamsKernel& { return kernel(n); });
}

}  // namespace volrough
