#include "volrough/hurst_est.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace volrough {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_grid_options(const UGridOptions& o) {
    if (!(o.step > 0.0)) {
        throw ValidationError("u-grid step must be positive");
    }
}

// Incremental scan state shared by both adaptive_ugrid overloads.
struct GridScan {
    const UGridOptions& opt;
    int i1 = -1;
    int iK = -1;
    int icap = -1;

    // Returns true once the grid end is determined.
    bool feed(int i, double modulus, double arg) {
        if (icap < 0 && std::abs(arg) > opt.cap_threshold) {
            icap = i;
        }
        if (i1 < 0 && modulus < opt.u1_threshold) {
            i1 = i;
        }
        if (iK < 0 && modulus < opt.uK_threshold) {
            iK = i;
        }
        return icap >= 0 || (i1 >= 0 && iK >= 0);
    }

    UGrid finish() const {
        UGrid g;
        g.step = opt.step;
        g.u1_threshold = opt.u1_threshold;
        g.uK_threshold = opt.uK_threshold;
        g.cap_threshold = opt.cap_threshold;
        if (i1 < 0) {
            throw NumericalError("empty u-grid");
        }
        int first = i1;
        int last = iK >= 0 ? iK : std::numeric_limits<int>::max();
        if (icap >= 0 && (iK < 0 || icap <= iK)) {
            g.cap = icap * opt.step;
            first = std::min(first, icap - 1);
            last = icap - 1;
        }
        if (last == std::numeric_limits<int>::max() || last - first + 1 < 2) {
            throw NumericalError("empty u-grid");
        }
        g.u1 = i1 * opt.step;
        g.uK = iK >= 0 ? iK * opt.step : kNaN;
        for (int i = first; i <= last; ++i) {
            g.u_values.push_back(i * opt.step);
        }
        return g;
    }
};

double bracket_scaled(double H, double tau, double tau4) {
    // ((tau^{1/2+H} - 1) - c (tau4^{1/2+H} - 1)) / (H - 1/2), finite at H = 1/2.
    const double d = H - 0.5;
    auto e = [d](double lt) {
        const double x = d * lt;
        return x == 0.0 ? lt : lt * std::expm1(x) / x;
    };
    const double c = (tau - 1.0) / (tau4 - 1.0);
    return tau * e(std::log(tau)) - c * tau4 * e(std::log(tau4));
}

void finalize(HurstEstimate& est) {
    if (!std::isfinite(est.value)) {
        est.flags |= kFlagNonFinite;
    } else if (!(est.value > -0.25 && est.value < 1.0)) {
        est.flags |= kFlagOutOfBand;
        est.warnings.push_back("estimate outside the sanity band (-0.25, 1)");
    }
}

}  // namespace

UGrid adaptive_ugrid(const CFPortfolioEstimate& scan, const UGridOptions& options) {
    check_grid_options(options);
    GridScan state{options};
    for (std::size_t j = 0; j < scan.u_grid.size(); ++j) {
        const double u = scan.u_grid[j];
        const double pos = u / options.step;
        const int i = static_cast<int>(std::lround(pos));
        if (std::abs(pos - i) > 1e-9 || (j > 0 && !(u > scan.u_grid[j - 1]))) {
            throw ValidationError("scan grid must be increasing multiples of the step");
        }
        if (state.feed(i, std::abs(scan.L_values[j]), scan.arg_values[j])) {
            break;
        }
    }
    return state.finish();
}

UGrid adaptive_ugrid(const OptionChain& chain, const UGridOptions& options) {
    check_grid_options(options);
    const double m_hat = spanning_mean(chain);
    const double drift = std::sqrt(chain.tenor) * m_hat;
    GridScan state{options};
    for (int i = 1; i <= options.max_points; ++i) {
        const double u = i * options.step;
        const cplx l = spanning_cf(chain, u);
        if (state.feed(i, std::abs(l), std::arg(l) - u * drift)) {
            break;
        }
    }
    return state.finish();
}

double regression_intercept(const std::vector<double>& u, const std::vector<double>& a) {
    if (u.size() != a.size()) {
        throw ValidationError("u and A values differ in length");
    }
    if (u.size() < 2) {
        throw NumericalError("singular design");
    }
    double s2 = 0.0;
    double s4 = 0.0;
    double s3a = 0.0;
    double s5a = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (a[i] == 0.0) {
            throw NumericalError("zero A value at u=" + std::to_string(u[i]));
        }
        const double u2 = u[i] * u[i];
        s2 += u2;
        s4 += u2 * u2;
        s3a += u2 * u[i] / a[i];
        s5a += u2 * u2 * u[i] / a[i];
    }
    const double k = static_cast<double>(u.size());
    const double den = k * s4 - s2 * s2;
    if (!(den > 1e-13 * k * s4)) {
        throw NumericalError("singular design");
    }
    return (s2 * s5a - s4 * s3a) / den;
}

HurstEstimate estimate_h_from_args(const std::vector<double>& u_grid, const std::vector<double>& a_t1,
                                   const std::vector<double>& a_t2, double t1, double t2,
                                   const HurstOptions& options) {
    if (!(t1 > 0.0 && t2 > t1)) {
        throw ValidationError("tenors must satisfy 0 < T1 < T2");
    }
    HurstEstimate est;
    est.method = HurstMethod::plain;
    est.tenors = {t1, t2};
    est.u_grid = u_grid;
    est.intercept_t1 = regression_intercept(u_grid, a_t1);
    est.intercept_t2 = regression_intercept(u_grid, a_t2);
    if (est.intercept_t1 == 0.0 || est.intercept_t2 == 0.0) {
        throw NumericalError("zero regression intercept");
    }
    double signal = 0.0;
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        signal = std::max({signal, std::abs(a_t1[i]), std::abs(a_t2[i])});
    }
    if (signal < options.min_signal) {
        est.flags |= kFlagWeakSignal;
        est.warnings.push_back("no rough signal: |A| below the signal floor on the whole grid");
    }
    if ((est.intercept_t1 > 0.0) != (est.intercept_t2 > 0.0)) {
        est.flags |= kFlagSignMismatch;
        est.warnings.push_back("intercepts of the two tenors differ in sign");
        est.value = kNaN;
    } else {
        est.value = (std::log(std::abs(est.intercept_t1)) - std::log(std::abs(est.intercept_t2))) / std::log(t2 / t1);
    }
    finalize(est);
    return est;
}

HurstEstimate estimate_h(const std::function<double(double, double)>& a_fn, double t1, double t2,
                         const std::vector<double>& u_grid, const HurstOptions& options) {
    std::vector<double> a1;
    std::vector<double> a2;
    for (double u : u_grid) {
        a1.push_back(a_fn(t1, u));
        a2.push_back(a_fn(t2, u));
    }
    return estimate_h_from_args(u_grid, a1, a2, t1, t2, options);
}

HurstEstimate estimate_h(const OptionChain& chain_t1, const OptionChain& chain_t2, const HurstOptions& options) {
    if (!(chain_t2.tenor > chain_t1.tenor)) {
        throw ValidationError("tenors must satisfy 0 < T1 < T2");
    }
    const UGrid grid = adaptive_ugrid(chain_t2, options.grid);
    const auto e1 = estimate_cf(chain_t1, grid.u_values);
    const auto e2 = estimate_cf(chain_t2, grid.u_values);
    return estimate_h_from_args(grid.u_values, e1.arg_values, e2.arg_values, chain_t1.tenor, chain_t2.tenor,
                                options);
}

double first_diff(cplx l1, cplx lj, double u, double tau_j) {
    if (l1 == cplx(0.0, 0.0) || lj == cplx(0.0, 0.0)) {
        throw NumericalError("argument undefined: zero CF value");
    }
    if (u == 0.0) {
        throw ValidationError("first difference needs u != 0");
    }
    return (std::arg(l1) - std::arg(lj) / tau_j) / (u * u * u);
}

double second_diff(double a_1j, double a_14, double tau_j, double tau_4) {
    if (tau_4 == 1.0) {
        throw ValidationError("second difference needs tau_4 != 1");
    }
    return a_1j - (tau_j - 1.0) / (tau_4 - 1.0) * a_14;
}

double f_of_h(double H, double tau2, double tau3, double tau4) {
    if (!(1.0 < tau2 && tau2 < tau3 && tau3 < tau4)) {
        throw ValidationError("need 1 < tau2 < tau3 < tau4");
    }
    if (!(H >= 0.0 && H <= 0.5)) {
        throw ValidationError("H out of range");
    }
    return bracket_scaled(H, tau2, tau4) / bracket_scaled(H, tau3, tau4);
}

double invert_f(double ratio, double tau2, double tau3, double tau4) {
    constexpr int kSamples = 101;
    std::array<double, kSamples> f{};
    for (int i = 0; i < kSamples; ++i) {
        f[i] = f_of_h(0.5 * i / (kSamples - 1), tau2, tau3, tau4);
    }
    const bool decreasing = f[1] < f[0];
    for (int i = 1; i < kSamples; ++i) {
        if (decreasing ? !(f[i] < f[i - 1]) : !(f[i] > f[i - 1])) {
            throw NumericalError("F is not monotone on [0, 1/2] for these tenor ratios");
        }
    }
    const double f_lo = std::min(f.front(), f.back());
    const double f_hi = std::max(f.front(), f.back());
    if (!std::isfinite(ratio) || ratio < f_lo || ratio > f_hi) {
        const double nearest =
            std::abs(ratio - f.front()) <= std::abs(ratio - f.back()) || std::isnan(ratio) ? 0.0 : 0.5;
        std::ostringstream msg;
        msg << "ratio " << ratio << " outside the range of F [" << f_lo << ", " << f_hi << "]";
        throw FRangeError(msg.str(), nearest);
    }
    double lo = 0.0;
    double hi = 0.5;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f_of_h(mid, tau2, tau3, tau4);
        if ((fm > ratio) == decreasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

HurstEstimate robust_from_values(const std::array<double, 4>& tenors, double u,
                                 const std::function<cplx(int, double)>& l_at) {
    if (!(tenors[0] > 0.0 && tenors[0] < tenors[1] && tenors[1] < tenors[2] && tenors[2] < tenors[3])) {
        throw ValidationError("tenors must be positive and strictly increasing");
    }
    if (!(u > 0.0)) {
        throw ValidationError("u must be positive");
    }
    HurstEstimate est;
    est.method = HurstMethod::jump_robust;
    est.tenors.assign(tenors.begin(), tenors.end());
    est.u_grid = {u};
    std::array<double, 4> tau{};
    std::array<double, 4> a{};
    const cplx l1 = l_at(0, u);
    for (int j = 1; j < 4; ++j) {
        tau[j] = tenors[j] / tenors[0];
        a[j] = first_diff(l1, l_at(j, u * std::sqrt(tau[j])), u, tau[j]);
    }
    est.second_diff_124 = second_diff(a[1], a[3], tau[1], tau[3]);
    est.second_diff_134 = second_diff(a[2], a[3], tau[2], tau[3]);
    constexpr double kZero = 1e-12;
    if (!(std::abs(est.second_diff_134) > kZero) || !(std::abs(est.second_diff_124) > kZero)) {
        est.flags |= kFlagNoSignal;
        est.warnings.push_back("second differences vanish; F ratio undefined");
        est.f_ratio = kNaN;
        est.value = kNaN;
        return est;
    }
    est.f_ratio = est.second_diff_124 / est.second_diff_134;
    try {
        est.value = invert_f(est.f_ratio, tau[1], tau[2], tau[3]);
    } catch (const FRangeError& e) {
        est.flags |= kFlagOutOfRange;
        est.warnings.push_back(e.what());
        est.nearest_endpoint = e.nearest_endpoint();
        est.value = kNaN;
        return est;
    }
    finalize(est);
    return est;
}

}  // namespace

HurstEstimate estimate_h_jump_robust(const std::function<cplx(double, double)>& l_fn,
                                     const std::array<double, 4>& tenors, double u) {
    return robust_from_values(tenors, u, [&](int j, double v) { return l_fn(tenors[j], v); });
}

HurstEstimate estimate_h_jump_robust(const std::array<OptionChain, 4>& chains, std::optional<double> u,
                                     const UGridOptions& grid) {
    std::array<double, 4> tenors{};
    for (int j = 0; j < 4; ++j) {
        tenors[j] = chains[j].tenor;
    }
    double u_used = 0.0;
    if (u) {
        u_used = *u;
    } else {
        const UGrid g = adaptive_ugrid(chains[3], grid);
        u_used = 0.5 * (g.u_values.front() + g.u_values.back());
    }
    return robust_from_values(tenors, u_used, [&](int j, double v) { return spanning_cf(chains[j], v); });
}

}  // namespace volrough
