#include "volrough/expansion.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "volrough/error.hpp"
#include "volrough/numerics.hpp"

namespace volrough {

namespace {

const cplx kI(0.0, 1.0);

void check_tenor(double tenor) {
    if (!(tenor > 0.0) || !std::isfinite(tenor)) {
        throw ValidationError("tenor must be positive");
    }
}

const std::vector<double>& require(const std::optional<std::vector<double>>& table, const char* name) {
    if (!table) {
        throw ValidationError(std::string("missing coefficient table: ") + name);
    }
    return *table;
}

ExpansionResult conjugate(ExpansionResult r) {
    r.total = std::conj(r.total);
    r.leading = std::conj(r.leading);
    r.c1_block = std::conj(r.c1_block);
    r.c2_term = std::conj(r.c2_term);
    return r;
}

}  // namespace

JumpExponents jump_exponents(const JumpSpec& jumps, double v) {
    JumpExponents out{};
    if (const auto& big = jumps.big()) {
        for (std::size_t i = 0; i < big->sizes.size(); ++i) {
            out.phi += big->weights[i] * (std::exp(kI * v * big->sizes[i]) - 1.0);
        }
    }
    if (const auto& small = jumps.small()) {
        for (std::size_t i = 0; i < small->delta.sizes.size(); ++i) {
            const double d = small->delta.sizes[i];
            // cos x - 1 = -2 sin^2(x/2) avoids cancellation for tiny v * delta.
            const double x = v * d;
            const double half = std::sin(0.5 * x);
            const cplx term(-2.0 * half * half, std::sin(x) - x);
            out.varphi += small->delta.weights[i] * term;
        }
    }
    out.psi = out.phi + out.varphi;
    return out;
}

ChiTerms chi_terms(const JumpSpec& jumps, double v, double tenor, unsigned request) {
    check_tenor(tenor);
    ChiTerms out{};
    out.chi1_proj = [](double) { return cplx(0.0, 0.0); };
    const auto& small = jumps.small();
    if (!small) {
        return out;
    }
    const auto& table = small->delta;
    const std::size_t n = table.sizes.size();
    std::vector<cplx> e(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = std::exp(kI * v * table.sizes[i]) - 1.0;
    }
    auto weighted = [&](const std::vector<double>& coef) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += table.weights[i] * coef[i] * e[i];
        }
        return acc;
    };
    if (request & kChi1) {
        out.chi1 = weighted(require(small->sigma_delta, "sigma_delta"));
    }
    if (request & kChi2) {
        out.chi2 = weighted(require(small->eta_delta, "eta_delta"));
    }
    if (request & kChi3) {
        const auto& dd = require(small->delta_delta, "delta_delta");
        cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx row = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                row += dd[i * n + j] * table.weights[j] * e[j];
            }
            acc += table.weights[i] * e[i] * row;
        }
        out.chi3 = acc;
    }
    if (request & kChi4) {
        out.chi4 = weighted(require(small->delta_sigma, "delta_sigma"));
    }
    if ((request & kChi1Proj) && small->delta_proj) {
        SmallJumps copy = *small;
        out.chi1_proj = [copy, e, tenor](double s) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                acc += copy.delta.weights[i] * (copy.projected(s * tenor, i) - copy.delta.sizes[i]) * e[i];
            }
            return acc;
        };
    }
    return out;
}

double c2_coefficient(const SpotCharacteristics& spot, double u) {
    const double H = spot.hurst;
    const double s = spot.sigma;
    const double s2 = s * s;
    const double rough = spot.eta * spot.eta + spot.eta_tilde * spot.eta_tilde;
    const double u2 = u * u;
    const double u4 = u2 * u2;
    const double g32 = std::tgamma(H + 1.5);
    const double bracket = s2 * u4 * (s * spot.sigma_eta + spot.eta * spot.eta) / std::tgamma(2.0 * H + 3.0) +
                           s2 * rough * u4 / (4.0 * (H + 1.0) * g32 * g32) -
                           rough * u2 / (8.0 * H * std::tgamma(H + 0.5) * g32);
    return std::exp(-0.5 * u2 * s2) * bracket;
}

double c_prime_10(const SpotCharacteristics& spot, double tenor) {
    check_tenor(tenor);
    if (!spot.sigma_proj && !spot.eta_proj) {
        return 0.0;
    }
    const double beta = spot.hurst + 0.5;
    const auto rule = numerics::simpson_unit(numerics::kSimpsonPoints);
    const std::size_t m = rule.nodes.size();
    const double h = rule.nodes[1] - rule.nodes[0];
    std::vector<double> sig(m);
    std::vector<double> eta(m);
    for (std::size_t i = 0; i < m; ++i) {
        sig[i] = spot.sigma_at(rule.nodes[i] * tenor);
        eta[i] = spot.eta_at(rule.nodes[i] * tenor);
    }
    const double base = spot.sigma * spot.sigma * spot.eta;
    auto pw = [beta](double k) { return std::pow(k, beta + 1.0); };
    // Product trapezoid rule for int_0^{s_i} (s_i - r)^{beta - 1} g(r) dr with g piecewise linear.
    const double scale = std::pow(h, beta) / (beta * (beta + 1.0));
    double outer = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        const double n = static_cast<double>(i);
        double inner = (pw(n - 1.0) - (n - 1.0 - beta) * std::pow(n, beta)) * (sig[0] * sig[i] * eta[0] - base);
        for (std::size_t j = 1; j < i; ++j) {
            const double k = static_cast<double>(i - j);
            const double a = pw(k + 1.0) - 2.0 * pw(k) + pw(k - 1.0);
            inner += a * (sig[j] * sig[i] * eta[j] - base);
        }
        inner += sig[i] * sig[i] * eta[i] - base;
        outer += rule.weights[i] * scale * inner;
    }
    return std::pow(tenor, -spot.hurst) / std::tgamma(beta) * outer;
}

ExpansionResult expansion_cf(const SpotCharacteristics& spot, double u, double tenor) {
    validate(spot);
    check_tenor(tenor);
    if (u < 0.0) {
        return conjugate(expansion_cf(spot, -u, tenor));
    }
    const double H = spot.hurst;
    const double sqrt_t = std::sqrt(tenor);
    const double v = u / sqrt_t;
    const double s2 = spot.sigma * spot.sigma;
    const double u2 = u * u;
    const double u3 = u2 * u;

    const auto rule = numerics::simpson_unit(numerics::kSimpsonPoints);
    double var_integral = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double sg = spot.sigma_at(rule.nodes[i] * tenor);
        var_integral += rule.weights[i] * sg * sg;
    }

    ExpansionResult r;
    r.c_prime_10 = c_prime_10(spot, tenor);

    JumpExponents ex{};
    ChiTerms chi{};
    double h_delta = 0.0;
    bool has_small = false;
    if (spot.jumps) {
        ex = jump_exponents(*spot.jumps, v);
        if (spot.jumps->small()) {
            has_small = true;
            chi = chi_terms(*spot.jumps, v, tenor, kChiAll);
            h_delta = spot.jumps->activity().h_delta;
        }
    }

    const cplx cubic = 0.5 * s2 * spot.eta_sigma * sqrt_t + s2 * spot.eta * std::pow(tenor, H) / std::tgamma(H + 2.5) +
                       r.c_prime_10 * std::pow(tenor, 2.0 * H);
    r.leading = std::exp(kI * u * spot.alpha * sqrt_t - 0.5 * u2 * var_integral + tenor * ex.psi - kI * u3 * cubic);

    if (has_small) {
        const double sg = spot.sigma;
        const cplx c11 = -u2 * sg * std::pow(tenor, h_delta + 0.5) * chi.chi1 / std::tgamma(h_delta + 2.5);
        const cplx c12 = -0.5 * u2 * sg * tenor * chi.chi2;
        const cplx c13 = 0.5 * kI * u * std::pow(tenor, 1.5) * chi.chi3;
        const cplx c14 = -0.5 * u2 * sg * tenor * chi.chi4;
        cplx proj = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            proj += rule.weights[i] * chi.chi1_proj(rule.nodes[i]);
        }
        const cplx c11p = kI * u * sqrt_t * proj;
        r.c1_block = std::exp(-0.5 * u2 * s2 + tenor * ex.varphi) * (c11 + c12 + c13 + c14 + c11p);
    }

    r.c2_term = c2_coefficient(spot, u) * std::pow(tenor, 2.0 * H);
    r.total = r.leading + r.c1_block + r.c2_term;
    return r;
}

ExpansionResult expansion_cf_rough(const RoughHestonParams& params, double u, double tenor) {
    return expansion_cf(spot_from_rough_heston(params), u, tenor);
}

double conditional_mean(const SpotCharacteristics& spot, double tenor) {
    if (!(tenor >= 0.0) || !std::isfinite(tenor)) {
        throw ValidationError("tenor must be nonnegative");
    }
    double drift = spot.alpha;
    if (spot.jumps && spot.jumps->big()) {
        const auto& act = spot.jumps->activity();
        if (act.q != 1.0 || act.h_gamma < spot.hurst) {
            throw ValidationError("conditional mean needs q = 1 and H_gamma >= H");
        }
        const auto& big = *spot.jumps->big();
        for (std::size_t i = 0; i < big.sizes.size(); ++i) {
            drift += big.weights[i] * big.sizes[i];
        }
    }
    return drift * tenor;
}

}  // namespace volrough
