#pragma once

#include <complex>
#include <functional>

#include "volrough/spot_model.hpp"

namespace volrough {

using cplx = std::complex<double>;

/// Characteristic exponents of the jump parts at a CF argument v:
///   phi(v)    = sum_z w_z (exp(i v gamma_z) - 1)                      (big jumps)
///   varphi(v) = sum_z w_z (exp(i v delta_z) - 1 - i v delta_z)        (small jumps)
///   psi = phi + varphi.
struct JumpExponents {
    cplx phi;
    cplx varphi;
    cplx psi;
};

JumpExponents jump_exponents(const JumpSpec& jumps, double v);

/// Bit mask selecting which chi terms chi_terms() must produce.
enum ChiRequest : unsigned {
    kChi1 = 1u << 0,
    kChi2 = 1u << 1,
    kChi3 = 1u << 2,
    kChi4 = 1u << 3,
    kChi1Proj = 1u << 4,
    kChiAll = kChi1 | kChi2 | kChi3 | kChi4 | kChi1Proj,
};

/// Small-jump interaction sums at argument v. Each is a weighted sum of
/// (exp(i v delta_z) - 1) against a coefficient table; chi3 is the double sum against delta_delta.
/// chi1_proj(s) uses the projected jump sizes at lag s T.
struct ChiTerms {
    cplx chi1;
    cplx chi2;
    cplx chi3;
    cplx chi4;
    std::function<cplx(double s)> chi1_proj;
};

/// Throws ValidationError naming the missing table when a requested term lacks its coefficients.
/// Terms not requested are left at zero. Without small jumps every term is zero.
ChiTerms chi_terms(const JumpSpec& jumps, double v, double tenor, unsigned request = kChiAll);

/// Short-maturity approximation of E[exp(i u (x_{t+T} - x_t) / sqrt(T))], split into its parts.
/// total = leading + c1_block + c2_term.
struct ExpansionResult {
    cplx total;
    cplx leading;
    cplx c1_block;
    cplx c2_term;
    double c_prime_10 = 0.0;
};

/// Evaluates the expansion from spot characteristics. Negative u is handled by conjugation.
/// When small jumps are declared, all four coefficient tables must be present.
ExpansionResult expansion_cf(const SpotCharacteristics& spot, double u, double tenor);

/// spot_from_rough_heston followed by expansion_cf.
ExpansionResult expansion_cf_rough(const RoughHestonParams& params, double u, double tenor);

/// C_2(u) of the T^{2H} correction (real-valued).
double c2_coefficient(const SpotCharacteristics& spot, double u);

/// T^{-H} / Gamma(H + 1/2) * int_0^1 int_0^s (s - r)^{H - 1/2} (sigma_r sigma_s eta_r - sigma^2 eta) dr ds,
/// with sigma_r, eta_r the projected curves at lag r T.
double c_prime_10(const SpotCharacteristics& spot, double tenor);

/// Leading-order conditional mean (alpha + sum_z w_z gamma_z) T. Requires q = 1 and H_gamma >= H
/// when big jumps are present.
double conditional_mean(const SpotCharacteristics& spot, double tenor);

}  // namespace volrough
