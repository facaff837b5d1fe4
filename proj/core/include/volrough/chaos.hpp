#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace volrough {

using cplx = std::complex<double>;

/// X = mean + sum_j beta_j xi_j + sum_j alpha_j (xi_j^2 - 1), xi_j iid standard normal.
/// The shorter of alphas/betas is treated as zero-padded.
struct ChaosSpec {
    double mean = 0.0;
    std::vector<double> alphas;
    std::vector<double> betas;

    std::size_t dimension() const { return std::max(alphas.size(), betas.size()); }
    double alpha(std::size_t j) const { return j < alphas.size() ? alphas[j] : 0.0; }
    double beta(std::size_t j) const { return j < betas.size() ? betas[j] : 0.0; }
};

/// exp(i mean u - 1/2 sum_j [log(1 - 2 i alpha_j u) + 2 i alpha_j u + beta_j^2 u^2 / (1 - 2 i alpha_j u)]).
cplx chaos_cf(const ChaosSpec& spec, double u);

/// n draws of X. Deterministic in seed.
std::vector<double> chaos_sample(const ChaosSpec& spec, std::size_t n, std::uint64_t seed);

/// Draws with the first-chaos part X1 = sum beta xi and second-chaos part X2 = sum alpha (xi^2 - 1)
/// kept apart; x = mean + x1 + x2 uses the same xi as chaos_sample with the same seed.
struct ChaosDraws {
    std::vector<double> x;
    std::vector<double> x1;
    std::vector<double> x2;
};
ChaosDraws chaos_sample_components(const ChaosSpec& spec, std::size_t n, std::uint64_t seed);

/// (E[X1^2], E[X2^2], E[X2^3], E[X1^2 X2], Cov(X1^2, X2^2), Cov(X1^2, X2^3) - 3 E[X1^2 X2] E[X2^2])
///   = (sum b^2, 2 sum a^2, 8 sum a^3, 2 sum a b^2, 8 sum a^2 b^2, 48 sum a^3 b^2).
std::array<double, 6> chaos_moments(const ChaosSpec& spec);

/// H0 = 1, H1 = x, H2 = (x^2 - 1)/2, H3 = x^3/6 - x/2. Throws ValidationError for n > 3.
double hermite(int n, double x);

}  // namespace volrough
