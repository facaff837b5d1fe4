#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "volrough/chain_synth.hpp"

namespace volrough {

using cplx = std::complex<double>;

/// Option-portfolio estimates of the normalized conditional CF for one tenor.
struct CFPortfolioEstimate {
    double tenor = 0.0;
    std::vector<double> u_grid;
    std::vector<cplx> L_values;
    double M_hat = 0.0;
    std::vector<double> arg_values;
};

/// Left-endpoint Riemann sum of the spanning identity
///   L(u) = 1 - (u^2/T + i u/sqrt(T)) e^{-x} sum_{j>=2} e^{(i u/sqrt(T) - 1)(k_{j-1} - x)} O(k_{j-1}) (k_j - k_{j-1}).
/// T is the chain's own tenor. Exact conjugate symmetry in u.
cplx spanning_cf(const OptionChain& chain, double u);

/// M = -(1/T) sum_{j>=2} e^{-k_{j-1}} O(k_{j-1}) (k_j - k_{j-1}), an estimate of E[x_T - x_0] / T.
double spanning_mean(const OptionChain& chain);

/// Arg L(u) - u sqrt(T) M, principal branch. Throws NumericalError when L(u) = 0.
double arg_statistic(const OptionChain& chain, double u);
/// Same, reusing a precomputed M.
double arg_statistic(const OptionChain& chain, double u, double m_hat);

/// L, M and A on a grid of u values.
CFPortfolioEstimate estimate_cf(const OptionChain& chain, const std::vector<double>& u_grid);

struct OracleOptions {
    /// Initial half-width of the log-strike window in units of sqrt(V0 T).
    double initial_width = 10.0;
    /// The window grows until O(k)/K at both ends is below this.
    double boundary = 1e-12;
    int initial_panels = 32;
    int max_panels = 1 << 14;
    double tolerance = 1e-11;
};

/// Continuous version of the spanning integral by composite Gauss-Legendre quadrature, split at
/// k = x. `otm_price(k)` is the OTM price at log-strike k; `scale` is sqrt(V0 T). The panel count
/// doubles until successive values agree to `tolerance`, else NumericalError.
cplx oracle_spanning_integral(const std::function<double(double)>& otm_price, double spot_log, double tenor,
                              double u, double scale, const OracleOptions& options = {});

/// Convenience overload pricing with a FourierPricer.
cplx oracle_spanning_integral(const FourierPricer& pricer, double u, const OracleOptions& options = {});

}  // namespace volrough
