#pragma once

#include <cstdint>
#include <vector>

#include "volrough/riccati_cf.hpp"
#include "volrough/spot_model.hpp"

namespace volrough {

/// Out-of-the-money quote at log-strike k: a put iff k <= log spot (zero rates, forward = spot).
struct OptionQuote {
    double log_strike = 0.0;
    double price = 0.0;
    bool is_put = false;
};

/// One tenor's quotes on a strictly increasing log-strike grid.
struct OptionChain {
    double tenor = 0.0;
    double spot_log = 0.0;
    std::vector<OptionQuote> quotes;
    bool noisy = false;
    double min_spacing = 0.0;
    double max_spacing = 0.0;

    double spot() const;
    std::size_t size() const { return quotes.size(); }
};

/// Validates and assembles a chain: tenor > 0, log-strikes strictly increasing, prices finite and
/// nonnegative, put flags consistent with the spot. Fills the spacing summary.
OptionChain make_chain(double tenor, double spot_log, std::vector<OptionQuote> quotes, bool noisy = false);

struct PricerOptions {
    int nodes_per_panel = 16;
    /// Width of the first panel in v; 0 picks min(1/2, 0.5 / sqrt(V0 T)). A panel starting at v
    /// has width v / 4, clamped to [panel_width, max_panel_width].
    double panel_width = 0.0;
    double max_panel_width = 8.0;
    /// Integration stops after a panel on which |phi(v - i/2)| / (v^2 + 1/4) stays below this.
    double truncation = 1e-13;
    double max_v = 1e5;
    /// CF accuracy demanded at node v is max(cf_floor, cf_slope * (v^2 + 1/4)).
    double cf_floor = 1e-9;
    double cf_slope = 1e-10;
    RiccatiOptions riccati = {};
};

/// Prices European options from the rough Heston characteristic function along Im(w) = -1/2:
///   OTM(k) = min(S, K) - sqrt(S K) / pi * int_0^inf Re[exp(i v (x0 - k)) phi(v - i/2)] / (v^2 + 1/4) dv.
/// The CF is evaluated once on Gauss-Legendre panel nodes at construction; each price is then a
/// weighted sum. Immutable after construction.
class FourierPricer {
public:
    FourierPricer(const RoughHestonParams& params, double tenor, PricerOptions options = {});

    double call(double log_strike) const;
    double put(double log_strike) const;
    /// Put for k <= x0, call otherwise; floored at zero.
    double otm(double log_strike) const;

    const RoughHestonParams& params() const { return params_; }
    double tenor() const { return tenor_; }
    std::size_t node_count() const { return v_.size(); }
    double truncation_point() const { return v_max_; }

private:
    double integral(double log_strike) const;

    RoughHestonParams params_;
    double tenor_;
    double v_max_ = 0.0;
    std::vector<double> v_;
    std::vector<double> w_;
    std::vector<cplx> phi_;
};

/// One OTM price with a quadrature check: the price with 2 n_quad nodes per panel must agree with
/// the n_quad price to `tolerance` (currency), else NumericalError.
double price_otm(const RoughHestonParams& params, double tenor, double log_strike, int n_quad = 16,
                 double tolerance = 1e-6);

/// Strike lattice K0 + j * step with K0 = round(S / step) * step, extended in both directions
/// until the first strike whose OTM price falls below `cutoff` (excluded). Throws "empty chain".
OptionChain generate_chain(const FourierPricer& pricer, double strike_step = 5.0, double cutoff = 0.075);
OptionChain generate_chain(const RoughHestonParams& params, double tenor, double strike_step = 5.0,
                           double cutoff = 0.075, const PricerOptions& options = {});

/// True OTM prices on caller-supplied log-strikes (strictly increasing).
OptionChain chain_on_log_strikes(const FourierPricer& pricer, const std::vector<double>& log_strikes);

/// Multiplicative observation noise. `stream` selects an independent substream of `seed`.
struct NoiseModel {
    double level = 0.025;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// price * (1 + level * eps), eps iid standard normal, floored at zero. Deterministic in
/// (seed, stream); quotes are visited in strike order.
OptionChain add_noise(const OptionChain& chain, const NoiseModel& noise);

}  // namespace volrough
