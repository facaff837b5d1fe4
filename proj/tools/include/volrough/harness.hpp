#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "volrough/chain_synth.hpp"
#include "volrough/hurst_est.hpp"
#include "volrough/riccati_cf.hpp"

namespace volrough {

/// Flat key=value configuration shared by all subcommands.
struct StudyConfig {
    std::vector<std::pair<double, double>> scenarios;  ///< (V0, H)
    double nu = 0.5;
    double rho = -0.9;
    double spot = 3000.0;
    std::vector<double> tenors = {3.0 / 252.0, 6.0 / 252.0};
    int n_reps = 500;
    double noise = 0.025;
    std::uint64_t base_seed = 1;
    double u_step = 0.01;
    double strike_step = 5.0;
    double cutoff = 0.075;
    std::string output = "report.json";
    int riccati_steps = 512;
    std::optional<double> u;                        ///< single u (jump-robust, verify-expansion)
    std::vector<double> u_values;                   ///< explicit u grid for estimate-cf
    std::vector<double> expansion_tenors = {1e-2, 1e-3, 1e-4};
    std::string chains;                             ///< input chain CSV

    RoughHestonParams params(std::size_t scenario) const;
};

/// Parses the key=value text. Blank lines and '#' comments are skipped; numbers accept a/b
/// fractions; lists are comma-separated; scenarios are "V0:H" items. Unknown keys, malformed
/// values and violated invariants throw ValidationError naming the line.
StudyConfig parse_config(const std::string& text);
/// Reads and parses a file; IoError when unreadable.
StudyConfig load_config(const std::string& path);

struct ScenarioQuantiles {
    double v0 = 0.0;
    double hurst = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    int n_used = 0;
    int n_failed = 0;
    std::string error;  ///< set when the scenario could not be priced
};

struct QuantileReport {
    std::vector<ScenarioQuantiles> scenarios;
};

/// Produces the true chain for (params, tenor). Swappable for tests.
using ChainProvider = std::function<OptionChain(const RoughHestonParams&, double tenor)>;

ChainProvider default_chain_provider(const StudyConfig& config);

/// Monte Carlo quantiles of the plain estimator per scenario. True chains are priced once per
/// (scenario, tenor); replication r perturbs them with seed base_seed + r, one noise stream per
/// tenor. Failed or flagged estimates are counted, not used. A pricing failure marks only its
/// own scenario.
QuantileReport run_mc_study(const StudyConfig& config, const ChainProvider& provider = {});

struct ExpansionRow {
    double tenor = 0.0;
    cplx riccati;
    cplx expansion;
    double residual = 0.0;
};

struct ExpansionReport {
    std::vector<ExpansionRow> rows;
    double slope = 0.0;  ///< OLS slope of log residual on log T; NaN if a residual is zero
};

ExpansionReport verify_expansion(const RoughHestonParams& params, double u, const std::vector<double>& tenors,
                                 const RiccatiOptions& options = {});

/// Chain CSV: header tenor_years,spot,log_strike,price,is_put. Rows are grouped by tenor in
/// order of first appearance.
std::vector<OptionChain> ingest_chain_csv(const std::string& path);
std::vector<OptionChain> parse_chain_csv(const std::string& text);
void write_chain_csv(const std::string& path, const std::vector<OptionChain>& chains);
std::string format_chain_csv(const std::vector<OptionChain>& chains);

/// Writes the JSON report to `path` and a (scenario, quantile, value) CSV next to it.
void emit_report(const QuantileReport& report, const StudyConfig& config, const std::string& path);
std::string report_json(const QuantileReport& report, const StudyConfig& config);
std::string report_csv(const QuantileReport& report);
/// Path of the CSV companion: foo.json -> foo.csv, anything else gets ".csv" appended.
std::string report_csv_path(const std::string& json_path);

}  // namespace volrough
