#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "volrough/cf_spanning.hpp"
#include "volrough/chain_synth.hpp"
#include "volrough/error.hpp"
#include "volrough/harness.hpp"
#include "volrough/hurst_est.hpp"
#include "volrough/version.hpp"

namespace {

using namespace volrough;
using json = nlohmann::ordered_json;

struct Common {
    std::string config;
    std::string out;
    std::string chains;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<int> steps;
};

StudyConfig resolve(const Common& c) {
    StudyConfig cfg = c.config.empty() ? parse_config("") : load_config(c.config);
    if (c.seed) {
        cfg.base_seed = *c.seed;
    }
    if (c.reps) {
        if (*c.reps < 1) {
            throw ValidationError("reps must be at least 1");
        }
        cfg.n_reps = *c.reps;
    }
    if (c.steps) {
        if (*c.steps < 16) {
            throw ValidationError("steps must be at least 16");
        }
        cfg.riccati_steps = *c.steps;
    }
    if (!c.out.empty()) {
        cfg.output = c.out;
    }
    if (!c.chains.empty()) {
        cfg.chains = c.chains;
    }
    return cfg;
}

RiccatiOptions riccati_options(const StudyConfig& cfg) {
    RiccatiOptions o;
    o.n_steps = cfg.riccati_steps;
    o.max_steps = std::max(o.max_steps, 4 * cfg.riccati_steps);
    return o;
}

void write_text(const std::string& path, const std::string& body) {
    if (path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << body)) {
        throw IoError("cannot write " + path);
    }
}

std::vector<OptionChain> input_chains(const StudyConfig& cfg, std::size_t at_least) {
    if (cfg.chains.empty()) {
        throw ValidationError("no chain file given (use --chains or the 'chains' key)");
    }
    auto chains = ingest_chain_csv(cfg.chains);
    std::sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) { return a.tenor < b.tenor; });
    if (chains.size() < at_least) {
        throw ValidationError("need at least " + std::to_string(at_least) + " tenors in " + cfg.chains);
    }
    return chains;
}

json estimate_to_json(const HurstEstimate& e) {
    json j;
    j["method"] = e.method == HurstMethod::plain ? "plain" : "jump-robust";
    j["value"] = std::isfinite(e.value) ? json(e.value) : json(nullptr);
    j["reliable"] = e.reliable();
    j["tenors"] = e.tenors;
    if (e.method == HurstMethod::plain) {
        j["u_grid"] = {e.u_grid.front(), e.u_grid.back(), e.u_grid.size()};
        j["intercept_t1"] = e.intercept_t1;
        j["intercept_t2"] = e.intercept_t2;
    } else {
        j["u"] = e.u_grid.front();
        j["f_ratio"] = std::isfinite(e.f_ratio) ? json(e.f_ratio) : json(nullptr);
        j["second_diff_124"] = e.second_diff_124;
        j["second_diff_134"] = e.second_diff_134;
        if (e.nearest_endpoint) {
            j["nearest_endpoint"] = *e.nearest_endpoint;
        }
    }
    j["flags"] = e.flags;
    j["warnings"] = e.warnings;
    return j;
}

int simulate_chain(const Common& c) {
    const auto cfg = resolve(c);
    const auto params = cfg.params(0);
    const auto provider = default_chain_provider(cfg);
    std::vector<OptionChain> chains;
    for (std::size_t t = 0; t < cfg.tenors.size(); ++t) {
        auto chain = provider(params, cfg.tenors[t]);
        if (cfg.noise > 0.0) {
            chain = add_noise(chain, NoiseModel{cfg.noise, cfg.base_seed, t});
        }
        chains.push_back(std::move(chain));
    }
    write_text(cfg.output, format_chain_csv(chains));
    return 0;
}

int estimate_cf_cmd(const Common& c) {
    const auto cfg = resolve(c);
    const auto chains = input_chains(cfg, 1);
    std::string out = "tenor_years,u,re_L,im_L,abs_L,A,M\n";
    char buf[256];
    for (const auto& chain : chains) {
        std::vector<double> grid = cfg.u_values;
        if (grid.empty()) {
            UGridOptions g;
            g.step = cfg.u_step;
            grid = adaptive_ugrid(chain, g).u_values;
        }
        const auto est = estimate_cf(chain, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto l = est.L_values[i];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", chain.tenor, grid[i],
                          l.real(), l.imag(), std::abs(l), est.arg_values[i], est.M_hat);
            out += buf;
        }
    }
    write_text(cfg.output, out);
    return 0;
}

int estimate_hurst_cmd(const Common& c) {
    const auto cfg = resolve(c);
    const auto chains = input_chains(cfg, 2);
    HurstOptions options;
    options.grid.step = cfg.u_step;
    const auto est = estimate_h(chains[0], chains[1], options);
    write_text(cfg.output, estimate_to_json(est).dump(2) + "\n");
    return 0;
}

int estimate_hurst_robust_cmd(const Common& c) {
    const auto cfg = resolve(c);
    const auto chains = input_chains(cfg, 4);
    UGridOptions g;
    g.step = cfg.u_step;
    const auto est = estimate_h_jump_robust({chains[0], chains[1], chains[2], chains[3]}, cfg.u, g);
    write_text(cfg.output, estimate_to_json(est).dump(2) + "\n");
    return 0;
}

int mc_study_cmd(const Common& c) {
    const auto cfg = resolve(c);
    const auto report = run_mc_study(cfg);
    emit_report(report, cfg, cfg.output);
    for (const auto& s : report.scenarios) {
        std::printf("V0=%-6g H=%-5g q25=%.4f q50=%.4f q75=%.4f used=%d failed=%d%s%s\n", s.v0, s.hurst, s.q25,
                    s.q50, s.q75, s.n_used, s.n_failed, s.error.empty() ? "" : " error: ", s.error.c_str());
    }
    return 0;
}

int verify_expansion_cmd(const Common& c) {
    const auto cfg = resolve(c);
    const double u = cfg.u.value_or(1.0);
    const auto rep = verify_expansion(cfg.params(0), u, cfg.expansion_tenors, riccati_options(cfg));
    json j;
    j["u"] = u;
    auto rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"T", r.tenor}, {"residual", r.residual}});
    }
    j["rows"] = rows;
    j["slope"] = std::isfinite(rep.slope) ? json(rep.slope) : json(nullptr);
    j["target_2H"] = 2.0 * cfg.params(0).hurst;
    write_text(cfg.output, j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rough-volatility characteristic functions, option spanning and Hurst estimation"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Common common;
    auto add = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", common.config, "key=value configuration file");
        sub->add_option("--out", common.out, "output path ('-' for stdout)");
        sub->add_option("--seed", common.seed, "base seed override");
        sub->add_option("--reps", common.reps, "replication count override");
        sub->add_option("--steps", common.steps, "Riccati base step count override");
        return sub;
    };
    auto* sim = add("simulate-chain", "price true chains for every tenor (noisy if noise > 0) to CSV");
    auto* ecf = add("estimate-cf", "spanning CF estimates per chain to CSV");
    ecf->add_option("--chains", common.chains, "input chain CSV");
    auto* eh = add("estimate-hurst", "plain Hurst estimate from the two shortest tenors");
    eh->add_option("--chains", common.chains, "input chain CSV");
    auto* ehr = add("estimate-hurst-robust", "jump-robust Hurst estimate from four tenors");
    ehr->add_option("--chains", common.chains, "input chain CSV");
    auto* mc = add("mc-study", "Monte Carlo quantile study; writes JSON and CSV reports");
    auto* ve = add("verify-expansion", "residuals of the expansion against the Riccati oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return simulate_chain(common);
        if (ecf->parsed()) return estimate_cf_cmd(common);
        if (eh->parsed()) return estimate_hurst_cmd(common);
        if (ehr->parsed()) return estimate_hurst_robust_cmd(common);
        if (mc->parsed()) return mc_study_cmd(common);
        if (ve->parsed()) return verify_expansion_cmd(common);
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
