#include "volrough/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "volrough/error.hpp"
#include "volrough/expansion.hpp"
#include "volrough/numerics.hpp"
#include "volrough/parallel.hpp"
#include "volrough/version.hpp"

namespace volrough {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

bool parse_plain(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

double parse_number(const std::string& raw, int line) {
    const std::string s = trim(raw);
    double value = 0.0;
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (parse_plain(s, value) && std::isfinite(value)) {
            return value;
        }
    } else {
        double num = 0.0;
        double den = 0.0;
        if (parse_plain(trim(s.substr(0, slash)), num) && parse_plain(trim(s.substr(slash + 1)), den) && den != 0.0) {
            return num / den;
        }
    }
    throw ValidationError("config line " + std::to_string(line) + ": bad number '" + s + "'");
}

std::vector<double> parse_list(const std::string& s, int line) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) {
        out.push_back(parse_number(item, line));
    }
    return out;
}

int parse_count(const std::string& s, int line) {
    const double v = parse_number(s, line);
    if (v != std::floor(v) || v < 0 || v > std::numeric_limits<int>::max()) {
        throw ValidationError("config line " + std::to_string(line) + ": expected a nonnegative integer");
    }
    return static_cast<int>(v);
}

std::uint64_t parse_seed(const std::string& s, int line) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("config line " + std::to_string(line) + ": bad seed '" + s + "'");
    }
    return v;
}

void check_config(const StudyConfig& c) {
    if (c.n_reps < 1) {
        throw ValidationError("reps must be at least 1");
    }
    if (c.tenors.empty()) {
        throw ValidationError("tenors must not be empty");
    }
    for (std::size_t i = 0; i < c.tenors.size(); ++i) {
        if (!(c.tenors[i] > 0.0) || (i > 0 && !(c.tenors[i] > c.tenors[i - 1]))) {
            throw ValidationError("tenors must be positive and strictly increasing");
        }
    }
    if (!(c.noise >= 0.0)) {
        throw ValidationError("noise must be nonnegative");
    }
    if (!(c.u_step > 0.0) || !(c.strike_step > 0.0) || !(c.cutoff >= 0.0) || !(c.spot > 0.0)) {
        throw ValidationError("u_step, strike_step and spot must be positive, cutoff nonnegative");
    }
    if (c.riccati_steps < 16) {
        throw ValidationError("steps must be at least 16");
    }
    for (std::size_t i = 0; i < c.scenarios.size(); ++i) {
        validate(c.params(i));
    }
}

}  // namespace

RoughHestonParams StudyConfig::params(std::size_t scenario) const {
    if (scenario >= scenarios.size()) {
        throw ValidationError("config has no scenario " + std::to_string(scenario));
    }
    return RoughHestonParams{std::log(spot), scenarios[scenario].first, nu, rho, scenarios[scenario].second};
}

StudyConfig parse_config(const std::string& text) {
    StudyConfig c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) {
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(line) + ": expected key=value");
        }
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key == "scenarios") {
            c.scenarios.clear();
            for (const auto& item : split(value, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) {
                    throw ValidationError("config line " + std::to_string(line) + ": scenario must be V0:H");
                }
                c.scenarios.emplace_back(parse_number(item.substr(0, colon), line),
                                         parse_number(item.substr(colon + 1), line));
            }
        } else if (key == "nu") {
            c.nu = parse_number(value, line);
        } else if (key == "rho") {
            c.rho = parse_number(value, line);
        } else if (key == "spot") {
            c.spot = parse_number(value, line);
        } else if (key == "tenors") {
            c.tenors = parse_list(value, line);
        } else if (key == "reps") {
            c.n_reps = parse_count(value, line);
        } else if (key == "noise") {
            c.noise = parse_number(value, line);
        } else if (key == "seed") {
            c.base_seed = parse_seed(value, line);
        } else if (key == "u_step") {
            c.u_step = parse_number(value, line);
        } else if (key == "strike_step") {
            c.strike_step = parse_number(value, line);
        } else if (key == "cutoff") {
            c.cutoff = parse_number(value, line);
        } else if (key == "out") {
            c.output = value;
        } else if (key == "steps") {
            c.riccati_steps = parse_count(value, line);
        } else if (key == "u") {
            c.u = parse_number(value, line);
        } else if (key == "u_values") {
            c.u_values = parse_list(value, line);
        } else if (key == "expansion_tenors") {
            c.expansion_tenors = parse_list(value, line);
        } else if (key == "chains") {
            c.chains = value;
        } else {
            throw ValidationError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    check_config(c);
    return c;
}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ChainProvider default_chain_provider(const StudyConfig& config) {
    PricerOptions options;
    options.riccati.n_steps = config.riccati_steps;
    options.riccati.max_steps = std::max(options.riccati.max_steps, 4 * config.riccati_steps);
    const double step = config.strike_step;
    const double cutoff = config.cutoff;
    return [options, step, cutoff](const RoughHestonParams& params, double tenor) {
        return generate_chain(params, tenor, step, cutoff, options);
    };
}

QuantileReport run_mc_study(const StudyConfig& config, const ChainProvider& provider) {
    check_config(config);
    if (config.tenors.size() < 2) {
        throw ValidationError("the study needs two tenors");
    }
    const ChainProvider chains_for = provider ? provider : default_chain_provider(config);
    HurstOptions options;
    options.grid.step = config.u_step;

    QuantileReport report;
    for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
        ScenarioQuantiles row;
        row.v0 = config.scenarios[s].first;
        row.hurst = config.scenarios[s].second;
        std::vector<OptionChain> truth;
        try {
            const auto params = config.params(s);
            for (std::size_t t = 0; t < 2; ++t) {
                truth.push_back(chains_for(params, config.tenors[t]));
            }
        } catch (const std::exception& e) {
            row.q25 = row.q50 = row.q75 = kNaN;
            row.n_failed = config.n_reps;
            row.error = e.what();
            report.scenarios.push_back(row);
            continue;
        }

        std::vector<double> values(config.n_reps, kNaN);
        parallel_for(static_cast<std::size_t>(config.n_reps), [&](std::size_t r) {
            const std::uint64_t seed = config.base_seed + r;
            try {
                const auto c1 = add_noise(truth[0], NoiseModel{config.noise, seed, 0});
                const auto c2 = add_noise(truth[1], NoiseModel{config.noise, seed, 1});
                const auto est = estimate_h(c1, c2, options);
                if (est.reliable()) {
                    values[r] = est.value;
                }
            } catch (const ValidationError&) {
                throw;
            } catch (const std::exception&) {
            }
        });

        std::vector<double> used;
        for (double v : values) {
            if (std::isfinite(v)) {
                used.push_back(v);
            }
        }
        std::sort(used.begin(), used.end());
        row.n_used = static_cast<int>(used.size());
        row.n_failed = config.n_reps - row.n_used;
        if (used.empty()) {
            row.q25 = row.q50 = row.q75 = kNaN;
        } else {
            row.q25 = numerics::nearest_rank(used, 0.25);
            row.q50 = numerics::nearest_rank(used, 0.50);
            row.q75 = numerics::nearest_rank(used, 0.75);
        }
        report.scenarios.push_back(row);
    }
    return report;
}

ExpansionReport verify_expansion(const RoughHestonParams& params, double u, const std::vector<double>& tenors,
                                 const RiccatiOptions& options) {
    ExpansionReport rep;
    std::vector<double> lx;
    std::vector<double> ly;
    bool zero = false;
    for (double t : tenors) {
        ExpansionRow row;
        row.tenor = t;
        row.riccati = cf(u / std::sqrt(t), params, t, options);
        row.expansion = expansion_cf_rough(params, u, t).total;
        row.residual = std::abs(row.riccati - row.expansion);
        zero = zero || !(row.residual > 0.0);
        lx.push_back(std::log(t));
        ly.push_back(std::log(row.residual));
        rep.rows.push_back(row);
    }
    rep.slope = (zero || tenors.size() < 2) ? kNaN : numerics::ols_slope(lx, ly);
    return rep;
}

std::vector<OptionChain> parse_chain_csv(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    if (!std::getline(in, raw) || trim(raw) != "tenor_years,spot,log_strike,price,is_put") {
        throw ValidationError("schema violation at line 1: expected header tenor_years,spot,log_strike,price,is_put");
    }
    ++line;
    struct Group {
        double tenor;
        double spot;
        std::vector<OptionQuote> quotes;
    };
    std::vector<Group> groups;
    while (std::getline(in, raw)) {
        ++line;
        if (trim(raw).empty()) {
            continue;
        }
        const auto fields = split(raw, ',');
        const std::string where = " at line " + std::to_string(line);
        if (fields.size() != 5) {
            throw ValidationError("schema violation" + where + ": expected 5 fields");
        }
        double tenor = 0.0;
        double spot = 0.0;
        double k = 0.0;
        double price = 0.0;
        if (!parse_plain(fields[0], tenor) || !parse_plain(fields[1], spot) || !parse_plain(fields[2], k) ||
            !parse_plain(fields[3], price) || (fields[4] != "0" && fields[4] != "1")) {
            throw ValidationError("schema violation" + where);
        }
        if (!(tenor > 0.0) || !(spot > 0.0) || !std::isfinite(k)) {
            throw ValidationError("schema violation" + where + ": tenor and spot must be positive");
        }
        if (!(price >= 0.0) || !std::isfinite(price)) {
            throw ValidationError("negative price" + where);
        }
        const bool is_put = fields[4] == "1";
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.tenor == tenor; });
        if (it == groups.end()) {
            groups.push_back(Group{tenor, spot, {}});
            it = std::prev(groups.end());
        } else if (it->spot != spot) {
            throw ValidationError("inconsistent spot within tenor" + where);
        }
        if (!it->quotes.empty()) {
            const double prev = it->quotes.back().log_strike;
            if (k == prev) {
                throw ValidationError("duplicate strike" + where);
            }
            if (k < prev) {
                throw ValidationError("non-monotone strikes" + where);
            }
        }
        if (is_put != (k <= std::log(spot))) {
            throw ValidationError("OTM convention violated" + where);
        }
        it->quotes.push_back(OptionQuote{k, price, is_put});
    }
    std::vector<OptionChain> out;
    for (auto& g : groups) {
        out.push_back(make_chain(g.tenor, std::log(g.spot), std::move(g.quotes)));
    }
    return out;
}

std::vector<OptionChain> ingest_chain_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read chain file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_chain_csv(buf.str());
}

std::string format_chain_csv(const std::vector<OptionChain>& chains) {
    std::string out = "tenor_years,spot,log_strike,price,is_put\n";
    char buf[160];
    for (const auto& c : chains) {
        const double spot = c.spot();
        for (const auto& q : c.quotes) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", c.tenor, spot, q.log_strike, q.price,
                          q.is_put ? 1 : 0);
            out += buf;
        }
    }
    return out;
}

void write_chain_csv(const std::string& path, const std::vector<OptionChain>& chains) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write chain file " + path);
    }
    out << format_chain_csv(chains);
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string report_json(const QuantileReport& report, const StudyConfig& config) {
    nlohmann::ordered_json cfg;
    auto scen = nlohmann::ordered_json::array();
    for (const auto& [v0, h] : config.scenarios) {
        scen.push_back({{"V0", v0}, {"H", h}});
    }
    cfg["scenarios"] = scen;
    cfg["nu"] = config.nu;
    cfg["rho"] = config.rho;
    cfg["spot"] = config.spot;
    cfg["tenors"] = config.tenors;
    cfg["reps"] = config.n_reps;
    cfg["noise"] = config.noise;
    cfg["u_step"] = config.u_step;
    cfg["strike_step"] = config.strike_step;
    cfg["cutoff"] = config.cutoff;
    cfg["steps"] = config.riccati_steps;

    nlohmann::ordered_json doc;
    doc["config"] = cfg;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& s : report.scenarios) {
        nlohmann::ordered_json row;
        row["V0"] = s.v0;
        row["H"] = s.hurst;
        row["q25"] = number_or_null(s.q25);
        row["q50"] = number_or_null(s.q50);
        row["q75"] = number_or_null(s.q75);
        row["n_used"] = s.n_used;
        row["n_failed"] = s.n_failed;
        if (!s.error.empty()) {
            row["error"] = s.error;
        }
        rows.push_back(row);
    }
    doc["scenarios"] = rows;
    doc["seed"] = config.base_seed;
    doc["version"] = kVersion;
    return doc.dump(2) + "\n";
}

std::string report_csv(const QuantileReport& report) {
    std::string out = "scenario,V0,H,quantile,value\n";
    char buf[160];
    for (std::size_t i = 0; i < report.scenarios.size(); ++i) {
        const auto& s = report.scenarios[i];
        const std::pair<const char*, double> qs[] = {{"q25", s.q25}, {"q50", s.q50}, {"q75", s.q75}};
        for (const auto& [name, v] : qs) {
            if (std::isfinite(v)) {
                std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%s,%.17g\n", i, s.v0, s.hurst, name, v);
            } else {
                std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%s,\n", i, s.v0, s.hurst, name);
            }
            out += buf;
        }
    }
    return out;
}

std::string report_csv_path(const std::string& json_path) {
    const std::string ext = ".json";
    if (json_path.size() > ext.size() && json_path.compare(json_path.size() - ext.size(), ext.size(), ext) == 0) {
        return json_path.substr(0, json_path.size() - ext.size()) + ".csv";
    }
    return json_path + ".csv";
}

void emit_report(const QuantileReport& report, const StudyConfig& config, const std::string& path) {
    auto write = [](const std::string& p, const std::string& body) {
        std::ofstream out(p, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + p);
        }
        out << body;
        if (!out) {
            throw IoError("write failed for " + p);
        }
    };
    write(path, report_json(report, config));
    write(report_csv_path(path), report_csv(report));
}

}  // namespace volrough
