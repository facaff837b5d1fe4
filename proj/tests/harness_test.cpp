#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "volrough/error.hpp"
#include "volrough/harness.hpp"

using namespace volrough;
using testing_support::bs_chain;
using testing_support::desk_params;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "volrough_harness_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

// Desk chains priced once; the fake provider ignores its parameters.
struct Desk {
    Desk() {
        const auto p = desk_params(0.03, 0.25);
        short_chain = generate_chain(p, 3.0 / 252.0);
        long_chain = generate_chain(p, 6.0 / 252.0);
    }
    OptionChain short_chain;
    OptionChain long_chain;
};

const Desk& desk() {
    static const auto d = std::make_unique<Desk>();
    return *d;
}

StudyConfig small_study() {
    StudyConfig c;
    c.scenarios = {{0.03, 0.25}, {0.03, 0.1}};
    c.n_reps = 12;
    c.base_seed = 77;
    return c;
}

ChainProvider counting_provider(std::atomic<int>& calls) {
    return [&calls](const RoughHestonParams&, double tenor) {
        ++calls;
        return tenor < 5.0 / 252.0 ? desk().short_chain : desk().long_chain;
    };
}

class ThreadsEnv {
public:
    explicit ThreadsEnv(const char* value) { setenv("VOLROUGH_THREADS", value, 1); }
    ~ThreadsEnv() { unsetenv("VOLROUGH_THREADS"); }
};

}  // namespace

TEST(Config, ParsesEveryKey) {
    const auto c = parse_config(
        "# study\n"
        "scenarios = 0.03:0.25, 0.06:1/10\n"
        "nu=0.4\nrho=-0.5\nspot=100\n"
        "tenors = 3/252, 6/252\n"
        "reps=20\nnoise=0.01\nseed=9\nu_step=0.02\nstrike_step=1\ncutoff=0.01\n"
        "out=r.json\nsteps=256\nu=2\nu_values=1,2,3\nexpansion_tenors=0.01,0.001\nchains=c.csv\n\n");
    ASSERT_EQ(c.scenarios.size(), 2u);
    EXPECT_DOUBLE_EQ(c.scenarios[1].second, 0.1);
    EXPECT_DOUBLE_EQ(c.tenors[0], 3.0 / 252.0);
    EXPECT_EQ(c.n_reps, 20);
    EXPECT_EQ(c.base_seed, 9u);
    EXPECT_EQ(c.output, "r.json");
    EXPECT_EQ(c.riccati_steps, 256);
    EXPECT_EQ(c.u, 2.0);
    EXPECT_EQ(c.u_values.size(), 3u);
    EXPECT_EQ(c.chains, "c.csv");
    const auto p = c.params(0);
    EXPECT_NEAR(p.x0, std::log(100.0), 1e-15);
    EXPECT_EQ(p.nu, 0.4);
    EXPECT_THROW(c.params(2), ValidationError);
}

TEST(Config, Defaults) {
    const auto c = parse_config("");
    EXPECT_EQ(c.n_reps, 500);
    EXPECT_EQ(c.noise, 0.025);
    EXPECT_EQ(c.u_step, 0.01);
    EXPECT_EQ(c.strike_step, 5.0);
    EXPECT_EQ(c.cutoff, 0.075);
    EXPECT_EQ(c.spot, 3000.0);
}

TEST(Config, Errors) {
    EXPECT_EQ(message_of([] { parse_config("foo=1\n"); }), "config line 1: unknown key 'foo'");
    EXPECT_EQ(message_of([] { parse_config("\nreps\n"); }), "config line 2: expected key=value");
    EXPECT_EQ(message_of([] { parse_config("nu=abc\n"); }), "config line 1: bad number 'abc'");
    EXPECT_THROW(parse_config("reps=0\n"), ValidationError);
    EXPECT_THROW(parse_config("reps=2.5\n"), ValidationError);
    EXPECT_THROW(parse_config("tenors=0.1,0.05\n"), ValidationError);
    EXPECT_THROW(parse_config("scenarios=0.03\n"), ValidationError);
    EXPECT_THROW(parse_config("scenarios=0.03:0.7\n"), ValidationError);
    EXPECT_THROW(parse_config("nu=1/0\n"), ValidationError);
    EXPECT_THROW(load_config(scratch("does_not_exist.cfg").string()), IoError);
}

TEST(ChainCsv, RoundTripIsExact) {
    const std::vector<OptionChain> chains = {desk().short_chain, desk().long_chain};
    const auto path = scratch("round.csv");
    write_chain_csv(path.string(), chains);
    const auto back = ingest_chain_csv(path.string());
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t c = 0; c < 2; ++c) {
        EXPECT_EQ(back[c].tenor, chains[c].tenor);
        ASSERT_EQ(back[c].size(), chains[c].size());
        for (std::size_t j = 0; j < chains[c].size(); ++j) {
            EXPECT_EQ(back[c].quotes[j].log_strike, chains[c].quotes[j].log_strike);
            EXPECT_EQ(back[c].quotes[j].price, chains[c].quotes[j].price);
            EXPECT_EQ(back[c].quotes[j].is_put, chains[c].quotes[j].is_put);
        }
    }
    EXPECT_EQ(format_chain_csv(back), format_chain_csv(chains));
}

TEST(ChainCsv, Errors) {
    const std::string head = "tenor_years,spot,log_strike,price,is_put\n";
    const double k0 = std::log(100.0);
    auto row = [](double k, double price, int put) {
        std::ostringstream s;
        s.precision(17);
        s << "0.1,100," << k << "," << price << "," << put << "\n";
        return s.str();
    };
    EXPECT_EQ(message_of([&] { parse_chain_csv(head + row(k0 - 0.1, 1, 1) + row(k0 - 0.1, 1, 1)); }),
              "duplicate strike at line 3");
    EXPECT_EQ(message_of([&] { parse_chain_csv(head + row(k0 + 0.1, 1, 1)); }), "OTM convention violated at line 2");
    EXPECT_EQ(message_of([&] { parse_chain_csv(head + row(k0 - 0.1, -1, 1)); }), "negative price at line 2");
    EXPECT_EQ(message_of([&] { parse_chain_csv(head + row(k0, 1, 1) + row(k0 - 0.1, 1, 1)); }),
              "non-monotone strikes at line 3");
    EXPECT_NE(message_of([] { parse_chain_csv("a,b\n"); }).find("schema violation at line 1"), std::string::npos);
    EXPECT_NE(message_of([&] { parse_chain_csv(head + "0.1,100,4.6\n"); }).find("schema violation at line 2"),
              std::string::npos);
    EXPECT_THROW(parse_chain_csv(head + "0.1,100,4.6,1,2\n"), ValidationError);
    EXPECT_THROW(ingest_chain_csv(scratch("missing.csv").string()), IoError);
}

TEST(Report, CsvPath) {
    EXPECT_EQ(report_csv_path("out/report.json"), "out/report.csv");
    EXPECT_EQ(report_csv_path("report"), "report.csv");
    EXPECT_EQ(report_csv_path(".json"), ".json.csv");
}

TEST(Report, ShapeAndNulls) {
    StudyConfig c;
    c.scenarios = {{0.015, 0.1}, {0.03, 0.1}, {0.015, 0.25}, {0.03, 0.25}};
    QuantileReport r;
    for (const auto& [v0, h] : c.scenarios) {
        r.scenarios.push_back({v0, h, 0.1, 0.2, 0.3, 500, 0, ""});
    }
    r.scenarios[1].q25 = r.scenarios[1].q50 = r.scenarios[1].q75 = std::nan("");
    r.scenarios[1].error = "boom";
    const auto csv = report_csv(r);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
    const auto doc = nlohmann::json::parse(report_json(r, c));
    ASSERT_EQ(doc["scenarios"].size(), 4u);
    EXPECT_TRUE(doc["scenarios"][1]["q50"].is_null());
    EXPECT_EQ(doc["scenarios"][1]["error"], "boom");
    EXPECT_EQ(doc["scenarios"][3]["q50"], 0.2);
    EXPECT_EQ(doc["config"]["reps"], 500);
    EXPECT_TRUE(doc.contains("version"));
    EXPECT_EQ(doc["seed"], 1);
}

TEST(Report, EmptyScenarios) {
    const auto doc = nlohmann::json::parse(report_json(QuantileReport{}, StudyConfig{}));
    EXPECT_TRUE(doc["scenarios"].is_array());
    EXPECT_EQ(doc["scenarios"].size(), 0u);
    EXPECT_EQ(report_csv(QuantileReport{}), "scenario,V0,H,quantile,value\n");
}

TEST(Report, EmitIsByteIdentical) {
    StudyConfig c = small_study();
    QuantileReport r;
    r.scenarios.push_back({0.03, 0.25, 0.21, 0.25, 0.29, 12, 0, ""});
    r.scenarios.push_back({0.03, 0.1, 0.08, 0.1, 0.12, 11, 1, ""});
    const auto a = scratch("a.json");
    const auto b = scratch("b.json");
    emit_report(r, c, a.string());
    emit_report(r, c, b.string());
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(scratch("a.csv")), slurp(scratch("b.csv")));
    EXPECT_EQ(slurp(a), report_json(r, c));
    EXPECT_THROW(emit_report(r, c, (scratch("no_dir") / "x" / "r.json").string()), IoError);
}

TEST(McStudy, PricesEachTenorOncePerScenario) {
    std::atomic<int> calls{0};
    const auto c = small_study();
    const auto r = run_mc_study(c, counting_provider(calls));
    EXPECT_EQ(calls.load(), 4);
    ASSERT_EQ(r.scenarios.size(), 2u);
    for (const auto& s : r.scenarios) {
        EXPECT_EQ(s.n_used + s.n_failed, c.n_reps);
        EXPECT_GT(s.n_used, 0);
        EXPECT_LE(s.q25, s.q50);
        EXPECT_LE(s.q50, s.q75);
        EXPECT_TRUE(s.error.empty());
    }
}

TEST(McStudy, DeterministicAcrossThreadCounts) {
    std::atomic<int> calls{0};
    const auto c = small_study();
    QuantileReport one;
    QuantileReport three;
    {
        ThreadsEnv env("1");
        one = run_mc_study(c, counting_provider(calls));
    }
    {
        ThreadsEnv env("3");
        three = run_mc_study(c, counting_provider(calls));
    }
    EXPECT_EQ(report_json(one, c), report_json(three, c));
    EXPECT_EQ(report_json(run_mc_study(c, counting_provider(calls)), c), report_json(one, c));
    auto other = c;
    other.base_seed = 78;
    EXPECT_NE(report_json(run_mc_study(other, counting_provider(calls)), other), report_json(one, other));
}

TEST(McStudy, PricingFailureMarksOnlyItsScenario) {
    auto c = small_study();
    ChainProvider provider = [](const RoughHestonParams& p, double tenor) {
        if (p.hurst < 0.2) {
            throw NumericalError("pricing failed");
        }
        return tenor < 5.0 / 252.0 ? desk().short_chain : desk().long_chain;
    };
    const auto r = run_mc_study(c, provider);
    EXPECT_EQ(r.scenarios[1].error, "pricing failed");
    EXPECT_EQ(r.scenarios[1].n_failed, c.n_reps);
    EXPECT_EQ(r.scenarios[1].n_used, 0);
    EXPECT_TRUE(std::isnan(r.scenarios[1].q50));
    EXPECT_TRUE(r.scenarios[0].error.empty());
    EXPECT_GT(r.scenarios[0].n_used, 0);
}

TEST(McStudy, FlaggedEstimatesAreCountedNotUsed) {
    auto c = small_study();
    c.scenarios = {{0.04, 0.25}};
    ChainProvider bs = [](const RoughHestonParams& p, double tenor) { return bs_chain(0.2, tenor, p.x0, 1e-3, 8.0); };
    const auto r = run_mc_study(c, bs);
    EXPECT_EQ(r.scenarios[0].n_used + r.scenarios[0].n_failed, c.n_reps);
    EXPECT_GT(r.scenarios[0].n_failed, 0);
    auto one_tenor = c;
    one_tenor.tenors = {0.1};
    EXPECT_THROW(run_mc_study(one_tenor, bs), ValidationError);
}

TEST(VerifyExpansion, BlackScholesLimitIsExact) {
    auto p = desk_params(0.04, 0.25);
    p.nu = 0.0;
    const auto rep = verify_expansion(p, 1.0, {1e-2, 1e-3});
    ASSERT_EQ(rep.rows.size(), 2u);
    for (const auto& row : rep.rows) {
        EXPECT_LT(row.residual, 1e-9);
    }
}

TEST(VerifyExpansion, RoughSlope) {
    const auto rep = verify_expansion(desk_params(0.03, 0.25), 1.0, {1e-2, 1e-3, 1e-4});
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_GE(rep.slope, 0.4);
    for (const auto& row : rep.rows) {
        EXPECT_NEAR(row.residual, std::abs(row.riccati - row.expansion), 0.0);
    }
}
