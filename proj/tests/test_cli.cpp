#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "dqpt/errors.hpp"
#include "output.hpp"
#include "run_config.hpp"

using namespace dqpt;
using namespace dqpt::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("dqpt_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

struct Proc {
    int code;
    std::string err;
};

Proc run_cli(const std::string& args) {
    const fs::path err = fs::temp_directory_path() / "dqpt_cli_test_stderr.txt";
    const std::string cmd = std::string(DQPT_CLI_PATH) + " " + args + " > /dev/null 2> " + err.string();
    const int status = std::system(cmd.c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(2.0), "2");
    for (double v : {1.0 / 3.0, 2.3680645627487076, 1e-300, -7.25e17})
        EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Sha256, KnownDigest) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Table, CsvAndJson) {
    Table t{{"a", "b", "c"}, {}};
    t.add({1.5, 2LL, std::string("x")});
    EXPECT_EQ(t.to_csv(), "a,b,c\n1.5,2,x\n");
    EXPECT_EQ(t.to_json(), "[\n  {\"a\": 1.5, \"b\": 2, \"c\": \"x\"}\n]\n");
    EXPECT_THROW(t.add({1.0}), std::logic_error);
}

TEST(RunConfig, ParsesIniText) {
    RunConfig cfg;
    apply_config_text(cfg, "# comment\n[quench]\ng_f = 0.5, 1.2\nn_spins = 12 ; trailing\ngrid = abc\n"
                           "[echo]\naggregation = product\n[outputs]\nformat = json\n");
    ASSERT_TRUE(cfg.g_f);
    EXPECT_EQ(*cfg.g_f, (std::vector<double>{0.5, 1.2}));
    EXPECT_EQ(*cfg.n_spins, 12);
    EXPECT_EQ(*cfg.grid, GridMode::abc);
    EXPECT_EQ(cfg.aggregation, Aggregation::product);
    EXPECT_EQ(cfg.format, OutputFormat::json);
}

TEST(RunConfig, FieldLevelErrors) {
    RunConfig cfg;
    auto field_of = [&](const std::string& text) {
        try {
            RunConfig c;
            apply_config_text(c, text);
            validate(resolve(c));
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("none");
    };
    EXPECT_EQ(field_of("[quench]\nn_spins = 1\n"), "quench.n_spins");
    EXPECT_EQ(field_of("[quench]\ncolour = red\n"), "quench.colour");
    EXPECT_EQ(field_of("[quench]\ngrid = hex\n"), "quench.grid");
    EXPECT_EQ(field_of("[quench]\ng_f = 1.2, x\n"), "quench.g_f");
    EXPECT_EQ(field_of("[quench]\ng_i = 1\n"), "quench.g_i");
    EXPECT_EQ(field_of("[pulse]\nconstant = 0\n"), "pulse.constant");
    EXPECT_EQ(field_of("g_f = 1\n"), "config");
    EXPECT_EQ(field_of("[quench]\ng_f = 1.2\n"), "none");

    cfg.command = Command::otoc;
    cfg.n_phi = 4;
    cfg.m_max = 2;
    EXPECT_THROW(validate(resolve(cfg)), ConfigError);
    cfg.command = Command::oracle_compare;
    cfg.n_phi.reset();
    cfg.n_spins = 15;
    EXPECT_THROW(validate(resolve(cfg)), ConfigError);
    cfg.n_spins = 7;
    EXPECT_THROW(validate(resolve(cfg)), ConfigError);
}

TEST(Cli, InvalidSpinCountExitsTwoWithoutOutputs) {
    const fs::path out = scratch("invalid");
    const Proc p = run_cli("rate-function --n 1 --out " + out.string());
    EXPECT_EQ(p.code, 2);
    EXPECT_NE(p.err.find("quench.n_spins"), std::string::npos) << p.err;
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, UnknownFlagExitsTwo) {
    EXPECT_EQ(run_cli("rate-function --bogus 3").code, 2);
    EXPECT_EQ(run_cli("").code, 2);
}

TEST(Cli, RateFunctionOutputsAndDeterminism) {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    ASSERT_EQ(run_cli("rate-function --threads 1 --out " + a.string()).code, 0);
    ASSERT_EQ(run_cli("rate-function --threads 2 --out " + b.string()).code, 0);
    for (const char* f : {"rate_function.csv", "critical_times.json", "manifest.json"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    EXPECT_TRUE(fs::exists(a / "timing.json"));
    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    for (const auto& entry : manifest["outputs"])
        EXPECT_EQ(entry["sha256"], sha256_hex(slurp(a / entry["file"].get<std::string>())));
    EXPECT_EQ(manifest["config"]["quench"]["n_spins"], 30);
    const std::string csv = slurp(a / "rate_function.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "g_f,t,rate,floored_modes");
    // 3 default fields x 2000 samples plus the header.
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6001);
    for (const auto& entry : fs::directory_iterator(a))
        EXPECT_EQ(entry.path().filename().string().find(".tmp"), std::string::npos);
}

TEST(Cli, FlatSeriesWithoutQuench) {
    const fs::path out = scratch("flat");
    ASSERT_EQ(run_cli("rate-function --gi 0 --gf 0 --steps 50 --out " + out.string()).code, 0);
    std::ifstream in(out / "rate_function.csv");
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(line.substr(line.find(',', line.find(',') + 1) + 1), "0,0") << line;
    }
    EXPECT_EQ(rows, 50);
}

TEST(Cli, JsonFormat) {
    const fs::path out = scratch("json");
    ASSERT_EQ(run_cli("heatmap --format json --n 6 --steps 5 --out " + out.string()).code, 0);
    const auto rows = nlohmann::json::parse(slurp(out / "return_prob.json"));
    EXPECT_EQ(rows.size(), 2u * 7u * 5u);
    EXPECT_EQ(rows[0]["probability"], 1.0);
}

TEST(Cli, OracleCompareMatchedAndNegativeControls) {
    const fs::path out = scratch("oracle");
    EXPECT_EQ(run_cli("oracle-compare --n 8 --gf 1.2 --out " + out.string()).code, 0);
    EXPECT_EQ(run_cli("oracle-compare --n 8 --gf 0.8 --out " + out.string()).code, 0);
    ASSERT_TRUE(fs::exists(out / "compare.csv"));
    const Proc paper = run_cli("oracle-compare --n 8 --gf 1.2 --grid paper --out " + out.string());
    EXPECT_EQ(paper.code, 1);
    EXPECT_EQ(run_cli("oracle-compare --n 6 --gf 1.2 --oracle-mode literal --out " + out.string()).code, 1);
    EXPECT_EQ(run_cli("oracle-compare --n 7 --out " + out.string()).code, 2);
}

TEST(Cli, OtocDoubleWell) {
    const fs::path out = scratch("otoc");
    ASSERT_EQ(run_cli("otoc --n 30 --steps 11 --out " + out.string()).code, 0);
    const auto wells = nlohmann::json::parse(slurp(out / "doublewell.json"));
    ASSERT_EQ(wells["series"].size(), 2u);
    EXPECT_EQ(wells["series"][0]["g_f"], 1.2);
    EXPECT_EQ(wells["series"][0]["classification"], "double_well");
    EXPECT_EQ(wells["series"][1]["classification"], "single_well");
    EXPECT_EQ(wells["detector"]["threshold"], 1e-3);
    EXPECT_TRUE(fs::exists(out / "otoc_surface.csv"));
    EXPECT_TRUE(fs::exists(out / "spectra.csv"));

    const fs::path only = scratch("spectra");
    ASSERT_EQ(run_cli("spectra --steps 5 --out " + only.string()).code, 0);
    EXPECT_TRUE(fs::exists(only / "spectra.csv"));
    EXPECT_FALSE(fs::exists(only / "otoc_surface.csv"));
    EXPECT_EQ(run_cli("otoc --nphi 4 --mmax 2 --out " + only.string()).code, 2);
}

TEST(Cli, PulseSchedule) {
    const fs::path out = scratch("pulse");
    ASSERT_EQ(run_cli("pulse-schedule --gf 1 --n 10 --out " + out.string()).code, 0);
    const auto check = nlohmann::json::parse(slurp(out / "replay_check.json"));
    EXPECT_LT(check["max_deviation"].get<double>(), 1e-12);
    EXPECT_EQ(check["idle_modes"], 2);  // k = 0 and k = 2 pi
    EXPECT_EQ(check["pulses"], 9 * 100);
    EXPECT_EQ(run_cli("pulse-schedule --nt 1 --out " + out.string()).code, 2);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const fs::path dir = scratch("configfile");
    fs::create_directories(dir);
    std::ofstream(dir / "run.ini") << "[quench]\ng_f = 1.5\nn_spins = 10\n[time]\nsteps = 20\n";
    ASSERT_EQ(run_cli("rate-function --config " + (dir / "run.ini").string() + " --n 12 --out " +
                      (dir / "out").string())
                  .code,
              0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
    EXPECT_EQ(manifest["config"]["quench"]["n_spins"], 12);
    EXPECT_EQ(manifest["config"]["quench"]["g_f"][0], 1.5);
    EXPECT_EQ(manifest["config"]["time"]["steps"], 20);
}
