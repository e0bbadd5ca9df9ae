#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hheat/cli.hpp"
#include "hheat/config.hpp"

using namespace hheat;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("hheat_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const Json& j) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << j.dump(2);
        return p.string();
    }

    std::string read(const std::string& name) {
        std::ifstream in(dir_ / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static Json p0(int n = 5) {
        return Json{{"spec",
                     {{"dims", {n}},
                      {"omega", 10.0},
                      {"coupling", 0.1},
                      {"bath_hot", {{"rate", 0.1}, {"occupation", 2.0}}},
                      {"bath_cold", {{"rate", 0.1}, {"occupation", 1.0}}}}}};
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SteadyJsonReport) {
    const auto r = run({"steady", "--config", write("c.json", p0()), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json doc = Json::parse(r.out);
    EXPECT_EQ(doc["kind"], "steady");
    EXPECT_NEAR(doc["observables"]["J_hot"].get<double>(), 0.4, 1e-12);
    EXPECT_LE(doc["steady_state"]["residual"].get<double>(), 1e-10);
    EXPECT_NEAR(doc["closed_form"]["J_lattice"].get<double>(), 0.4, 1e-12);
}

TEST_F(CliTest, SteadyCsvWritesSiblingTables) {
    const std::string out = (dir_ / "run.csv").string();
    const auto r = run({"steady", "--config", write("c.json", p0()), "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read("run.csv").rfind("i,j,re,im\n", 0), 0u);
    EXPECT_EQ(read("run.profile.csv").rfind("site,occupation,temperature\n", 0), 0u);
    std::istringstream scalars(read("run.scalars.csv"));
    std::map<std::string, double> values;
    std::string line;
    std::getline(scalars, line);
    EXPECT_EQ(line, "name,value");
    while (std::getline(scalars, line)) {
        const auto comma = line.find(',');
        values[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    }
    EXPECT_NEAR(values.at("J_hot"), 0.4, 1e-12);
    EXPECT_NEAR(values.at("J_cold"), -0.4, 1e-12);
    EXPECT_NEAR(values.at("J_closed"), 0.4, 1e-12);
    EXPECT_LE(values.at("residual"), 1e-10);
}

TEST_F(CliTest, EquilibriumHasZeroCurrents) {
    Json c = p0();
    c["spec"]["bath_cold"]["occupation"] = 2.0;
    c["spec"]["dephasing"] = 0.1;
    const auto r = run({"steady", "--config", write("c.json", c), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json obs = Json::parse(r.out)["observables"];
    EXPECT_NEAR(obs["J_hot"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(obs["J_cold"].get<double>(), 0.0, 1e-12);
    for (const auto& b : obs["J_bond"]) EXPECT_NEAR(b["J"].get<double>(), 0.0, 1e-12);
}

TEST_F(CliTest, ByteStable) {
    const std::string cfg = write("c.json", p0(6));
    for (const char* fmt : {"csv", "json"}) {
        const auto a = run({"steady", "--config", cfg, "--format", fmt});
        const auto b = run({"steady", "--config", cfg, "--format", fmt});
        ASSERT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out) << fmt;
    }
}

TEST_F(CliTest, JsonOutputRoundTripsAsInput) {
    Json c = p0(6);
    c["spec"]["dephasing"] = 0.05;
    const auto first = run({"steady", "--config", write("c.json", c), "--format", "json"});
    ASSERT_EQ(first.code, 0);
    const std::string again_cfg = (dir_ / "first.json").string();
    std::ofstream(again_cfg) << first.out;
    const auto second = run({"steady", "--config", again_cfg, "--format", "json"});
    ASSERT_EQ(second.code, 0) << second.err;
    EXPECT_EQ(first.out, second.out);

    const auto sweep = run({"sweep", "--config", write("s.json", c), "--axis", "length", "--values", "[5,10]",
                            "--format", "json"});
    ASSERT_EQ(sweep.code, 0) << sweep.err;
    std::ofstream(dir_ / "sweep.json") << sweep.out;
    const auto sweep2 = run({"sweep", "--config", (dir_ / "sweep.json").string(), "--axis", "length", "--values",
                             "[5,10]", "--format", "json"});
    EXPECT_EQ(sweep.out, sweep2.out);
}

TEST_F(CliTest, ZeroRateIsRejected) {
    Json c = p0();
    c["spec"]["bath_hot"]["rate"] = 0.0;
    const auto r = run({"steady", "--config", write("c.json", c)});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bath rate must be positive"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, ZeroCouplingIsSolverFailure) {
    Json c = p0();
    c["spec"]["coupling"] = 0.0;
    const auto r = run({"steady", "--config", write("c.json", c)});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("non-unique steady state"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, BadInputs) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"steady"}).code, 2);
    EXPECT_EQ(run({"steady", "--config", "/nonexistent.json"}).code, 2);
    Json c = p0();
    c["surprise"] = true;
    const auto r = run({"steady", "--config", write("c.json", c)});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("surprise"), std::string::npos);
    const std::string cfg = write("ok.json", p0());
    EXPECT_EQ(run({"sweep", "--config", cfg, "--axis", "length", "--values", "[2]"}).code, 2);
    EXPECT_EQ(run({"sweep", "--config", cfg, "--axis", "length", "--values", "five"}).code, 2);
    EXPECT_EQ(run({"sweep", "--config", cfg, "--axis", "colour", "--values", "[5]"}).code, 2);
    EXPECT_EQ(run({"sweep", "--config", cfg, "--axis", "length", "--values", "[5,10]", "--fit", "x"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, SweepLengthCsv) {
    const auto r = run({"sweep", "--config", write("c.json", p0()), "--axis", "length", "--values", "[5,10,20,50]",
                        "--fit", "5:50"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# sweep");
    std::getline(in, line);
    EXPECT_EQ(line, "parameter,J_closed,J_numeric,residual");
    for (int i = 0; i < 4; ++i) {
        std::getline(in, line);
        const auto comma = line.find(',');
        EXPECT_NEAR(std::stod(line.substr(comma + 1)), 0.4, 1e-12) << line;
    }
    EXPECT_NE(r.out.find("# fit"), std::string::npos);
}

TEST_F(CliTest, SweepDephasingAndDimension) {
    const auto d = run({"sweep", "--config", write("c.json", p0(20)), "--axis", "dephasing", "--values", "[0.1]",
                        "--format", "json"});
    ASSERT_EQ(d.code, 0) << d.err;
    const Json dj = Json::parse(d.out)["result"];
    EXPECT_NEAR(dj["J_closed"][0].get<double>(), 0.0833333333333333, 1e-12);
    EXPECT_NEAR(dj["J_numeric"][0].get<double>(), 0.0833333333333333, 1e-9);

    const auto v = run({"sweep", "--config", write("d.json", p0()), "--axis", "dimension", "--values",
                        "[[4,4],[3,3,3]]", "--format", "json"});
    ASSERT_EQ(v.code, 0) << v.err;
    for (const auto& row : Json::parse(v.out)["result"]) {
        EXPECT_NEAR(row["J_num"].get<double>(), row["J_formula"].get<double>(), 1e-8);
    }
    const auto p = run({"sweep", "--config", write("p.json", p0(10)), "--axis", "profile", "--values", "[0.05]"});
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_NE(p.out.find("dephasing,site,occupation,temperature"), std::string::npos);
}

TEST_F(CliTest, ValidatePasses) {
    Json c = p0(10);
    c["spec"]["dephasing"] = 0.05;
    const auto r = run({"validate", "--config", write("c.json", c)});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("linear_gradient"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_EQ(run({"validate", "--config", write("p.json", p0())}).code, 0);
}

TEST_F(CliTest, ValidateNegativeControl) {
    Json c = p0();
    c["solver"] = {{"tol", 1.0}};
    const auto r = run({"validate", "--config", write("c.json", c)});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("residual"), std::string::npos);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, ValidateWritesJson) {
    const std::string out = (dir_ / "checks.json").string();
    const auto r = run({"validate", "--config", write("c.json", p0()), "--out", out, "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const Json doc = Json::parse(read("checks.json"));
    EXPECT_TRUE(doc["passed"].get<bool>());
    EXPECT_GT(doc["checks"].size(), 10u);
}
