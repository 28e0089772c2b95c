#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "willmore/cli.hpp"
#include "willmore/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace willmore;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("willmore_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write_config(const std::string& text) {
        const fs::path p = dir_ / "config.json";
        std::ofstream(p) << text;
        return p.string();
    }

    int run(const std::string& command, const std::string& config_text) {
        out_.str("");
        err_.str("");
        return cli::run({command, "--config", write_config(config_text), "--out", (dir_ / "out").string()}, out_,
                        err_);
    }

    json read(const std::string& name) {
        std::ifstream f(dir_ / "out" / name);
        return json::parse(f);
    }

    json error() { return json::parse(err_.str())["error"]; }

    fs::path dir_;
    std::ostringstream out_, err_;
};

}  // namespace

TEST(ParseConfig, DefaultsAndValidation) {
    const cli::RunConfig c = cli::parse_config(R"({"fixture": "round_sphere"})", "energy");
    EXPECT_EQ(c.command, "energy");
    EXPECT_EQ(c.n_t, 128);
    const cli::RunConfig n = cli::parse_config("{}", "neck_report");
    EXPECT_EQ(n.fixture, "inverted_catenoid");
    EXPECT_EQ(n.n_t, 401);
    EXPECT_EQ(n.family.size(), 3u);
    for (const char* bad : {"{", "[]", R"({"fixture":"round_sphere","colour":1})", R"({"grid":{"n_t":4}})",
                            R"({"family":[0.1,0.2]})", R"({"family":[]})", R"({"family":[1.5]})",
                            R"({"annulus":[2,1]})", R"({"index":{"J":0}})", R"({"command":"index_bound"})"}) {
        try {
            cli::parse_config(bad, "neck_report");
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::config) << bad;
        }
    }
}

TEST_F(CliTest, EnergyRoundSphere) {
    ASSERT_EQ(run("energy", R"({"fixture": "round_sphere", "grid": {"n_t": 64, "n_theta": 64}})"), 0) << err_.str();
    const json j = read("energy.json");
    EXPECT_NEAR(j["W"].get<double>(), 4 * std::numbers::pi, 1e-8);
    EXPECT_LE(j["identity_defect"].get<double>(), 1e-6);
    EXPECT_EQ(j["chi"].get<int>(), 2);
    EXPECT_EQ(json::parse(out_.str()), j);
}

TEST_F(CliTest, EnergyTorusWithMoebiusMap) {
    ASSERT_EQ(run("energy", R"({"fixture": "clifford_torus", "grid": {"n_t": 64, "n_theta": 64},
                               "moebius": [{"dilate": 0.3}, {"invert": true}, {"translate": [0.5, 0, 0]}]})"),
              0)
        << err_.str();
    const json j = read("energy.json");
    EXPECT_NEAR(j["W"].get<double>(), 2 * std::numbers::pi * std::numbers::pi, 1e-6);
    EXPECT_LE(j["so41_defect"].get<double>(), 1e-9);
    EXPECT_NEAR(j["A"].get<double>(), std::numbers::pi * std::numbers::pi * 2, 1e-6);
}

TEST_F(CliTest, EnergyOpenSurfaceHasNullIdentity) {
    ASSERT_EQ(run("energy", R"({"fixture": {"name": "catenoid", "params": {"t0": -1, "t1": 1}},
                               "grid": {"n_t": 33, "n_theta": 16}})"),
              0);
    const json j = read("energy.json");
    EXPECT_TRUE(j["identity_defect"].is_null());
    EXPECT_FALSE(j["closed"].get<bool>());
}

TEST_F(CliTest, MalformedConfigExitsTwo) {
    EXPECT_EQ(run("energy", "{not json"), 2);
    EXPECT_EQ(error()["exit"].get<int>(), 2);
    EXPECT_EQ(run("energy", R"({"fixture": "klein_bottle"})"), 2);
    EXPECT_EQ(error()["code"].get<std::string>(), "config");
    EXPECT_EQ(run("energy", R"({"fixture": "round_sphere", "moebius": [{"shear": 1}]})"), 2);
    EXPECT_EQ(cli::run({"energy"}, out_, err_), 2);
    EXPECT_EQ(cli::run({"bogus", "--config", "x"}, out_, err_), 2);
}

TEST_F(CliTest, NumericalFailureExitsThree) {
    // the node (t, theta) = (pi/2, pi) lands on the inversion centre
    EXPECT_EQ(run("energy", R"({"fixture": "round_sphere", "grid": {"n_t": 17, "n_theta": 16},
                               "moebius": [{"translate": [1, 0, 0]}, {"invert": true}]})"),
              3);
    EXPECT_EQ(error()["exit"].get<int>(), 3);
}

TEST_F(CliTest, NeckReportSingleMember) {
    ASSERT_EQ(run("neck_report", R"({"family": [0.1], "grid": {"n_t": 101, "n_theta": 32}})"), 0) << err_.str();
    const json j = read("neck_report.json");
    ASSERT_EQ(j["members"].size(), 1u);
    EXPECT_TRUE(j["members"][0].contains("line_fit"));
    std::ifstream csv(dir_ / "out" / "neck_report.csv");
    std::string l1, l2;
    std::getline(csv, l1);
    std::getline(csv, l2);
    EXPECT_EQ(l1, "# schema=willmore.neck_report.v1");
    EXPECT_EQ(l2, "eps,t,alpha,beta,gamma,delta,Ystar_1,Ystar_2,Ystar_3,Ystar_4,Ystar_5");
}

TEST_F(CliTest, NeckReportTrends) {
    ASSERT_EQ(run("neck_report", R"({"grid": {"n_t": 201, "n_theta": 32}})"), 0) << err_.str();
    const json j = read("neck_report.json");
    EXPECT_EQ(j["members"].size(), 3u);
    EXPECT_TRUE(j["trends"]["alpha_over_beta_decreasing"].get<bool>());
    EXPECT_TRUE(j["trends"]["gauss_curvature_decreasing"].get<bool>());
}

TEST_F(CliTest, NeckReportEmptySweep) {
    EXPECT_EQ(run("neck_report", R"({"family": []})"), 2);
}

TEST_F(CliTest, IndexBoundSingleCertificate) {
    ASSERT_EQ(run("index_bound", R"({"fixture": {"name": "inverted_catenoid", "params": {"eps": 0.1}},
                                    "grid": {"n_t": 201, "n_theta": 32}, "index": {"J": 1}})"),
              0)
        << err_.str();
    const json j = read("index_bound.json");
    ASSERT_EQ(j["pieces"].size(), 1u);
    EXPECT_LT(j["pieces"][0]["bound"].get<double>(), 0.0);
    EXPECT_GE(j["count"].get<int>(), 0);
}

TEST_F(CliTest, IndexBoundInfeasible) {
    EXPECT_EQ(run("index_bound", R"({"grid": {"n_t": 33, "n_theta": 16}, "index": {"J": 500}})"), 4);
    const json e = error();
    EXPECT_EQ(e["exit"].get<int>(), 4);
    EXPECT_GT(e["max_feasible_J"].get<int>(), 0);
    EXPECT_LT(e["max_feasible_J"].get<int>(), 500);
}

TEST_F(CliTest, IndexBoundThreePieces) {
    const int code = run("index_bound", R"({"grid": {"n_t": 201, "n_theta": 32}, "index": {"J": 3}})");
    ASSERT_EQ(code, 0) << err_.str();
    const json j = read("index_bound.json");
    EXPECT_EQ(j["pieces"].size(), 3u);
    EXPECT_GE(j["count"].get<int>(), 0);
    EXPECT_LE(j["count"].get<int>(), 3);
}
