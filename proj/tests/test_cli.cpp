#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;  // stdout and stderr
};

Run run(const std::string& args) {
    const std::string cmd = std::string(GRAVRE_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    const int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("gravre_cli_") + info->name() + "_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string out(const fs::path& sub = {}) const { return "--out " + (dir_ / sub).string(); }
    fs::path dir_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::vector<std::string>* header = nullptr) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header) {
        std::stringstream h(line);
        std::string c;
        while (std::getline(h, c, ',')) header->push_back(c);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::stringstream s(line);
        std::string c;
        std::vector<double> row;
        while (std::getline(s, c, ',')) row.push_back(std::stod(c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_F(Cli, KeplerUnitParameters) {
    const auto r = run(out() + " kepler --L 1 --M1 1 --M2 1");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["schema"], "gravre/1");
    EXPECT_NEAR(j["r"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["phidot"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(j["stable"], true);
    EXPECT_EQ(json::parse(slurp(dir_ / "kepler.json")), j);
}

TEST_F(Cli, ValidationExitCode) {
    const auto r = run(out() + " kepler --L 0 --M1 1 --M2 1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("L must be positive"), std::string::npos) << r.out;
    EXPECT_EQ(run(out() + " branch --model db1 --family nope").code, 2);
    EXPECT_EQ(run(out() + " kepler --no-such-flag").code, 2);
    EXPECT_EQ(run(out() + " torus --r 0.3 --ell1 1.5").code, 2);
}

TEST_F(Cli, NumericalFailureExitCode) {
    const auto r = run(out() + " pitchfork --ell1 0.75 --family T --lo 0.5 --hi 0.6");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("no sign change"), std::string::npos) << r.out;
}

TEST_F(Cli, IoExitCode) {
    EXPECT_EQ(run(out() + " perp-check --bodies " + (dir_ / "missing.json").string()).code, 4);
    std::ofstream(dir_ / "bad.json") << "[{\"x\": 1,";
    EXPECT_EQ(run(out() + " perp-check --bodies " + (dir_ / "bad.json").string()).code, 4);
}

TEST_F(Cli, KeplerPhasePortraitOscillates) {
    const auto r = run(out() + " --format csv,json kepler --L 1 --M1 1 --M2 1 --phase --r0 1.05");
    ASSERT_EQ(r.code, 0) << r.out;
    std::vector<std::string> h;
    const auto rows = read_csv(dir_ / "kepler_phase.csv", &h);
    ASSERT_GE(h.size(), 2u);
    EXPECT_EQ(h[1], "r");
    ASSERT_GT(rows.size(), 100u);
    double lo = INFINITY, hi = 0;
    for (const auto& row : rows) {
        lo = std::min(lo, row[1]);
        hi = std::max(hi, row[1]);
    }
    EXPECT_GE(lo, 0.95);
    EXPECT_LE(hi, 1.16);
    EXPECT_LT(lo, 1.0);
    EXPECT_GT(hi, 1.0);
}

TEST_F(Cli, BranchCountsIsoscelesReference) {
    const auto r = run(out() + " branch --model db1 --family isosceles --x1 0.75 --M1 0.45 --compactify --L2 1.7");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    const auto& c = j["branches"][0]["counts"][0];
    ASSERT_EQ(c["count"], 2);
    EXPECT_NEAR(c["solutions"][0]["r"].get<double>(), 0.3384, 1e-3);
    EXPECT_NEAR(c["solutions"][1]["r"].get<double>(), 1.262, 1e-3);
    EXPECT_EQ(j["branches"][0]["extrema"][0]["kind"], "min");
}

TEST_F(Cli, TorusOnlySymmetricAtLargeRadius) {
    const auto r = run(out() + " torus --ell1 0.75 --r 0.552 --mod-symmetry");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["count"], 4);
    std::set<std::string> fam;
    for (const auto& e : j["re"]) {
        EXPECT_TRUE(e["symmetric"].get<bool>());
        fam.insert(e["family"]);
    }
    EXPECT_EQ(fam, (std::set<std::string>{"C", "P1", "P2", "T"}));
}

TEST_F(Cli, TorusRolesAtSmallRadius) {
    const auto r = run(out() + " torus --ell1 0.75 --r 0.018 --mod-symmetry");
    ASSERT_EQ(r.code, 0) << r.out;
    for (const auto& e : json::parse(r.out)["re"]) {
        if (e["family"] == "C") EXPECT_EQ(e["kind"], "minimum");
        if (e["family"] == "P1") EXPECT_EQ(e["kind"], "maximum");
    }
}

TEST_F(Cli, PitchforkNormalForm) {
    const auto r = run(out() + " pitchfork --ell1 0.75 --family P1 --lo 0.385 --hi 0.395");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto nf = json::parse(r.out)["normal_form"];
    EXPECT_NEAR(nf["r_star"].get<double>(), 0.3893, 5e-4);
    EXPECT_NEAR(nf["slope"].get<double>() / -5.909, 1.0, 0.02);
    EXPECT_NEAR(nf["quad"].get<double>() / -1.150, 1.0, 0.03);
}

TEST_F(Cli, PerpCheckFromFiles) {
    std::ofstream(dir_ / "q2.json") << R"([{"x": -1, "y": 0.5, "m": 1}, {"x": -2, "y": 1.5, "m": 0.5}])";
    std::ofstream(dir_ / "bis.json") << R"([{"x": 0, "y": 2, "m": 1}])";
    std::ofstream(dir_ / "line.json") << R"([{"x": 3, "y": 0, "m": 1}])";
    auto q2 = run(out() + " perp-check --bodies " + (dir_ / "q2.json").string());
    ASSERT_EQ(q2.code, 0) << q2.out;
    auto j = json::parse(q2.out);
    EXPECT_EQ(j["verdict"], "violates-theorem");
    EXPECT_LT(j["theta_ddot"].get<double>(), 0.0);
    j = json::parse(run(out() + " perp-check --bodies " + (dir_ / "bis.json").string()).out);
    EXPECT_EQ(j["verdict"], "compatible");
    EXPECT_EQ(j["on_bisector"], true);
    EXPECT_EQ(j["theta_ddot"].get<double>(), 0.0);
    j = json::parse(run(out() + " perp-check --bodies " + (dir_ / "line.json").string()).out);
    EXPECT_EQ(j["verdict"], "compatible");
    EXPECT_EQ(j["on_rod_line"], true);
}

TEST_F(Cli, MapNonOverlapMatchesSlopeSign) {
    const auto r = run(out() + " --format csv,json map --family db1-colinear-nonoverlap --nx 12 --nr 12");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_GT(j["cells_energetic_stable"].get<int>(), 0);
    bool any_csv = false;
    for (const auto& e : fs::directory_iterator(dir_)) any_csv |= e.path().extension() == ".csv";
    EXPECT_TRUE(any_csv);
}

TEST_F(Cli, OutputsAreDeterministic) {
    const std::vector<std::string> cmds{
        " --format csv,json,svg kepler --L 1 --M1 1 --M2 1 --phase --r0 1.05",
        " --format csv,json,svg branch --model db1 --family isosceles --x1 0.75 --M1 0.45 --compactify --L2 1.7",
        " --format csv,json,svg torus --ell1 0.75 --r 0.38 --n 64",
        " --format csv,json,svg pitchfork --ell1 0.75 --family P1 --lo 0.385 --hi 0.395 --trace",
        " --format csv,json,svg --seed 7 map --family db1-colinear-overlap --nx 10 --nr 10",
    };
    for (const auto& c : cmds) {
        ASSERT_EQ(run(out("a") + c).code, 0) << c;
        ASSERT_EQ(run(out("b") + " --jobs 1" + c).code, 0) << c;
    }
    int compared = 0;
    for (const auto& e : fs::directory_iterator(dir_ / "a")) {
        const auto ext = e.path().extension();
        if (ext != ".csv" && ext != ".json") continue;
        const fs::path other = dir_ / "b" / e.path().filename();
        ASSERT_TRUE(fs::exists(other)) << other;
        EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
        ++compared;
    }
    EXPECT_GE(compared, 8);
}

TEST_F(Cli, EverySvgHasDataSidecar) {
    const std::vector<std::string> cmds{
        " kepler --L 1 --M1 1 --M2 1 --phase",
        " branch --model db1 --family colinear-nonoverlap --x1 0.6 --M1 0.5 --compactify",
        " torus --ell1 0.75 --r 0.38 --n 64",
        " pitchfork --ell1 0.75 --family T --lo 0.35 --hi 0.37 --trace",
        " map --family db1-isosceles --nx 8 --nr 8",
    };
    for (const auto& c : cmds) ASSERT_EQ(run(out() + " --format svg" + c).code, 0) << c;
    int svgs = 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (e.path().extension() != ".svg") continue;
        ++svgs;
        fs::path csv = e.path(), js = e.path();
        csv.replace_extension(".csv");
        js.replace_extension(".json");
        EXPECT_TRUE(fs::exists(csv) || fs::exists(js)) << e.path().filename();
    }
    EXPECT_GE(svgs, 5);
}

TEST_F(Cli, CsvUsesRoundTripPrecision) {
    ASSERT_EQ(run(out() + " --format csv kepler --L 1 --M1 1 --M2 1 --phase --r0 1.05").code, 0);
    const auto rows = read_csv(dir_ / "kepler_phase.csv");
    // the stored energy must reproduce the closed form exactly at t = 0
    const double r0 = 1.05;
    EXPECT_EQ(rows[0][4], 1.0 / (2 * r0 * r0) - 1.0 / r0);
}
