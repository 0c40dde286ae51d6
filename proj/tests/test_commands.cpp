#include "wstate/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace wstate;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig load(const std::string& name) {
    return parse_config(read_file(fs::path(WSTATE_SOURCE_DIR) / "configs" / name));
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

class CommandTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("wstate-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "-" +
                std::to_string(::getpid()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run_cli(const std::string& args) {
        const std::string cmd = std::string(WSIM_EXECUTABLE) + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    void write_config(const std::string& name, const std::string& text) {
        fs::create_directories(dir_);
        std::ofstream(dir_ / name) << text;
    }

    fs::path dir_;
};

RunConfig smoke_sweep_config() {
    RunConfig c = load("scheme1_sweep.conf");
    c.sweep_z0 = AxisRange{0.0, 60e-6, 8};
    c.sweep_d = AxisRange{0.0, 80e-6, 8};
    c.sweep_steps = 200;
    c.propagation.step_criterion = 0.2;
    return c;
}

}  // namespace

TEST(FormatFixed12, SignificantDigits) {
    EXPECT_EQ(format_fixed12(0.0), "0");
    EXPECT_EQ(format_fixed12(1.0), "1.00000000000");
    EXPECT_EQ(format_fixed12(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_fixed12(-140.0), "-140.000000000");
    EXPECT_EQ(format_fixed12(2.5e-5), "0.0000250000000000");
    EXPECT_EQ(format_fixed12(123456789012345.0), "123456789012345");
}

TEST_F(CommandTest, SimulateZeroCouplings) {
    const RunConfig c = load("zero_coupling.conf");
    const auto doc = cmd_simulate(c, dir_);
    EXPECT_NEAR(doc["w_fidelity"].get<double>(), 1.0 / 3.0, 1e-15);
    ASSERT_TRUE(doc.contains("provenance"));
    EXPECT_TRUE(doc.contains("adiabaticity"));
    RunConfig echoed = c;
    echoed.command = Command::Simulate;
    EXPECT_EQ(parse_config(doc["provenance"]["config"].get<std::string>()), echoed);

    const auto lines = lines_of(read_file(dir_ / "trajectory.csv"));
    ASSERT_EQ(lines.size(), c.n_steps + 1);
    const auto header = split(lines[0]);
    EXPECT_EQ(header.size(), 7u + 3u);
    EXPECT_EQ(header[0], "time_us");
    EXPECT_EQ(header[1], "p_g1g2g2_0");
    EXPECT_EQ(header[7], "p_g2g2g2_1");
    EXPECT_EQ(header[8], "dark_overlap");
    EXPECT_EQ(header[9], "norm");
    for (std::size_t j = 1; j < lines.size(); ++j) {
        const auto row = split(lines[j]);
        ASSERT_EQ(row.size(), 10u);
        EXPECT_EQ(row[1], "1.00000000000");
        EXPECT_EQ(row[2], "0");
    }
    EXPECT_TRUE(fs::exists(dir_ / "metrics.json"));
}

TEST_F(CommandTest, SmokeSweep) {
    const RunConfig c = smoke_sweep_config();
    try {
        cmd_sweep(c, dir_);
    } catch (const WorkingPointNotFound&) {
        // an 8x8 grid may hold no low-leakage cell; files are written either way
    }
    const std::string grid = read_file(dir_ / "grid.csv");
    const auto lines = lines_of(grid);
    ASSERT_EQ(lines.size(), 65u);
    EXPECT_EQ(lines[0], "z0_um,d_um,dev_p0,leakage_final,w_fidelity,max_transient_leakage");
    EXPECT_TRUE(fs::exists(dir_ / "working_point.json"));

    const SweepGrid direct = run_sweep(c.geometry, *c.sweep_z0, *c.sweep_d, {c.sweep_steps, c.propagation, 1});
    for (const SweepCell& cell : direct.cells) EXPECT_NEAR(cell.population_sum, 1.0, 1e-6);

    const fs::path again = dir_ / "again";
    try {
        cmd_sweep(c, again);
    } catch (const WorkingPointNotFound&) {
    }
    EXPECT_EQ(read_file(again / "grid.csv"), grid);
}

TEST_F(CommandTest, SweepRejectsScheme2) {
    RunConfig c = load("scheme2_angular.conf");
    c.sweep_z0 = AxisRange{0.0, 60e-6, 8};
    c.sweep_d = AxisRange{0.0, 80e-6, 8};
    EXPECT_THROW(cmd_sweep(c, dir_), ConfigError);
}

TEST_F(CommandTest, DiagnoseScheme1) {
    RunConfig c = load("scheme1_sweep.conf");
    c.geometry.z0 = 1.9e-6;
    c.geometry.d = 24e-6;
    c.n_steps = 500;
    const auto doc = cmd_diagnose(c, dir_);
    EXPECT_NEAR(doc["adiabaticity"]["omega_area"].get<double>(), 20.0, 1e-12);
    EXPECT_NEAR(doc["adiabaticity"]["g_area"].get<double>(), 100.0, 1e-12);
    EXPECT_FALSE(doc["adiabaticity"]["warning"].get<bool>());
    EXPECT_TRUE(doc.contains("fstirap"));
    EXPECT_FALSE(doc.contains("multilevel_stirap"));
    EXPECT_EQ(doc["stepper"]["stepper"], "cf4");
    EXPECT_TRUE(fs::exists(dir_ / "diagnostics.json"));
}

TEST_F(CommandTest, DiagnoseScheme2) {
    RunConfig c = load("scheme2_angular.conf");
    c.n_steps = 500;
    const auto doc = cmd_diagnose(c, dir_);
    EXPECT_FALSE(doc.contains("fstirap"));
    ASSERT_TRUE(doc.contains("multilevel_stirap"));
    EXPECT_TRUE(doc["multilevel_stirap"]["laser_precedes_cavity"].get<bool>());
    EXPECT_NEAR(doc["multilevel_stirap"]["laser_peak_time_us"].get<double>(), -15.0, 0.01);
    EXPECT_NEAR(doc["multilevel_stirap"]["cavity_peak_time_us"].get<double>(), 0.0, 0.01);
    EXPECT_TRUE(doc["adiabaticity"]["warning"].get<bool>());  // G0 T_C = 7.5
    EXPECT_GT(doc["spectral"]["min_gap_rad_s"].get<double>(), 0.0);
}

TEST_F(CommandTest, UnwritableOutput) {
    fs::create_directories(dir_);
    std::ofstream(dir_ / "blocker") << "x";
    EXPECT_THROW(cmd_simulate(load("zero_coupling.conf"), dir_ / "blocker" / "out"), IoError);
}

TEST_F(CommandTest, CliExitCodes) {
    const std::string configs = std::string(WSTATE_SOURCE_DIR) + "/configs/";
    EXPECT_EQ(run_cli("simulate --config " + configs + "zero_coupling.conf --out " + (dir_ / "ok").string()), 0);
    EXPECT_TRUE(fs::exists(dir_ / "ok" / "trajectory.csv"));

    write_config("bad.conf", "scheme = scheme1\nv = 2 m/s\nW_L = 0 um\n");
    EXPECT_EQ(run_cli("simulate --config " + (dir_ / "bad.conf").string()), 2);
    EXPECT_EQ(run_cli("simulate --config " + (dir_ / "missing.conf").string()), 4);
    EXPECT_EQ(run_cli("sweep --config " + configs + "scheme2_angular.conf --z0 0:60:8 --d 0:80:8"), 2);
    EXPECT_EQ(run_cli("simulate --config " + configs + "scheme1_sweep.conf"), 2);  // command key says sweep

    std::ofstream(dir_ / "blocker") << "x";
    EXPECT_EQ(run_cli("simulate --config " + configs + "zero_coupling.conf --out " + (dir_ / "blocker" / "x").string()), 4);

    // every cell leaks when the cavity is off
    std::string text = read_file(configs + "scheme1_sweep.conf");
    text.replace(text.find("G0 = 100 v/W_C"), 14, "G0 = 0 rad/s");
    write_config("dark_cavity.conf", text);
    EXPECT_EQ(run_cli("sweep --config " + (dir_ / "dark_cavity.conf").string() + " --z0 0:10:8 --d 0:20:8 --steps 200 --out " +
                      (dir_ / "nf").string()),
              3);
    EXPECT_TRUE(fs::exists(dir_ / "nf" / "working_point.json"));
}
