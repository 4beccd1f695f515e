#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "runner.hpp"

using namespace pulsebench;
using namespace pulsebench::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("pulsebench_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int config_error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

RunManifest small_manifest(Command command, const std::string& preset, const fs::path& out) {
    RunManifest m;
    m.command = command;
    m.config = preset_config(preset);
    m.config.scenario.t_end = 4.0;
    m.config.scenario.n_steps = 12;
    m.out_dir = out;
    m.workers = 1;
    return m;
}

}  // namespace

TEST(Presets, AllTwelveResolve) {
    const auto names = preset_names();
    ASSERT_EQ(names.size(), 12u);
    for (const auto& n : names) {
        EXPECT_NO_THROW(preset_config(n).scenario.validate()) << n;
        EXPECT_FALSE(preset_summary(n).empty());
    }
    EXPECT_THROW(preset_config("fig13"), ConfigError);
}

TEST(Presets, ShapedPulseValues) {
    const auto s = preset_config("fig1").scenario;
    EXPECT_EQ(s.g, 0.5);
    EXPECT_EQ(s.t_c, 7.0);
    EXPECT_EQ(s.pulse_duration, 15.0);
    EXPECT_EQ(s.gamma1, 0.001);
    EXPECT_EQ(s.gamma_phi, 0.001);
    EXPECT_EQ(s.noise.s0, 0.2);
    EXPECT_EQ(s.protocol, ProtocolKind::SinglePulse);
}

TEST(Config, PresetOnlyFileEqualsPreset) {
    const auto a = parse_config("[scenario]\npreset = fig9\n");
    const auto b = parse_config("", "fig9");
    EXPECT_EQ(serialize_config(a), serialize_config(preset_config("fig9")));
    EXPECT_EQ(serialize_config(b), serialize_config(preset_config("fig9")));
    EXPECT_THROW(parse_config(""), ConfigError);
}

TEST(Config, OverridesApply) {
    const auto c = parse_config("# comment\n[scenario]\npreset = fig1\n\n[system]\ng = 0.25\n[pulse]\nshape = hgp\n");
    EXPECT_EQ(c.scenario.g, 0.25);
    EXPECT_EQ(c.scenario.shape.kind, ShapeKind::HGP);
}

TEST(Config, RoundTripsEveryPreset) {
    for (const auto& n : preset_names()) {
        const auto c = preset_config(n);
        const auto text = serialize_config(c);
        EXPECT_EQ(serialize_config(parse_config(text)), text) << n;
    }
    auto c = preset_config("fig3");
    c.scenario.g = 0.1 + 0.2;
    c.scenario.noise.omega_c = 1.0 / 3.0;
    const auto back = parse_config(serialize_config(c));
    EXPECT_EQ(back.scenario.g, c.scenario.g);
    EXPECT_EQ(back.scenario.noise.omega_c, c.scenario.noise.omega_c);
}

TEST(Config, UnknownAndDuplicateKeysCarryLines) {
    EXPECT_EQ(config_error_line("[scenario]\npreset = fig1\n[system]\ng = 0.2\nwobble = 3\n"), 5);
    EXPECT_EQ(config_error_line("[scenario]\npreset = fig1\n[system]\ng = 0.2\ng = 0.3\n"), 5);
    EXPECT_EQ(config_error_line("[scenario]\npreset = fig1\n[system]\ng = abc\n"), 4);
    EXPECT_EQ(config_error_line("[scenario]\npreset = fig1\nnot a pair\n"), 3);
    EXPECT_EQ(config_error_line("g = 1\n"), 1);
}

TEST(Config, OverlappingSequentialWindowsAreRejectedWithLine) {
    const std::string text = "[scenario]\npreset = fig3\n[pulse]\ncombine = sequential\nspacing = 2\n";
    const int line = config_error_line(text);
    EXPECT_GE(line, 4);
    EXPECT_LE(line, 5);
    EXPECT_NO_THROW(parse_config("[scenario]\npreset = fig3\n[pulse]\ncombine = sequential\nspacing = 6\n"));
}

TEST(Config, HashIsStableAndSensitive) {
    const auto a = preset_config("fig1");
    auto b = a;
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 40u);
    b.scenario.g = 0.51;
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, InitialStateTags) {
    for (const auto& st : figure_initial_states()) {
        EXPECT_EQ(initial_state_tag(initial_state_from_tag(initial_state_tag(st), 2, 0.05)), initial_state_tag(st));
        EXPECT_EQ(file_tag(st).find('+'), std::string::npos);
    }
    EXPECT_EQ(figure_initial_states().size(), 6u);
    EXPECT_THROW(initial_state_from_tag("bogus", 2, 0.05), std::invalid_argument);
}

TEST(Runner, RunIsByteIdenticalAcrossInvocations) {
    const auto d1 = scratch_dir("run1"), d2 = scratch_dir("run2");
    auto m = small_manifest(Command::Run, "fig1", d1);
    m.seeds = {4};
    const auto f1 = run_command(m);
    m.out_dir = d2;
    const auto f2 = run_command(m);
    ASSERT_EQ(f1.size(), f2.size());
    for (std::size_t i = 0; i < f1.size(); ++i) {
        EXPECT_EQ(f1[i].filename(), f2[i].filename());
        if (f1[i].filename() == "manifest.txt") continue;
        EXPECT_EQ(slurp(f1[i]), slurp(f2[i])) << f1[i];
    }
    const auto csv = slurp(f1.front());
    EXPECT_EQ(csv.rfind("t,concurrence,purity\n", 0), 0u);
}

TEST(Runner, ShapeStateSweepWritesThirtySixTrajectories) {
    const auto dir = scratch_dir("sweep");
    auto m = small_manifest(Command::Sweep, "fig1", dir);
    m.config.scenario.t_end = 1.2;
    const auto files = run_command(m);
    int trajectories = 0;
    for (const auto& f : files) {
        EXPECT_TRUE(fs::exists(f)) << f;
        const auto name = f.filename().string();
        if (name.rfind("fig1_single_pulse_", 0) == 0) ++trajectories;
    }
    EXPECT_EQ(trajectories, 36);
    EXPECT_TRUE(fs::exists(dir / "sweep_fig1.csv"));
    EXPECT_TRUE(fs::exists(dir / "manifest.txt"));
    for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");
}

TEST(Runner, SeedSuffixes) {
    const auto dir = scratch_dir("seeds");
    auto m = small_manifest(Command::Run, "fig9", dir);
    m.seeds = {7, 8};
    m.suffix_seeds = true;
    const auto files = run_command(m);
    ASSERT_EQ(files.size(), 3u);
    EXPECT_NE(files[0].filename().string().find("_s7.csv"), std::string::npos);
    EXPECT_NE(files[1].filename().string().find("_s8.csv"), std::string::npos);
    EXPECT_NE(slurp(files[0]), slurp(files[1]));
}

TEST(Runner, ManifestRecordsResolvedConfiguration) {
    const auto dir = scratch_dir("manifest");
    auto m = small_manifest(Command::Run, "fig11", dir);
    run_command(m);
    const auto text = slurp(dir / "manifest.txt");
    EXPECT_NE(text.find("command = run"), std::string::npos);
    EXPECT_NE(text.find("config_hash = " + config_hash(m.config)), std::string::npos);
    EXPECT_NE(text.find(serialize_config(m.config)), std::string::npos);
}

TEST(Runner, WalkCommandWritesStepIndexedMetrics) {
    const auto dir = scratch_dir("walk");
    auto m = small_manifest(Command::Walk, "fig12", dir);
    m.config.scenario.walk.n_steps = 3;
    const auto files = run_command(m);
    ASSERT_EQ(files.size(), 2u);
    const auto csv = slurp(files[0]);
    EXPECT_EQ(csv.rfind("step,tsp,ee,mi,trace\n", 0), 0u);
}

TEST(Runner, AdaptiveRunIsRejected) {
    auto m = small_manifest(Command::Run, "fig1", scratch_dir("adaptive"));
    m.config.scenario.protocol = ProtocolKind::Adaptive;
    EXPECT_THROW(run_command(m), ConfigError);
    m.seeds.clear();
    EXPECT_THROW(run_command(m), ConfigError);
}

TEST(Runner, OptimizeWritesEpisodeAndCurve) {
    const auto dir = scratch_dir("optimize");
    auto m = small_manifest(Command::Optimize, "fig11", dir);
    m.config.optimize.env.horizon = 3;
    m.config.optimize.cem.population = 6;
    m.config.optimize.cem.iterations = 2;
    const auto files = run_command(m);
    ASSERT_EQ(files.size(), 3u);
    EXPECT_EQ(slurp(files[0]).rfind("step,a0,a1,reward,concurrence\n", 0), 0u);
    EXPECT_EQ(slurp(files[1]).rfind("iteration,best_return,mean_return\n", 0), 0u);
}
