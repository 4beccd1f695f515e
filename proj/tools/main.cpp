#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "pulsebench/dynamics.hpp"
#include "runner.hpp"

namespace {

using namespace pulsebench;
using namespace pulsebench::cli;

struct Options {
    std::string preset;
    std::string config_path;
    std::uint64_t seed = 0;
    int seeds = 0;
    std::string out = ".";
    std::string shape;
    std::string protocol;
    int grid = 0;
};

void add_common(CLI::App* app, Options& o) {
    app->add_option("--preset", o.preset, "figure preset (fig1 ... fig12)");
    app->add_option("--config", o.config_path, "sectioned key = value configuration file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "base seed");
    app->add_option("--seeds", o.seeds, "number of consecutive seeds; files gain an _s<seed> suffix")
        ->check(CLI::PositiveNumber);
    app->add_option("--out", o.out, "output directory");
    app->add_option("--shape", o.shape, "pulse shape")->check(CLI::IsMember({"gp", "sgp", "ogp", "lgp", "hgp", "agp"}));
    app->add_option("--protocol", o.protocol, "protocol tag");
    app->add_option("--grid", o.grid, "output grid steps (overrides n_steps)")->check(CLI::PositiveNumber);
}

RunManifest build_manifest(Command command, const Options& o) {
    RunManifest m;
    m.command = command;
    std::string text;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError(0, "cannot read " + o.config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        m.config_path = o.config_path;
    }
    m.config = parse_config(text, o.preset);
    auto& s = m.config.scenario;
    try {
        if (!o.shape.empty()) {
            s.shape.kind = PulseShape::from_tag(o.shape).kind;
            s.walk.shape = s.shape;
            m.shapes = {s.shape.kind};
        }
        if (!o.protocol.empty()) {
            s.protocol = protocol_from_tag(o.protocol);
            m.protocol_fixed = true;
        }
        if (o.grid > 0) s.n_steps = o.grid;
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    if (o.seeds > 0) {
        m.seeds.clear();
        for (int i = 0; i < o.seeds; ++i) m.seeds.push_back(o.seed + static_cast<std::uint64_t>(i));
        m.suffix_seeds = true;
    } else {
        m.seeds = {o.seed};
    }
    m.out_dir = o.out;
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulse-shaped control of open two-qubit systems and quantum walks"};
    app.require_subcommand(1);

    Options opts;
    struct Sub {
        Command command;
        CLI::App* app;
    };
    std::vector<Sub> subs{
        {Command::Run, app.add_subcommand("run", "simulate one scenario per seed")},
        {Command::Sweep, app.add_subcommand("sweep", "simulate the preset's shape x state or shape x protocol grid")},
        {Command::Optimize, app.add_subcommand("optimize", "cross-entropy optimization of an episodic task")},
        {Command::Walk, app.add_subcommand("walk", "baseline quantum walk")},
    };
    for (auto& s : subs) add_common(s.app, opts);
    auto* list = app.add_subcommand("list-presets", "print the available presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : preset_names()) std::cout << name << "  " << preset_summary(name) << "\n";
            return 0;
        }
        for (const auto& s : subs) {
            if (!s.app->parsed()) continue;
            const auto manifest = build_manifest(s.command, opts);
            const auto files = run_command(manifest);
            std::cout << "wrote " << files.size() << " files to " << manifest.out_dir.string() << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const IntegratorError& e) {
        std::cerr << "integrator error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
