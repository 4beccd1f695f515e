#include "runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pulsebench/metrics.hpp"

namespace pulsebench::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_walk(const RunConfig& c) { return c.optimize.task == EnvTask::QuantumWalk; }

std::string seed_suffix(const RunManifest& m, std::uint64_t seed) {
    return m.suffix_seeds ? "_s" + std::to_string(seed) : std::string{};
}

std::vector<ShapeKind> sweep_shapes(const RunManifest& m) {
    if (!m.shapes.empty()) return m.shapes;
    return {std::begin(kAllShapes), std::end(kAllShapes)};
}

std::vector<ProtocolKind> sweep_protocols(const RunManifest& m) {
    const auto kind = m.config.scenario.protocol;
    if (m.protocol_fixed) return {kind};
    switch (protocol_family(kind)) {
        case ProtocolFamily::Deterministic: return {kind};
        case ProtocolFamily::Decoupling:
            return {ProtocolKind::DCG2, ProtocolKind::UDD16, ProtocolKind::CarrPurcell, ProtocolKind::HybridQECDD};
        case ProtocolFamily::Floquet:
            return {ProtocolKind::FloquetReference, ProtocolKind::FloquetOptimizedFixed, ProtocolKind::FloquetLyapunov};
        case ProtocolFamily::Generation:
            return {ProtocolKind::GenNoControl, ProtocolKind::GenHeuristic, ProtocolKind::GenKnillDD};
        case ProtocolFamily::Adaptive: break;
    }
    throw ConfigError(0, "protocol 'adaptive' has no fixed schedule; use the optimize command");
}

struct Job {
    ScenarioConfig scenario;
    std::string file;
};

struct JobResult {
    std::string csv;
    Trajectory trajectory;
};

JobResult run_job(const ScenarioConfig& s, bool walk) {
    JobResult r;
    std::ostringstream os;
    if (walk) {
        WalkConfig w = s.walk;
        w.seed = s.seed;
        w.shape = s.shape;
        r.trajectory = run_walk([](int, const std::vector<Operator>&) { return CoinAction{}; }, w).trajectory;
        write_csv(os, r.trajectory, "step");
    } else {
        if (s.protocol == ProtocolKind::Adaptive) {
            throw ConfigError(0, "protocol 'adaptive' has no fixed schedule; use the optimize command");
        }
        r.trajectory = run_protocol(s.protocol, s);
        write_csv(os, r.trajectory);
    }
    r.csv = os.str();
    return r;
}

std::string job_name(const ScenarioConfig& s, bool walk) {
    std::string name = s.preset.empty() ? "custom" : s.preset;
    if (walk) return name + "_walk_" + s.shape.tag();
    name += "_" + protocol_tag(s.protocol) + "_" + s.shape.tag();
    if (protocol_family(s.protocol) == ProtocolFamily::Deterministic) name += "_" + file_tag(s.initial_state);
    return name;
}

void write_manifest(const RunManifest& m, const std::vector<std::string>& files) {
    std::ostringstream os;
    os << "command = " << command_tag(m.command) << "\n";
    os << "scenario = " << (m.config.scenario.preset.empty() ? "custom" : m.config.scenario.preset) << "\n";
    os << "config_path = " << m.config_path << "\n";
    os << "seeds = ";
    for (std::size_t i = 0; i < m.seeds.size(); ++i) os << (i ? "," : "") << m.seeds[i];
    os << "\n";
    os << "out_dir = " << m.out_dir.string() << "\n";
    os << "config_hash = " << config_hash(m.config) << "\n";
    os << "files = " << files.size() << "\n";
    for (const auto& f : files) os << "  " << f << "\n";
    os << "\n# resolved configuration\n" << serialize_config(m.config);
    write_atomic(m.out_dir / "manifest.txt", os.str());
}

std::vector<fs::path> run_trajectories(const RunManifest& m, bool sweep) {
    const auto& base = m.config.scenario;
    const bool walk = is_walk(m.config);
    std::vector<Job> jobs;
    for (const auto seed : m.seeds) {
        std::vector<ScenarioConfig> grid;
        if (!sweep) {
            grid.push_back(base);
        } else if (walk) {
            for (const auto k : sweep_shapes(m)) {
                ScenarioConfig s = base;
                s.shape.kind = k;
                grid.push_back(s);
            }
        } else {
            for (const auto k : sweep_shapes(m)) {
                for (const auto p : sweep_protocols(m)) {
                    ScenarioConfig s = base;
                    s.shape.kind = k;
                    s.protocol = p;
                    if (protocol_family(p) == ProtocolFamily::Deterministic && base.n_qubits == 2) {
                        for (const auto& st : figure_initial_states()) {
                            s.initial_state = st;
                            grid.push_back(s);
                        }
                    } else {
                        grid.push_back(s);
                    }
                }
            }
        }
        for (auto& s : grid) {
            s.seed = seed;
            s.walk.shape = s.shape;
            jobs.push_back({s, job_name(s, walk) + seed_suffix(m, seed) + ".csv"});
        }
    }

    fs::create_directories(m.out_dir);
    std::vector<JobResult> results(jobs.size());
    const int workers = m.workers > 0 ? m.workers : default_workers();
    parallel_for(static_cast<int>(jobs.size()), workers, [&](int, int i) {
        results[i] = run_job(jobs[i].scenario, walk);
        write_atomic(m.out_dir / jobs[i].file, results[i].csv);
    });

    std::vector<fs::path> written;
    std::vector<std::string> names;
    for (const auto& j : jobs) {
        written.push_back(m.out_dir / j.file);
        names.push_back(j.file);
    }
    if (sweep) {
        std::ostringstream os;
        os << "preset,protocol,shape,initial_state,seed,metric,final,mean,max\n";
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const auto& s = jobs[i].scenario;
            const auto& t = results[i].trajectory;
            for (std::size_t c = 0; c < t.metric_names.size(); ++c) {
                const auto& v = t.metric_values[c];
                const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
                os << (s.preset.empty() ? "custom" : s.preset) << ',' << (walk ? "walk" : protocol_tag(s.protocol))
                   << ',' << s.shape.tag() << ',' << (walk ? "walk" : initial_state_tag(s.initial_state)) << ','
                   << s.seed << ',' << t.metric_names[c] << ',' << fmt(v.back()) << ',' << fmt(mean) << ','
                   << fmt(*std::max_element(v.begin(), v.end())) << '\n';
            }
        }
        const std::string name = "sweep_" + (base.preset.empty() ? std::string("custom") : base.preset) + ".csv";
        write_atomic(m.out_dir / name, os.str());
        written.push_back(m.out_dir / name);
        names.push_back(name);
    }
    write_manifest(m, names);
    written.push_back(m.out_dir / "manifest.txt");
    return written;
}

std::vector<fs::path> run_optimize(const RunManifest& m) {
    fs::create_directories(m.out_dir);
    std::vector<fs::path> written;
    std::vector<std::string> names;
    const auto& opt = m.config.optimize;
    const std::string metric = opt.task == EnvTask::QuantumWalk ? "tsp" : "concurrence";
    for (const auto seed : m.seeds) {
        ScenarioConfig s = m.config.scenario;
        s.seed = seed;
        auto factory = [&] { return make_environment(opt.task, s, opt.env); };
        auto env = factory();
        CEMConfig cem = opt.cem;
        cem.seed = seed;
        cem.workers = m.workers;
        const auto null = env->null_action();
        std::vector<double> mean;
        for (int k = 0; k < env->horizon(); ++k) mean.insert(mean.end(), null.begin(), null.end());
        cem.initial_mean = mean;
        const auto result = cem_optimize(factory, cem, seed);

        EpisodeLog log;
        rollout(*env, result.best_actions, seed, &log);
        std::ostringstream episode;
        write_episode_csv(episode, log, metric);
        std::ostringstream curve;
        curve << "iteration,best_return,mean_return\n";
        for (std::size_t i = 0; i < result.learning_curve.size(); ++i) {
            curve << i << ',' << fmt(result.learning_curve[i]) << ',' << fmt(result.mean_returns[i]) << '\n';
        }
        const std::string stem = (s.preset.empty() ? std::string("custom") : s.preset) + "_" + env_task_tag(opt.task) + "_" +
                                 s.shape.tag() + seed_suffix(m, seed);
        for (const auto& [suffix, text] : {std::pair{"_episode.csv", episode.str()}, std::pair{"_curve.csv", curve.str()}}) {
            write_atomic(m.out_dir / (stem + suffix), text);
            written.push_back(m.out_dir / (stem + suffix));
            names.push_back(stem + suffix);
        }
    }
    write_manifest(m, names);
    written.push_back(m.out_dir / "manifest.txt");
    return written;
}

}  // namespace

std::string command_tag(Command c) {
    switch (c) {
        case Command::Run: return "run";
        case Command::Sweep: return "sweep";
        case Command::Optimize: return "optimize";
        case Command::Walk: return "walk";
    }
    return "run";
}

std::string config_hash(const RunConfig& config) {
    const std::string body = serialize_config(config);
    std::string blob = "blob " + std::to_string(body.size());
    blob.push_back('\0');
    blob += body;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
        throw std::runtime_error("SHA-1 digest failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::vector<fs::path> run_command(const RunManifest& manifest) {
    if (manifest.seeds.empty()) throw ConfigError(0, "at least one seed is required");
    switch (manifest.command) {
        case Command::Run: return run_trajectories(manifest, false);
        case Command::Sweep: return run_trajectories(manifest, true);
        case Command::Optimize: return run_optimize(manifest);
        case Command::Walk: {
            RunManifest m = manifest;
            m.config.optimize.task = EnvTask::QuantumWalk;
            return run_trajectories(m, false);
        }
    }
    return {};
}

}  // namespace pulsebench::cli
