#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pulsebench/protocols.hpp"

namespace pulsebench {

// Rewards -------------------------------------------------------------------

enum class RewardTask {
    Preservation,
    Generation,
    PWCPreservation,
    PWCGeneration,
    PolarizedSimple,
    StepwiseCircular,
    DDSparse,
    FloquetDense,
    GenShaped,
    Walk,
};

std::string reward_task_tag(RewardTask task);
RewardTask reward_task_from_tag(std::string_view tag);

/// Objective selector for tasks that have a preservation and a generation form.
enum class RewardGoal { Preservation, Generation };

/// Caption: 20 C^3 - 5 (1 - C)^2 - 0.05 |da|, terminal +500 / -100.
/// Body: sustain 0.01 C above 0.9, action cost 0.001, terminal 10 C.
enum class FloquetRewardVariant { Caption, Body };

struct RewardWeights {
    double w_dev = 75.0;
    double w_stab = 10.0;
    double w_shape = 15.0;
    double w_int = 0.5;
    double w_cost = 0.05;
    double w_sm = 0.02;
    double w_bonus = 75.0;
    double w_penalty = 30.0;
    double bonus_threshold = 0.95;
    double penalty_threshold = 0.2;

    double polarized_scale = 10.0;
    double polarized_bonus = 10.0;
    double polarized_threshold = 0.8;

    double sustain = 0.01;
    double sustain_threshold = 0.9;
    double action_cost = 0.001;
    double final_factor = 10.0;

    double floquet_c1 = 20.0;
    double floquet_power = 3.0;
    double floquet_c2 = 5.0;
    double floquet_da = 0.05;
    double floquet_bonus = 500.0;
    double floquet_penalty = 100.0;
    double floquet_target = 0.95;

    double w_c = 50.0;
    double w_pen = 0.005;
};

struct RewardSpec {
    RewardTask task = RewardTask::Preservation;
    RewardGoal goal = RewardGoal::Preservation;
    FloquetRewardVariant floquet_variant = FloquetRewardVariant::Caption;
    RewardWeights w;

    /// Default weights for the task (and goal where the task has both forms).
    static RewardSpec defaults(RewardTask task, RewardGoal goal = RewardGoal::Preservation,
                               FloquetRewardVariant variant = FloquetRewardVariant::Caption);
    void validate() const;
};

/// Step reward. DDSparse and GenShaped read the physical pulse angle from
/// action[0]; FloquetDense (Body) reads the first harmonic amplitude from action[0].
double reward_step(const RewardSpec& spec, double c_prev, double c_next, double c_initial,
                   std::span<const double> action, std::span<const double> prev_action);

double reward_terminal(const RewardSpec& spec, double c_final);

// Environments ----------------------------------------------------------------

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;
    double metric = 0.0;  // concurrence, or TSP for the walk
};

/// Episodic state machine; actions are physical values within [action_low, action_high].
class EpisodicEnvironment {
public:
    virtual ~EpisodicEnvironment() = default;

    virtual std::vector<double> reset(std::uint64_t seed) = 0;
    virtual StepResult step(std::span<const double> action) = 0;

    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual int action_dim() const = 0;
    [[nodiscard]] virtual int observation_dim() const = 0;
    [[nodiscard]] virtual int horizon() const = 0;
    [[nodiscard]] virtual std::vector<double> action_low() const;
    [[nodiscard]] virtual std::vector<double> action_high() const;
    /// Action that leaves the system uncontrolled.
    [[nodiscard]] virtual std::vector<double> null_action() const;
    [[nodiscard]] virtual double metric() const = 0;
    [[nodiscard]] virtual const Operator& state() const = 0;
};

enum class EnvTask {
    SinglePulsePWC,
    MultiPulsePWC,
    PolarizedLinear,
    StepwiseCircular,
    DDSequence,
    FloquetAdaptive,
    GenerationShaped,
    QuantumWalk,
};

std::string env_task_tag(EnvTask task);
EnvTask env_task_from_tag(std::string_view tag);

struct EnvOptions {
    RewardGoal goal = RewardGoal::Preservation;
    FloquetRewardVariant floquet_variant = FloquetRewardVariant::Caption;
    int horizon = 0;  // 0 keeps the scenario step count
};

std::unique_ptr<EpisodicEnvironment> make_environment(EnvTask task, const ScenarioConfig& scenario,
                                                      const EnvOptions& options = {});

// Episode logs ------------------------------------------------------------------

struct EpisodeRecord {
    int step = 0;
    std::vector<double> action;
    double reward = 0.0;
    double metric = 0.0;
};

struct EpisodeLog {
    std::vector<EpisodeRecord> records;
    double total_reward = 0.0;
};

/// Columns: step, a0..a{d-1}, reward, metric.
void write_episode_csv(std::ostream& os, const EpisodeLog& log, const std::string& metric_name = "concurrence");

/// Plays a flattened action sequence (horizon * action_dim) and returns the return.
double rollout(EpisodicEnvironment& env, std::span<const double> actions, std::uint64_t seed,
               EpisodeLog* log = nullptr);

// Cross-entropy method -------------------------------------------------------------

struct CEMConfig {
    int population = 32;
    double elite_fraction = 0.25;
    int iterations = 20;
    double initial_sigma = 0.5;  // in normalized [-1, 1] units
    double sigma_floor = 0.02;
    double smoothing = 0.7;      // weight of the new elite statistics
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> initial_mean;  // physical units
    int workers = 0;             // 0 reads PULSEBENCH_WORKERS, else hardware concurrency

    void validate() const;
};

struct CEMResult {
    std::vector<double> best_actions;  // physical units, flattened
    double best_return = 0.0;
    std::vector<double> learning_curve;  // best-so-far return per iteration
    std::vector<double> mean_returns;    // population mean per iteration
};

/// Worker count from PULSEBENCH_WORKERS or the hardware.
int default_workers();

/// Runs body(worker, index) for index in [0, n) on up to `workers` threads; rethrows the first failure.
void parallel_for(int n, int workers, const std::function<void(int, int)>& body);

using Objective = std::function<double(std::span<const double>)>;

/// Maximizes `objective` over the box [low, high]; population member 0 is
/// always the current mean. Deterministic for a fixed seed and any worker count.
CEMResult cem_maximize(const Objective& objective, const std::vector<double>& low, const std::vector<double>& high,
                       const CEMConfig& config);

using EnvFactory = std::function<std::unique_ptr<EpisodicEnvironment>()>;

/// Open-loop optimization of a full action sequence; each worker owns its environment.
CEMResult cem_optimize(const EnvFactory& factory, const CEMConfig& config, std::uint64_t episode_seed);

}  // namespace pulsebench
