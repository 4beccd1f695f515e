#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pulsebench/adaptive.hpp"
#include "pulsebench/metrics.hpp"

namespace pulsebench {

namespace {

constexpr double kPi = std::numbers::pi;

struct EnvName {
    EnvTask task;
    const char* tag;
};

constexpr EnvName kEnvNames[] = {
    {EnvTask::SinglePulsePWC, "single_pulse_pwc"},
    {EnvTask::MultiPulsePWC, "multi_pulse_pwc"},
    {EnvTask::PolarizedLinear, "polarized_linear"},
    {EnvTask::StepwiseCircular, "stepwise_circular"},
    {EnvTask::DDSequence, "dd_sequence"},
    {EnvTask::FloquetAdaptive, "floquet_adaptive"},
    {EnvTask::GenerationShaped, "generation_shaped"},
    {EnvTask::QuantumWalk, "quantum_walk"},
};

std::vector<double> flatten_state(const Operator& rho) {
    std::vector<double> v;
    v.reserve(2 * rho.size());
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j) v.push_back(rho(i, j).real());
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j) v.push_back(rho(i, j).imag());
    return v;
}

void check_action(std::span<const double> a, int dim) {
    if (static_cast<int>(a.size()) != dim) {
        throw std::invalid_argument("action has " + std::to_string(a.size()) + " components, expected " +
                                    std::to_string(dim));
    }
}

int resolve_horizon(const EnvOptions& opt, int scenario_steps) {
    if (opt.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (opt.horizon == 0) return scenario_steps;
    if (opt.horizon > scenario_steps) throw std::invalid_argument("horizon exceeds the scenario step count");
    return opt.horizon;
}

/// Shared bookkeeping for two-qubit concurrence tasks.
class QubitEnv : public EpisodicEnvironment {
public:
    QubitEnv(ScenarioConfig cfg, RewardSpec reward, int horizon) : cfg_(std::move(cfg)), reward_(reward), horizon_(horizon) {
        cfg_.validate();
        reward_.validate();
        if (cfg_.n_qubits != 2) throw std::invalid_argument("concurrence environments need two qubits");
    }

    [[nodiscard]] int horizon() const override { return horizon_; }
    [[nodiscard]] double metric() const override { return c_; }
    [[nodiscard]] const Operator& state() const override { return rho_; }

protected:
    void begin(std::uint64_t seed) {
        cfg_.seed = seed;
        rho_ = scenario_initial_state(cfg_);
        c_ = concurrence(rho_);
        c_init_ = c_;
        k_ = 0;
        prev_action_ = null_action();
    }

    StepResult finish(std::span<const double> action, const Operator& next) {
        rho_ = next;
        const double c_prev = c_;
        c_ = concurrence(rho_);
        StepResult r;
        r.reward = reward_step(reward_, c_prev, c_, c_init_, action, prev_action_);
        prev_action_.assign(action.begin(), action.end());
        ++k_;
        r.done = k_ >= horizon_;
        if (r.done) r.reward += reward_terminal(reward_, c_);
        r.metric = c_;
        r.observation = observe();
        return r;
    }

    void require_running() const {
        if (k_ >= horizon_) throw std::logic_error("episode finished; call reset");
    }

    [[nodiscard]] virtual std::vector<double> observe() const { return flatten_state(rho_); }

    ScenarioConfig cfg_;
    RewardSpec reward_;
    int horizon_;
    Operator rho_;
    double c_ = 0.0;
    double c_init_ = 0.0;
    int k_ = 0;
    std::vector<double> prev_action_;
};

/// Per-step amplitude scaling of the protocol's drive channels (single, multi, circular, polarized).
class ScaledDriveEnv : public QubitEnv {
public:
    ScaledDriveEnv(std::string name, ProtocolKind kind, const ScenarioConfig& cfg, RewardSpec reward, int horizon,
                   bool control_window, bool single_shot)
        : QubitEnv(cfg, reward, single_shot ? 1 : horizon),
          name_(std::move(name)),
          kind_(kind),
          inner_steps_(horizon),
          control_window_(control_window),
          single_shot_(single_shot) {
        const auto sched = deterministic_schedule(kind_, cfg_);
        interaction_ = sched.interaction;
        for (const auto& d : sched.drives) {
            if (kind_ == ProtocolKind::MultiPulse) {
                for (const auto& w : d.qubits.front().envelope.windows()) {
                    DriveSpec one = d;
                    one.qubits.front().envelope = EnvelopeSchedule(cfg_.shape, {w});
                    channels_.push_back(one);
                }
            } else {
                channels_.push_back(d);
            }
        }
        dt_ = cfg_.step_duration();
    }

    std::vector<double> reset(std::uint64_t seed) override {
        begin(seed);
        const auto noise = scenario_noise(cfg_);
        base_ = scenario_static(cfg_, noise);
        base_.append(build_interaction(CouplingSpec{CouplingKind::XY, {cfg_.g}}, cfg_.n_qubits,
                                       InteractionModulation{ModulationKind::Envelope, interaction_}));
        collapse_ = scenario_collapse(cfg_);
        return observe();
    }

    StepResult step(std::span<const double> action) override {
        check_action(action, action_dim());
        require_running();
        std::vector<double> a(action.begin(), action.end());
        for (double& v : a) v = std::clamp(v, -1.0, 1.0);
        if (single_shot_) {
            Operator rho = rho_;
            double sum = 0.0;
            double c_prev = c_;
            for (int k = 0; k < inner_steps_; ++k) {
                rho = advance(rho, k, a);
                const double c = concurrence(rho);
                sum += reward_step(reward_, c_prev, c, c_init_, a, prev_action_);
                c_prev = c;
            }
            rho_ = rho;
            c_ = c_prev;
            ++k_;
            StepResult r;
            r.reward = sum + reward_terminal(reward_, c_);
            r.done = true;
            r.metric = c_;
            r.observation = observe();
            prev_action_ = a;
            return r;
        }
        const double mid = (k_ + 0.5) * dt_;
        if (control_window_ && (mid < cfg_.control_start || mid > cfg_.control_end)) std::fill(a.begin(), a.end(), 0.0);
        return finish(a, advance(rho_, k_, a));
    }

    [[nodiscard]] std::string name() const override { return name_; }
    [[nodiscard]] int action_dim() const override { return static_cast<int>(channels_.size()); }
    [[nodiscard]] int observation_dim() const override { return 32; }

private:
    [[nodiscard]] Operator advance(const Operator& rho, int k, const std::vector<double>& a) const {
        Hamiltonian h = base_;
        for (std::size_t j = 0; j < channels_.size(); ++j) {
            if (a[j] == 0.0) continue;
            DriveSpec d = channels_[j];
            d.qubits.front().amplitude *= a[j];
            h.append(build_drive(d, ErrorSpec{0.0, cfg_.amplitude_error, false, nullptr}));
        }
        const double t0 = k * dt_, t1 = (k + 1) * dt_;
        IntegratorConfig ic;
        ic.rtol = cfg_.rtol;
        ic.atol = cfg_.atol;
        ic.grid = {t0, t1};
        return propagate(rho, h, collapse_, t0, t1, ic);
    }

    std::string name_;
    ProtocolKind kind_;
    int inner_steps_;
    bool control_window_;
    bool single_shot_;
    double dt_ = 0.0;
    EnvelopeSchedule interaction_;
    std::vector<DriveSpec> channels_;
    Hamiltonian base_;
    std::vector<Operator> collapse_;
};

/// Pauli expectations plus normalized time.
std::vector<double> pauli_time_observation(const Operator& rho, std::size_t n, double frac) {
    auto v = pauli_expectations(rho, n);
    v.push_back(frac);
    return v;
}

class DecouplingEnv : public QubitEnv {
public:
    DecouplingEnv(const ScenarioConfig& cfg, int horizon)
        : QubitEnv(cfg, RewardSpec::defaults(RewardTask::DDSparse), horizon) {}

    std::vector<double> reset(std::uint64_t seed) override {
        begin(seed);
        model_ = std::make_unique<DecouplingStepModel>(cfg_);
        return observe();
    }

    StepResult step(std::span<const double> action) override {
        check_action(action, 2);
        require_running();
        const StepAction a{std::clamp(action[0], 0.0, 2.0 * kPi), std::clamp(action[1], -kPi, kPi)};
        const double phys[2] = {a.theta, a.phi};
        return finish(phys, model_->step(rho_, k_, a));
    }

    [[nodiscard]] std::string name() const override { return "dd_sequence"; }
    [[nodiscard]] int action_dim() const override { return 2; }
    [[nodiscard]] int observation_dim() const override { return 16; }
    [[nodiscard]] std::vector<double> action_low() const override { return {0.0, -kPi}; }
    [[nodiscard]] std::vector<double> action_high() const override { return {2.0 * kPi, kPi}; }

private:
    [[nodiscard]] std::vector<double> observe() const override {
        return pauli_time_observation(rho_, 2, static_cast<double>(k_) / horizon_);
    }

    std::unique_ptr<DecouplingStepModel> model_;
};

class GenerationEnv : public QubitEnv {
public:
    GenerationEnv(const ScenarioConfig& cfg, int horizon)
        : QubitEnv(cfg, RewardSpec::defaults(RewardTask::GenShaped), horizon) {}

    std::vector<double> reset(std::uint64_t seed) override {
        begin(seed);
        model_ = std::make_unique<GenerationModel>(cfg_);
        return observe();
    }

    StepResult step(std::span<const double> action) override {
        check_action(action, 2);
        require_running();
        const StepAction a{std::clamp(action[0], 0.0, kPi), std::clamp(action[1], -kPi, kPi)};
        const double phys[2] = {a.theta, a.phi};
        return finish(phys, model_->step(rho_, k_, a));
    }

    [[nodiscard]] std::string name() const override { return "generation_shaped"; }
    [[nodiscard]] int action_dim() const override { return 2; }
    [[nodiscard]] int observation_dim() const override { return 16; }
    [[nodiscard]] std::vector<double> action_low() const override { return {0.0, -kPi}; }
    [[nodiscard]] std::vector<double> action_high() const override { return {kPi, kPi}; }

private:
    [[nodiscard]] std::vector<double> observe() const override {
        return pauli_time_observation(rho_, 2, static_cast<double>(k_) / horizon_);
    }

    std::unique_ptr<GenerationModel> model_;
};

class FloquetEnv : public QubitEnv {
public:
    FloquetEnv(const ScenarioConfig& cfg, int horizon, FloquetRewardVariant variant)
        : QubitEnv(cfg, RewardSpec::defaults(RewardTask::FloquetDense, RewardGoal::Preservation, variant), horizon),
          n_h_(static_cast<int>(cfg.harmonic_weights.size())) {}

    std::vector<double> reset(std::uint64_t seed) override {
        begin(seed);
        model_ = std::make_unique<FloquetModel>(cfg_);
        history_.assign(2, null_action());
        c_last_ = c_;
        return observe();
    }

    StepResult step(std::span<const double> action) override {
        check_action(action, action_dim());
        require_running();
        const auto lo = action_low(), hi = action_high();
        std::vector<double> a(action.begin(), action.end());
        std::vector<FloquetHarmonic> hs;
        for (int i = 0; i < n_h_; ++i) {
            for (int j = 0; j < 3; ++j) a[3 * i + j] = std::clamp(a[3 * i + j], lo[3 * i + j], hi[3 * i + j]);
            hs.push_back(FloquetHarmonic{a[3 * i] * cfg_.harmonic_weights[i], a[3 * i + 1], a[3 * i + 2]});
        }
        c_last_ = c_;
        history_[1] = history_[0];
        history_[0] = a;
        return finish(a, model_->step(rho_, k_, hs));
    }

    [[nodiscard]] std::string name() const override { return "floquet_adaptive"; }
    [[nodiscard]] int action_dim() const override { return 3 * n_h_; }
    [[nodiscard]] int observation_dim() const override { return 15 + 3 + 2 * action_dim() + 3; }
    [[nodiscard]] std::vector<double> action_low() const override {
        std::vector<double> v;
        for (int i = 0; i < n_h_; ++i) v.insert(v.end(), {0.0, -kPi, 0.5});
        return v;
    }
    [[nodiscard]] std::vector<double> action_high() const override {
        std::vector<double> v;
        for (int i = 0; i < n_h_; ++i) v.insert(v.end(), {2.0 * kPi, kPi, 1.5});
        return v;
    }
    [[nodiscard]] std::vector<double> null_action() const override {
        std::vector<double> v;
        for (int i = 0; i < n_h_; ++i) v.insert(v.end(), {0.0, 0.0, 1.0});
        return v;
    }

private:
    [[nodiscard]] std::vector<double> observe() const override {
        auto v = pauli_expectations(rho_, 2);
        const double t = model_->step_start(k_);
        v.push_back(static_cast<double>(k_) / horizon_);
        v.push_back(model_->noise() ? (*model_->noise())(t) : 0.0);
        const double width = cfg_.envelope_width > 0.0 ? cfg_.envelope_width : 2.0 * kPi / cfg_.floquet_omega / 6.0;
        v.push_back(floquet_envelope(cfg_.shape, t, cfg_.floquet_omega, width));
        for (const auto& h : history_) v.insert(v.end(), h.begin(), h.end());
        v.push_back(c_);
        v.push_back(c_last_);
        v.push_back(c_ - c_last_);
        return v;
    }

    int n_h_;
    std::unique_ptr<FloquetModel> model_;
    std::vector<std::vector<double>> history_;
    double c_last_ = 0.0;
};

class WalkEnv : public EpisodicEnvironment {
public:
    WalkEnv(const WalkConfig& cfg, int horizon) : cfg_(cfg), horizon_(horizon) { cfg_.validate(); }

    std::vector<double> reset(std::uint64_t seed) override {
        cfg_.seed = seed;
        sim_ = std::make_unique<WalkSimulator>(cfg_);
        rho_ = walk_initial_state(cfg_.n_sites);
        target_ = {target_site_probability(rho_, cfg_.x_target)};
        k_ = 0;
        return walk_observation(rho_, target_, 0, cfg_);
    }

    StepResult step(std::span<const double> action) override {
        check_action(action, 3);
        if (k_ >= horizon_) throw std::logic_error("episode finished; call reset");
        const CoinAction a = CoinAction{action[0], action[1], action[2]}.clamped();
        rho_ = sim_->step(rho_, k_, a);
        ++k_;
        target_.push_back(target_site_probability(rho_, cfg_.x_target));
        StepResult r;
        WalkConfig rc = cfg_;
        rc.n_steps = horizon_;
        r.reward = walk_reward(target_, position_distribution(rho_), k_, rc);
        r.done = k_ >= horizon_;
        r.metric = target_.back();
        r.observation = walk_observation(rho_, target_, k_, cfg_);
        return r;
    }

    [[nodiscard]] std::string name() const override { return "quantum_walk"; }
    [[nodiscard]] int action_dim() const override { return 3; }
    [[nodiscard]] int observation_dim() const override { return 2 * (2 * cfg_.n_sites) * (2 * cfg_.n_sites) + 6; }
    [[nodiscard]] int horizon() const override { return horizon_; }
    [[nodiscard]] double metric() const override { return target_.empty() ? 0.0 : target_.back(); }
    [[nodiscard]] const Operator& state() const override { return rho_; }

private:
    WalkConfig cfg_;
    int horizon_;
    std::unique_ptr<WalkSimulator> sim_;
    Operator rho_;
    std::vector<double> target_;
    int k_ = 0;
};

}  // namespace

std::string env_task_tag(EnvTask task) {
    for (const auto& e : kEnvNames)
        if (e.task == task) return e.tag;
    throw std::invalid_argument("unknown environment task");
}

EnvTask env_task_from_tag(std::string_view tag) {
    for (const auto& e : kEnvNames)
        if (tag == e.tag) return e.task;
    throw std::invalid_argument("unknown environment task '" + std::string(tag) + "'");
}

std::unique_ptr<EpisodicEnvironment> make_environment(EnvTask task, const ScenarioConfig& scenario,
                                                      const EnvOptions& options) {
    const bool gen = options.goal == RewardGoal::Generation;
    switch (task) {
        case EnvTask::SinglePulsePWC:
            return std::make_unique<ScaledDriveEnv>(
                "single_pulse_pwc", ProtocolKind::SinglePulse, scenario,
                RewardSpec::defaults(gen ? RewardTask::Generation : RewardTask::Preservation, options.goal),
                resolve_horizon(options, scenario.n_steps), true, false);
        case EnvTask::MultiPulsePWC:
            return std::make_unique<ScaledDriveEnv>(
                "multi_pulse_pwc", ProtocolKind::MultiPulse, scenario,
                RewardSpec::defaults(gen ? RewardTask::PWCGeneration : RewardTask::PWCPreservation, options.goal),
                resolve_horizon(options, scenario.n_steps), false, false);
        case EnvTask::PolarizedLinear:
            return std::make_unique<ScaledDriveEnv>("polarized_linear", ProtocolKind::SequentialLinear, scenario,
                                                    RewardSpec::defaults(RewardTask::PolarizedSimple, options.goal),
                                                    resolve_horizon(options, scenario.n_steps), false, true);
        case EnvTask::StepwiseCircular:
            return std::make_unique<ScaledDriveEnv>("stepwise_circular", ProtocolKind::SequentialCircular, scenario,
                                                    RewardSpec::defaults(RewardTask::StepwiseCircular, options.goal),
                                                    resolve_horizon(options, scenario.n_steps), false, false);
        case EnvTask::DDSequence:
            return std::make_unique<DecouplingEnv>(scenario, resolve_horizon(options, scenario.n_steps));
        case EnvTask::FloquetAdaptive:
            return std::make_unique<FloquetEnv>(scenario, resolve_horizon(options, scenario.n_steps),
                                                options.floquet_variant);
        case EnvTask::GenerationShaped:
            return std::make_unique<GenerationEnv>(scenario, resolve_horizon(options, scenario.n_steps));
        case EnvTask::QuantumWalk:
            return std::make_unique<WalkEnv>(scenario.walk, resolve_horizon(options, scenario.walk.n_steps));
    }
    throw std::invalid_argument("unknown environment task");
}

}  // namespace pulsebench
