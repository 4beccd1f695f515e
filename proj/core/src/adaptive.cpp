#include "pulsebench/adaptive.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pulsebench/seeding.hpp"

namespace pulsebench {

namespace {

struct TaskName {
    RewardTask task;
    const char* tag;
};

constexpr TaskName kTaskNames[] = {
    {RewardTask::Preservation, "preservation"},
    {RewardTask::Generation, "generation"},
    {RewardTask::PWCPreservation, "pwc_preservation"},
    {RewardTask::PWCGeneration, "pwc_generation"},
    {RewardTask::PolarizedSimple, "polarized_simple"},
    {RewardTask::StepwiseCircular, "stepwise_circular"},
    {RewardTask::DDSparse, "dd_sparse"},
    {RewardTask::FloquetDense, "floquet_dense"},
    {RewardTask::GenShaped, "gen_shaped"},
    {RewardTask::Walk, "walk"},
};

double l1(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += std::abs(v);
    return s;
}

double l1_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("action vectors differ in length");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

double l2_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("action vectors differ in length");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double preservation_step(const RewardWeights& w, double c_prev, double c_next, double c_initial, bool squared,
                         std::span<const double> a, std::span<const double> a_prev) {
    const double dev = c_initial - c_next;
    const double d = c_next - c_prev;
    return -w.w_dev * (squared ? dev * dev : dev) - w.w_stab * d * d - w.w_cost * l1(a) - w.w_sm * l1_diff(a, a_prev);
}

double generation_step(const RewardWeights& w, double c_prev, double c_next, std::span<const double> a,
                       std::span<const double> a_prev) {
    return w.w_shape * (c_next - c_prev) * (1.0 + 2.0 * c_next * c_next) + w.w_int * c_next * c_next -
           w.w_cost * l1(a) - w.w_sm * l1_diff(a, a_prev);
}

double standard_terminal(const RewardWeights& w, double c) {
    if (c > w.bonus_threshold) return w.w_bonus * std::pow(c, 4);
    if (c < w.penalty_threshold) return -w.w_penalty;
    return 0.0;
}

}  // namespace

std::string reward_task_tag(RewardTask task) {
    for (const auto& t : kTaskNames)
        if (t.task == task) return t.tag;
    throw std::invalid_argument("unknown reward task");
}

RewardTask reward_task_from_tag(std::string_view tag) {
    for (const auto& t : kTaskNames)
        if (tag == t.tag) return t.task;
    throw std::invalid_argument("unknown reward task '" + std::string(tag) + "'");
}

RewardSpec RewardSpec::defaults(RewardTask task, RewardGoal goal, FloquetRewardVariant variant) {
    RewardSpec s;
    s.task = task;
    s.goal = goal;
    s.floquet_variant = variant;
    switch (task) {
        case RewardTask::PWCPreservation:
        case RewardTask::PWCGeneration:
            s.w.w_shape = 50.0;
            s.w.w_int = 1.5;
            s.w.w_cost = 0.01;
            s.w.w_sm = 0.005;
            break;
        case RewardTask::Preservation:
        case RewardTask::Generation:
        case RewardTask::StepwiseCircular:
        default: break;
    }
    return s;
}

void RewardSpec::validate() const {
    const double vals[] = {w.w_dev, w.w_stab, w.w_shape, w.w_int, w.w_cost, w.w_sm, w.w_bonus, w.w_penalty,
                           w.polarized_scale, w.polarized_bonus, w.sustain, w.action_cost, w.final_factor,
                           w.floquet_c1, w.floquet_power, w.floquet_c2, w.floquet_da, w.floquet_bonus,
                           w.floquet_penalty, w.w_c, w.w_pen};
    for (double v : vals)
        if (!std::isfinite(v)) throw std::invalid_argument("reward weights must be finite");
}

double reward_step(const RewardSpec& spec, double c_prev, double c_next, double c_initial,
                   std::span<const double> action, std::span<const double> prev_action) {
    const auto& w = spec.w;
    switch (spec.task) {
        case RewardTask::Preservation:
            return preservation_step(w, c_prev, c_next, c_initial, true, action, prev_action);
        case RewardTask::Generation: return generation_step(w, c_prev, c_next, action, prev_action);
        case RewardTask::PWCPreservation:
            return preservation_step(w, c_prev, c_next, c_initial, false, action, prev_action);
        case RewardTask::PWCGeneration: return generation_step(w, c_prev, c_next, action, prev_action);
        case RewardTask::PolarizedSimple: return w.polarized_scale * (c_next - c_prev);
        case RewardTask::StepwiseCircular:
            return spec.goal == RewardGoal::Preservation
                       ? preservation_step(w, c_prev, c_next, c_initial, true, action, prev_action)
                       : generation_step(w, c_prev, c_next, action, prev_action);
        case RewardTask::DDSparse: {
            double r = c_next > w.sustain_threshold ? w.sustain : 0.0;
            if (!action.empty() && action[0] > 0.0) r -= w.action_cost;
            return r;
        }
        case RewardTask::FloquetDense:
            if (spec.floquet_variant == FloquetRewardVariant::Caption) {
                return w.floquet_c1 * std::pow(c_next, w.floquet_power) -
                       w.floquet_c2 * (1.0 - c_next) * (1.0 - c_next) - w.floquet_da * l2_diff(action, prev_action);
            } else {
                double r = c_next > w.sustain_threshold ? w.sustain * c_next : 0.0;
                if (!action.empty() && action[0] > 0.0) r -= w.action_cost;
                return r;
            }
        case RewardTask::GenShaped: {
            const double theta = action.empty() ? 0.0 : action[0];
            const double x = theta / std::numbers::pi;
            return w.w_c * (c_next - c_prev) - w.w_pen * x * x;
        }
        case RewardTask::Walk:
            throw std::invalid_argument("walk rewards depend on the position distribution; use walk_reward");
    }
    throw std::invalid_argument("unknown reward task");
}

double reward_terminal(const RewardSpec& spec, double c_final) {
    const auto& w = spec.w;
    switch (spec.task) {
        case RewardTask::Preservation:
        case RewardTask::Generation:
        case RewardTask::PWCPreservation:
        case RewardTask::PWCGeneration:
        case RewardTask::StepwiseCircular: return standard_terminal(w, c_final);
        case RewardTask::PolarizedSimple:
            return spec.goal == RewardGoal::Generation && c_final > w.polarized_threshold ? w.polarized_bonus : 0.0;
        case RewardTask::DDSparse: return w.final_factor * c_final;
        case RewardTask::FloquetDense:
            if (spec.floquet_variant == FloquetRewardVariant::Caption) {
                return c_final > w.floquet_target ? w.floquet_bonus : -w.floquet_penalty;
            }
            return w.final_factor * c_final;
        case RewardTask::GenShaped: return 0.0;
        case RewardTask::Walk:
            throw std::invalid_argument("walk terminal bonus is part of walk_reward");
    }
    throw std::invalid_argument("unknown reward task");
}

// Environment defaults -------------------------------------------------------------

std::vector<double> EpisodicEnvironment::action_low() const { return std::vector<double>(action_dim(), -1.0); }
std::vector<double> EpisodicEnvironment::action_high() const { return std::vector<double>(action_dim(), 1.0); }
std::vector<double> EpisodicEnvironment::null_action() const { return std::vector<double>(action_dim(), 0.0); }

void write_episode_csv(std::ostream& os, const EpisodeLog& log, const std::string& metric_name) {
    const std::size_t d = log.records.empty() ? 0 : log.records.front().action.size();
    os << "step";
    for (std::size_t i = 0; i < d; ++i) os << ",a" << i;
    os << ",reward," << metric_name << '\n';
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : log.records) {
        os << r.step;
        for (double a : r.action) os << ',' << num(a);
        os << ',' << num(r.reward) << ',' << num(r.metric) << '\n';
    }
}

double rollout(EpisodicEnvironment& env, std::span<const double> actions, std::uint64_t seed, EpisodeLog* log) {
    const auto d = static_cast<std::size_t>(env.action_dim());
    const auto h = static_cast<std::size_t>(env.horizon());
    if (actions.size() != d * h) {
        std::ostringstream os;
        os << "rollout needs " << d * h << " action values, got " << actions.size();
        throw std::invalid_argument(os.str());
    }
    env.reset(seed);
    double total = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
        const auto a = actions.subspan(k * d, d);
        const StepResult r = env.step(a);
        total += r.reward;
        if (log) log->records.push_back({static_cast<int>(k), std::vector<double>(a.begin(), a.end()), r.reward, r.metric});
        if (r.done) break;
    }
    if (log) log->total_reward = total;
    return total;
}

// CEM ------------------------------------------------------------------------------

void CEMConfig::validate() const {
    if (population < 2) throw std::invalid_argument("CEM population must be >= 2");
    if (!(elite_fraction > 0.0 && elite_fraction <= 1.0)) throw std::invalid_argument("elite fraction must lie in (0, 1]");
    if (iterations < 1) throw std::invalid_argument("CEM needs at least one iteration");
    if (!(initial_sigma > 0.0)) throw std::invalid_argument("initial sigma must be positive");
    if (!(sigma_floor >= 0.0)) throw std::invalid_argument("sigma floor must be >= 0");
    if (!(smoothing > 0.0 && smoothing <= 1.0)) throw std::invalid_argument("smoothing must lie in (0, 1]");
}

int default_workers() {
    if (const char* env = std::getenv("PULSEBENCH_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, int workers, const std::function<void(int, int)>& body) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(0, i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next++; i < n; i = next++) body(w, i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

CEMResult cem_core(const std::function<double(int, std::span<const double>)>& evaluate, const std::vector<double>& low,
                   const std::vector<double>& high, const CEMConfig& cfg) {
    cfg.validate();
    const std::size_t dim = low.size();
    if (dim == 0 || high.size() != dim) throw std::invalid_argument("CEM bounds must be non-empty and equal length");
    for (std::size_t i = 0; i < dim; ++i)
        if (!(high[i] > low[i])) throw std::invalid_argument("CEM bounds must satisfy low < high");

    auto to_physical = [&](const std::vector<double>& u) {
        std::vector<double> x(dim);
        for (std::size_t i = 0; i < dim; ++i) x[i] = low[i] + (std::clamp(u[i], -1.0, 1.0) + 1.0) * 0.5 * (high[i] - low[i]);
        return x;
    };

    std::vector<double> mean(dim, 0.0);
    if (cfg.initial_mean) {
        if (cfg.initial_mean->size() != dim) throw std::invalid_argument("CEM initial mean has the wrong length");
        for (std::size_t i = 0; i < dim; ++i) {
            mean[i] = std::clamp(2.0 * ((*cfg.initial_mean)[i] - low[i]) / (high[i] - low[i]) - 1.0, -1.0, 1.0);
        }
    }
    std::vector<double> sigma(dim, cfg.initial_sigma);
    const int pop = cfg.population;
    const int n_elite = std::max(1, static_cast<int>(std::ceil(cfg.elite_fraction * pop - 1e-12)));
    const int workers = cfg.workers > 0 ? cfg.workers : default_workers();

    CEMResult res;
    res.best_return = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> samples(pop, std::vector<double>(dim));
    std::vector<double> scores(pop);
    for (int it = 0; it < cfg.iterations; ++it) {
        std::mt19937_64 rng(derive_seed(cfg.seed, SeedStream::Optimizer, static_cast<std::uint64_t>(it)));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int p = 0; p < pop; ++p) {
            for (std::size_t i = 0; i < dim; ++i) {
                const double z = p == 0 ? 0.0 : normal(rng);
                samples[p][i] = std::clamp(mean[i] + sigma[i] * z, -1.0, 1.0);
            }
        }
        parallel_for(pop, workers, [&](int w, int p) { scores[p] = evaluate(w, to_physical(samples[p])); });

        std::vector<int> order(pop);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
        if (scores[order[0]] > res.best_return) {
            res.best_return = scores[order[0]];
            res.best_actions = to_physical(samples[order[0]]);
        }
        res.learning_curve.push_back(res.best_return);
        res.mean_returns.push_back(std::accumulate(scores.begin(), scores.end(), 0.0) / pop);

        for (std::size_t i = 0; i < dim; ++i) {
            double m = 0.0;
            for (int e = 0; e < n_elite; ++e) m += samples[order[e]][i];
            m /= n_elite;
            double v = 0.0;
            for (int e = 0; e < n_elite; ++e) v += (samples[order[e]][i] - m) * (samples[order[e]][i] - m);
            v /= n_elite;
            mean[i] = cfg.smoothing * m + (1.0 - cfg.smoothing) * mean[i];
            sigma[i] = std::max(cfg.smoothing * std::sqrt(v) + (1.0 - cfg.smoothing) * sigma[i], cfg.sigma_floor);
        }
    }
    return res;
}

}  // namespace

CEMResult cem_maximize(const Objective& objective, const std::vector<double>& low, const std::vector<double>& high,
                       const CEMConfig& config) {
    return cem_core([&](int, std::span<const double> x) { return objective(x); }, low, high, config);
}

CEMResult cem_optimize(const EnvFactory& factory, const CEMConfig& config, std::uint64_t episode_seed) {
    auto probe = factory();
    const int h = probe->horizon();
    const int d = probe->action_dim();
    if (static_cast<long>(h) * d > 10000) throw std::invalid_argument("CEM search space exceeds 10^4 parameters");
    std::vector<double> low, high;
    const auto lo = probe->action_low(), hi = probe->action_high();
    for (int k = 0; k < h; ++k) {
        low.insert(low.end(), lo.begin(), lo.end());
        high.insert(high.end(), hi.begin(), hi.end());
    }
    const int workers = config.workers > 0 ? config.workers : default_workers();
    std::vector<std::unique_ptr<EpisodicEnvironment>> envs;
    envs.push_back(std::move(probe));
    for (int w = 1; w < workers; ++w) envs.push_back(factory());
    CEMConfig cfg = config;
    cfg.workers = workers;
    return cem_core([&](int w, std::span<const double> x) { return rollout(*envs[w], x, episode_seed); }, low, high,
                    cfg);
}

}  // namespace pulsebench
