#include "pulsebench/qwalk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pulsebench/metrics.hpp"
#include "pulsebench/seeding.hpp"

namespace pulsebench {

void WalkConfig::validate() const {
    if (n_sites < 3 || n_sites % 2 == 0) throw std::invalid_argument("walk needs an odd site count >= 3");
    if (n_steps < 1) throw std::invalid_argument("walk needs at least one step");
    if (!(dt_step > 0.0)) throw std::invalid_argument("walk step duration must be positive");
    if (!(pulse_duration > 0.0)) throw std::invalid_argument("walk pulse duration must be positive");
    if (x_target < -half_width() || x_target > half_width()) {
        throw std::invalid_argument("walk target site outside the lattice");
    }
    if (!(gamma1 >= 0.0) || !(gamma_phi >= 0.0)) throw std::invalid_argument("walk rates must be >= 0");
    shape.validate();
    if (noise_enabled) noise.validate();
}

CoinAction CoinAction::clamped() const {
    return {std::clamp(amp, -1.0, 1.0), std::clamp(phi, -1.0, 1.0), std::clamp(timing, -1.0, 1.0)};
}

CoinParameters coin_parameters(const CoinAction& action, const WalkConfig& cfg) {
    const auto a = action.clamped();
    return {(a.amp + 1.0) / 2.0 * 3.0 * std::numbers::pi, a.phi * std::numbers::pi,
            cfg.t_center() + a.timing * 3.0 * cfg.dt_step};
}

Operator shift_operator(int n_sites, BoundaryMode mode) {
    Operator sr = Operator::Zero(n_sites, n_sites);
    Operator sl = Operator::Zero(n_sites, n_sites);
    for (int i = 0; i + 1 < n_sites; ++i) {
        sr(i + 1, i) = 1.0;  // |x+1><x|
        sl(i, i + 1) = 1.0;  // |x-1><x|
    }
    if (mode == BoundaryMode::Cyclic) {
        sr(0, n_sites - 1) = 1.0;
        sl(n_sites - 1, 0) = 1.0;
    }
    Operator p0 = Operator::Zero(2, 2), p1 = Operator::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    return kron(p0, sr) + kron(p1, sl);
}

StateVector walk_initial_vector(int n_sites) {
    StateVector psi = StateVector::Zero(2 * n_sites);
    const int center = (n_sites - 1) / 2;
    const double r = 1.0 / std::sqrt(2.0);
    psi(center) = r;
    psi(n_sites + center) = Complex(0.0, r);
    return psi;
}

Operator walk_initial_state(int n_sites) {
    const StateVector psi = walk_initial_vector(n_sites);
    return psi * psi.adjoint();
}

WalkSimulator::WalkSimulator(const WalkConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const int ns = cfg_.n_sites;
    disorder_ = sample_disorder(DisorderSpec{ns, cfg_.disorder_strength, cfg_.omega0, cfg_.seed});
    if (cfg_.noise_enabled) {
        auto spec = cfg_.noise;
        spec.seed = cfg_.seed;
        noise_ = std::make_shared<NoiseTrace>(NoiseTrace::synthesize(spec));
    }
    shift_ = shift_operator(ns, cfg_.boundary);
    const std::vector<Eigen::Index> dims{2, ns};
    Operator d = Operator::Zero(ns, ns);
    for (int i = 0; i < ns; ++i) d(i, i) = disorder_[i];
    disorder_op_ = tensor_embed(d, 1, dims);
    sigma_z_coin_ = tensor_embed(pauli(PauliAxis::Z), 0, dims);
    sigma_x_coin_ = tensor_embed(pauli(PauliAxis::X), 0, dims);
    sigma_y_coin_ = tensor_embed(pauli(PauliAxis::Y), 0, dims);
    if (cfg_.gamma1 > 0.0) collapse_.push_back(std::sqrt(cfg_.gamma1) * tensor_embed(sigma_minus(), 0, dims));
    if (cfg_.gamma_phi > 0.0) collapse_.push_back(std::sqrt(cfg_.gamma_phi) * sigma_z_coin_);
}

Operator WalkSimulator::coin_evolution(const Operator& rho, int n, const CoinAction& action) const {
    const auto p = coin_parameters(action, cfg_);
    const Eigen::Index dim = 2 * cfg_.n_sites;
    Hamiltonian h(dim);
    if (cfg_.disorder_strength > 0.0) h.add(disorder_op_);
    if (noise_) {
        auto trace = noise_;
        h.add(sigma_z_coin_, [trace](double t) { return (*trace)(t); });
    }
    const double amp = cfg_.omega0 * p.theta / std::numbers::pi;
    if (amp != 0.0) {
        const auto shape = cfg_.shape;
        const double tc = p.center, T = cfg_.pulse_duration;
        h.add(std::cos(p.phi) * sigma_x_coin_ + std::sin(p.phi) * sigma_y_coin_,
              [=](double t) { return amp * eval_envelope(shape, (t - tc) / T, T); });
    }
    if (h.terms().empty() && cfg_.disorder_strength == 0.0) h.add(Operator::Zero(dim, dim));
    const double t0 = n * cfg_.dt_step;
    const double t1 = (n + 1) * cfg_.dt_step;
    IntegratorConfig ic;
    ic.rtol = cfg_.rtol;
    ic.atol = cfg_.atol;
    ic.max_step = cfg_.pulse_duration / 20.0;
    ic.grid = {t0, t1};
    return propagate(rho, h, collapse_, t0, t1, ic);
}

Operator WalkSimulator::step(const Operator& rho, int n, const CoinAction& action) const {
    const Operator after_coin = coin_evolution(rho, n, action);
    return shift_ * after_coin * shift_.adjoint();
}

WalkResult run_walk(const WalkPolicy& policy, const WalkConfig& cfg) {
    WalkSimulator sim(cfg);
    WalkResult res;
    std::vector<Operator> history{walk_initial_state(cfg.n_sites)};
    for (int n = 0; n < cfg.n_steps; ++n) {
        const CoinAction a = policy(n, history).clamped();
        res.actions.push_back(a);
        history.push_back(sim.step(history.back(), n, a));
    }
    auto& traj = res.trajectory;
    std::vector<double> tsp, ee, mi, tr;
    for (std::size_t k = 0; k < history.size(); ++k) {
        const auto& rho = history[k];
        traj.times.push_back(static_cast<double>(k));
        traj.states.push_back(rho);
        tsp.push_back(target_site_probability(rho, cfg.x_target));
        ee.push_back(walk_entanglement_entropy(rho));
        mi.push_back(mutual_information(rho));
        tr.push_back(rho.trace().real());
    }
    traj.add_metric("tsp", std::move(tsp));
    traj.add_metric("ee", std::move(ee));
    traj.add_metric("mi", std::move(mi));
    traj.add_metric("trace", std::move(tr));
    return res;
}

std::vector<double> walk_observation(const Operator& rho_n, const std::vector<double>& target_history, int n,
                                     const WalkConfig& cfg) {
    if (n < 0 || n > cfg.n_steps) throw std::invalid_argument("walk observation step out of range");
    if (static_cast<int>(target_history.size()) < n + 1) {
        throw std::invalid_argument("walk observation needs target probabilities up to step n");
    }
    const Eigen::Index dim = rho_n.rows();
    std::vector<double> obs;
    obs.reserve(2 * dim * dim + 6);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) obs.push_back(rho_n(i, j).real());
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) obs.push_back(rho_n(i, j).imag());
    const double big_n = cfg.n_steps;
    const double pn = target_history[n];
    obs.push_back(2.0 * n / big_n - 1.0);
    obs.push_back(2.0 * cfg.x_target / cfg.n_sites - 1.0);
    obs.push_back(std::tanh((n - big_n / 2.0) / (big_n / 4.0)));
    obs.push_back(10.0 * pn);
    obs.push_back(20.0 * (pn - target_history[0]));
    const int lo = std::max(0, n - 2);
    double mean = 0.0;
    for (int k = lo; k <= n; ++k) mean += target_history[k];
    obs.push_back(10.0 * mean / (n - lo + 1));
    return obs;
}

double walk_reward(const std::vector<double>& target_history, const std::vector<double>& distribution, int n,
                   const WalkConfig& cfg) {
    if (n < 1 || static_cast<int>(target_history.size()) < n + 1) {
        throw std::invalid_argument("walk reward needs n >= 1 and target history up to n");
    }
    const double pn = target_history[n];
    double r = 50.0 * pn;
    if (pn > 0.3) r += 100.0 * std::exp(5.0 * pn);
    const int half = cfg.half_width();
    double spread = 0.0;
    for (std::size_t i = 0; i < distribution.size(); ++i) {
        const int x = static_cast<int>(i) - half;
        spread += distribution[i] * std::abs(x - cfg.x_target);
    }
    r -= 2.0 * spread;
    const int lo = std::max(0, n - 5);
    double hist = 0.0;
    for (int k = lo; k < n; ++k) hist += target_history[k];
    hist /= (n - lo);
    r += 20.0 * std::max(0.0, pn - hist);
    if (n == cfg.n_steps) r += 200.0 * pn * pn;
    r += 10.0 * pn * n / static_cast<double>(cfg.n_steps);
    r += 50.0 * (pn - target_history[n - 1]);
    if (n >= 4) {
        double mean = 0.0;
        for (int k = n - 4; k <= n; ++k) mean += target_history[k];
        mean /= 5.0;
        double var = 0.0;
        for (int k = n - 4; k <= n; ++k) var += (target_history[k] - mean) * (target_history[k] - mean);
        var /= 5.0;
        if (var < 1e-6 && pn < 0.1) r -= 10.0;
    }
    return r;
}

}  // namespace pulsebench
