#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "pulsebench/dynamics.hpp"
#include "pulsebench/noise.hpp"
#include "pulsebench/pulses.hpp"

namespace pulsebench {

enum class BoundaryMode { AsWritten, Cyclic };

struct WalkConfig {
    int n_sites = 11;
    int n_steps = 30;
    double dt_step = 0.5;
    double omega0 = 1.0;
    int x_target = -3;
    PulseShape shape;
    double pulse_duration = 7.5;  // characteristic time T in C = (t - t_c)/T
    double disorder_strength = 0.01;
    bool noise_enabled = true;
    LorentzianNoiseSpec noise{1000, 0.04, 0.5, 0.5, -5.0, 5.0, 0};
    double gamma1 = 0.0;      // coin amplitude damping
    double gamma_phi = 0.5;   // coin dephasing
    BoundaryMode boundary = BoundaryMode::AsWritten;
    std::uint64_t seed = 0;
    double rtol = 1e-8;
    double atol = 1e-10;

    void validate() const;
    [[nodiscard]] int half_width() const { return (n_sites - 1) / 2; }
    [[nodiscard]] double t_center() const { return 0.5 * n_steps * dt_step; }
};

/// Normalized action components, each clamped to [-1, 1].
struct CoinAction {
    double amp = 0.0;
    double phi = 0.0;
    double timing = 0.0;

    [[nodiscard]] CoinAction clamped() const;
};

struct CoinParameters {
    double theta;   // (a_amp + 1)/2 * 3 pi
    double phi;     // a_phi * pi
    double center;  // t_center + a_timing * 3 dt
};

CoinParameters coin_parameters(const CoinAction& action, const WalkConfig& cfg);

/// |0><0| (x) S_R + |1><1| (x) S_L; AsWritten drops the edge terms, Cyclic wraps.
Operator shift_operator(int n_sites, BoundaryMode mode);

/// (|0> + i|1>)/sqrt(2) (x) |x = 0>.
StateVector walk_initial_vector(int n_sites);
Operator walk_initial_state(int n_sites);

/// Owns the frozen disorder, noise and shift for one configuration.
class WalkSimulator {
public:
    explicit WalkSimulator(const WalkConfig& cfg);

    /// Coin evolution over [n dt, (n+1) dt] followed by the shift.
    [[nodiscard]] Operator step(const Operator& rho, int n, const CoinAction& action) const;
    /// Coin evolution only (no shift).
    [[nodiscard]] Operator coin_evolution(const Operator& rho, int n, const CoinAction& action) const;

    [[nodiscard]] const WalkConfig& config() const { return cfg_; }
    [[nodiscard]] const std::vector<double>& disorder() const { return disorder_; }
    [[nodiscard]] const Operator& shift() const { return shift_; }
    [[nodiscard]] const std::vector<Operator>& collapse() const { return collapse_; }

private:
    WalkConfig cfg_;
    std::vector<double> disorder_;
    std::shared_ptr<const NoiseTrace> noise_;
    Operator shift_;
    Operator disorder_op_;
    Operator sigma_z_coin_;
    Operator sigma_x_coin_;
    Operator sigma_y_coin_;
    std::vector<Operator> collapse_;
};

using WalkPolicy = std::function<CoinAction(int step, const std::vector<Operator>& history)>;

struct WalkResult {
    Trajectory trajectory;  // times hold step indices; metrics tsp, ee, mi, trace
    std::vector<CoinAction> actions;
};

WalkResult run_walk(const WalkPolicy& policy, const WalkConfig& cfg);

/// 2 (2 N_s)^2 + 6 entries: Re block, Im block, then the six scalar features.
/// `target_history` holds p(x_target, k) for k = 0..n.
std::vector<double> walk_observation(const Operator& rho_n, const std::vector<double>& target_history, int n,
                                     const WalkConfig& cfg);

/// Walk reward at step n >= 1. `target_history` holds P_0..P_n and
/// `distribution` is p(x, n) indexed from the leftmost site.
double walk_reward(const std::vector<double>& target_history, const std::vector<double>& distribution, int n,
                   const WalkConfig& cfg);

}  // namespace pulsebench
