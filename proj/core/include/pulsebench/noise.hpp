#pragma once

#include <cstdint>
#include <vector>

namespace pulsebench {

struct LorentzianNoiseSpec {
    int m = 1000;
    double s0 = 0.2;
    double omega_c = 0.5;
    double gamma_hwhm = 0.5;
    double omega_min = -5.0;
    double omega_max = 5.0;
    std::uint64_t seed = 0;

    void validate() const;
    [[nodiscard]] double spacing() const { return (omega_max - omega_min) / m; }
};

/// Lorentzian power spectral density S0 / (1 + ((w - w_c)/Gamma)^2).
double psd(const LorentzianNoiseSpec& spec, double omega);

/// Frozen cosine-sum realization of the colored detuning delta_omega(t).
class NoiseTrace {
public:
    NoiseTrace() = default;

    static NoiseTrace synthesize(const LorentzianNoiseSpec& spec);
    /// Test hook: explicit frequencies and phases, weights from this spectrum's PSD.
    static NoiseTrace from_components(const LorentzianNoiseSpec& spec, std::vector<double> frequencies,
                                      std::vector<double> phases);

    [[nodiscard]] double operator()(double t) const;
    /// Upper bound sum_j sqrt(2 S(w_j) dW) on |delta_omega(t)|.
    [[nodiscard]] double bound() const;
    /// sum_j S(w_j) dW, the ensemble variance at a fixed time.
    [[nodiscard]] double variance() const;

    [[nodiscard]] const std::vector<double>& frequencies() const { return freqs_; }
    [[nodiscard]] const std::vector<double>& phases() const { return phases_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
    [[nodiscard]] bool empty() const { return freqs_.empty(); }

private:
    std::vector<double> freqs_;
    std::vector<double> phases_;
    std::vector<double> weights_;
};

/// Seeded Gaussian amplitude multiplier xi ~ N(1, sigma^2), independent per draw index.
double sample_pulse_error(std::uint64_t seed, std::uint64_t index, double sigma = 0.05);

struct DisorderSpec {
    int n_sites = 11;
    double relative_strength = 0.01;
    double omega0 = 1.0;
    std::uint64_t seed = 0;
};

/// Site energies d_x ~ U[-s*Omega0, s*Omega0].
std::vector<double> sample_disorder(const DisorderSpec& spec);

}  // namespace pulsebench
