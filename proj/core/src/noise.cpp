#include "pulsebench/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pulsebench/seeding.hpp"

namespace pulsebench {

void LorentzianNoiseSpec::validate() const {
    if (m < 1) throw std::invalid_argument("noise component count m must be >= 1");
    if (!(gamma_hwhm > 0.0)) throw std::invalid_argument("noise HWHM gamma must be positive");
    if (!(omega_min < omega_max)) throw std::invalid_argument("noise range requires omega_min < omega_max");
    if (!(s0 >= 0.0)) throw std::invalid_argument("noise power s0 must be >= 0");
}

double psd(const LorentzianNoiseSpec& spec, double omega) {
    const double u = (omega - spec.omega_c) / spec.gamma_hwhm;
    return spec.s0 / (1.0 + u * u);
}

NoiseTrace NoiseTrace::synthesize(const LorentzianNoiseSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(derive_seed(spec.seed, SeedStream::Noise));
    std::uniform_real_distribution<double> freq(spec.omega_min, spec.omega_max);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> f(spec.m), p(spec.m);
    for (int j = 0; j < spec.m; ++j) {
        f[j] = freq(rng);
        p[j] = phase(rng);
    }
    return from_components(spec, std::move(f), std::move(p));
}

NoiseTrace NoiseTrace::from_components(const LorentzianNoiseSpec& spec, std::vector<double> frequencies,
                                       std::vector<double> phases) {
    spec.validate();
    if (frequencies.size() != phases.size()) throw std::invalid_argument("frequency/phase count mismatch");
    NoiseTrace tr;
    const double dw = spec.spacing();
    tr.weights_.reserve(frequencies.size());
    for (double w : frequencies) tr.weights_.push_back(std::sqrt(2.0 * psd(spec, w) * dw));
    tr.freqs_ = std::move(frequencies);
    tr.phases_ = std::move(phases);
    return tr;
}

namespace {

#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__)
__attribute__((target_clones("avx2", "default")))
#endif
double cosine_sum(const double* w, const double* f, const double* p, std::size_t n, double t) {
    double v = 0.0;
#pragma omp simd reduction(+ : v)
    for (std::size_t j = 0; j < n; ++j) v += w[j] * std::cos(f[j] * t + p[j]);
    return v;
}

}  // namespace

double NoiseTrace::operator()(double t) const {
    return cosine_sum(weights_.data(), freqs_.data(), phases_.data(), freqs_.size(), t);
}

double NoiseTrace::bound() const {
    double b = 0.0;
    for (double w : weights_) b += w;
    return b;
}

double NoiseTrace::variance() const {
    double v = 0.0;
    for (double w : weights_) v += 0.5 * w * w;
    return v;
}

double sample_pulse_error(std::uint64_t seed, std::uint64_t index, double sigma) {
    if (sigma == 0.0) return 1.0;
    std::mt19937_64 rng(derive_seed(seed, SeedStream::PulseError, index));
    std::normal_distribution<double> normal(1.0, sigma);
    return normal(rng);
}

std::vector<double> sample_disorder(const DisorderSpec& spec) {
    if (!(spec.relative_strength >= 0.0)) throw std::invalid_argument("disorder strength must be >= 0");
    std::vector<double> d(spec.n_sites, 0.0);
    if (spec.relative_strength == 0.0) return d;
    const double a = spec.relative_strength * spec.omega0;
    std::mt19937_64 rng(derive_seed(spec.seed, SeedStream::Disorder));
    std::uniform_real_distribution<double> uni(-a, a);
    for (auto& x : d) x = uni(rng);
    return d;
}

}  // namespace pulsebench
