#pragma once

#include <cmath>
#include <random>

#include "pulsebench/qstate.hpp"

namespace pulsebench::testing {

inline constexpr double kPi = 3.14159265358979323846;

inline Operator random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Operator a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = Complex(n(rng), n(rng));
    return 0.5 * (a + a.adjoint());
}

/// Ginibre ensemble density matrix, full rank with probability one.
inline Operator random_density(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Operator a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = Complex(n(rng), n(rng));
    Operator rho = a * a.adjoint();
    return rho / rho.trace().real();
}

inline StateVector random_pure(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    StateVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
    return v.normalized();
}

/// Haar-ish single-qubit unitary from Euler angles.
inline Operator random_unitary2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const Complex i(0.0, 1.0);
    Operator m(2, 2);
    m << std::exp(i * (a - b / 2.0 - d / 2.0)) * std::cos(c / 2.0), -std::exp(i * (a - b / 2.0 + d / 2.0)) * std::sin(c / 2.0),
        std::exp(i * (a + b / 2.0 - d / 2.0)) * std::sin(c / 2.0), std::exp(i * (a + b / 2.0 + d / 2.0)) * std::cos(c / 2.0);
    return m;
}

inline Operator werner(double p) {
    StateVector phi = StateVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    return p * phi * phi.adjoint() + (1.0 - p) * identity(4) / 4.0;
}

inline StateVector phi_plus() {
    StateVector phi = StateVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    return phi;
}

}  // namespace pulsebench::testing

#include <vector>

#include "pulsebench/noise.hpp"

namespace pulsebench::testing {

struct Periodogram {
    std::vector<double> omega;
    std::vector<double> power;  // one-sided estimate, same units as psd()
};

/// Averages |X(w)|^2 / (pi T_obs) over `traces` seeded realizations sampled at
/// spacing dt, then smooths with a centered moving average of `smooth` bins.
inline Periodogram averaged_periodogram(LorentzianNoiseSpec spec, int traces, double dt, int samples,
                                        double omega_max, double omega_step, int smooth) {
    Periodogram out;
    for (double w = omega_step; w <= omega_max; w += omega_step) out.omega.push_back(w);
    std::vector<double> raw(out.omega.size(), 0.0);
    const double t_obs = dt * samples;
    std::vector<double> x(static_cast<std::size_t>(samples));
    for (int s = 0; s < traces; ++s) {
        spec.seed = static_cast<std::uint64_t>(1000 + s);
        const auto trace = NoiseTrace::synthesize(spec);
        for (int n = 0; n < samples; ++n) x[static_cast<std::size_t>(n)] = trace(n * dt);
        for (std::size_t k = 0; k < out.omega.size(); ++k) {
            const Complex step = std::exp(Complex(0.0, -out.omega[k] * dt));
            Complex phase = 1.0, acc = 0.0;
            for (int n = 0; n < samples; ++n) {
                acc += x[static_cast<std::size_t>(n)] * phase;
                phase *= step;
            }
            acc *= dt;
            raw[k] += std::norm(acc) / (kPi * t_obs);
        }
    }
    for (auto& r : raw) r /= traces;
    out.power.assign(raw.size(), 0.0);
    const int half = smooth / 2;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        double sum = 0.0;
        int count = 0;
        for (int d = -half; d <= half; ++d) {
            const auto j = static_cast<long>(k) + d;
            if (j < 0 || j >= static_cast<long>(raw.size())) continue;
            sum += raw[static_cast<std::size_t>(j)];
            ++count;
        }
        out.power[k] = sum / count;
    }
    return out;
}

}  // namespace pulsebench::testing
