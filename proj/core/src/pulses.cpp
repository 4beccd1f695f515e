#include "pulsebench/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pulsebench {

namespace {

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);
const double kTwoSqrtTwo = 2.0 * std::sqrt(2.0);
constexpr double kOgpModulation = 5.0 * std::numbers::pi;

double asymmetry(const PulseShape& shape, double duration) {
    return shape.agp_asymmetry.value_or(0.5 * duration);
}

double sign(double x) {
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

}  // namespace

std::string shape_tag(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::GP: return "gp";
        case ShapeKind::SGP: return "sgp";
        case ShapeKind::OGP: return "ogp";
        case ShapeKind::LGP: return "lgp";
        case ShapeKind::HGP: return "hgp";
        case ShapeKind::AGP: return "agp";
    }
    return "gp";
}

PulseShape PulseShape::from_tag(std::string_view tag) {
    for (auto k : kAllShapes) {
        if (tag == shape_tag(k)) return PulseShape{k, 4, std::nullopt};
    }
    throw std::invalid_argument("unknown pulse shape '" + std::string(tag) + "' (expected gp, sgp, ogp, lgp, hgp, agp)");
}

std::string PulseShape::tag() const {
    return shape_tag(kind);
}

void PulseShape::validate() const {
    if (kind == ShapeKind::SGP && (sgp_exponent <= 2 || sgp_exponent % 2 != 0)) {
        throw std::invalid_argument("SGP exponent must be an even integer greater than 2");
    }
    if (kind == ShapeKind::AGP && agp_asymmetry && !(*agp_asymmetry > 0.0)) {
        throw std::invalid_argument("AGP asymmetry time must be positive");
    }
}

double eval_envelope(const PulseShape& shape, double c, double duration) {
    const double g = std::exp(-c * c);
    switch (shape.kind) {
        case ShapeKind::GP: return kInvSqrtPi * g;
        case ShapeKind::SGP: return std::exp(-std::pow(c, shape.sgp_exponent));
        case ShapeKind::OGP: return kInvSqrtPi * g * std::cos(kOgpModulation * c);
        case ShapeKind::LGP: return std::abs(c) * g;
        case ShapeKind::HGP: return kTwoSqrtTwo * c * g;
        case ShapeKind::AGP: return 0.5 * g * (1.0 + std::erf(c * duration / asymmetry(shape, duration)));
    }
    return 0.0;
}

double eval_envelope_derivative(const PulseShape& shape, double c, double duration) {
    const double g = std::exp(-c * c);
    const double inv_t = 1.0 / duration;
    switch (shape.kind) {
        case ShapeKind::GP: return -2.0 * c * kInvSqrtPi * g * inv_t;
        case ShapeKind::SGP: {
            const int n = shape.sgp_exponent;
            return -n * std::pow(c, n - 1) * std::exp(-std::pow(c, n)) * inv_t;
        }
        case ShapeKind::OGP:
            return kInvSqrtPi * g *
                   (-2.0 * c * std::cos(kOgpModulation * c) - kOgpModulation * std::sin(kOgpModulation * c)) * inv_t;
        case ShapeKind::LGP: return g * (sign(c) - 2.0 * std::abs(c) * c) * inv_t;
        case ShapeKind::HGP: return kTwoSqrtTwo * g * (1.0 - 2.0 * c * c) * inv_t;
        case ShapeKind::AGP: {
            const double tau = asymmetry(shape, duration);
            const double u = c * duration / tau;
            return -c * g * (1.0 + std::erf(u)) * inv_t + g * std::exp(-u * u) / (std::sqrt(std::numbers::pi) * tau);
        }
    }
    return 0.0;
}

double envelope_area(const PulseShape& shape, double duration, bool absolute, double half_width) {
    // Composite Simpson; the integrands are smooth apart from the LGP kink at 0,
    // which sits on a grid node.
    constexpr int n = 4000;
    const double h = 2.0 * half_width / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double c = -half_width + i * h;
        double f = eval_envelope(shape, c, duration);
        if (absolute) f = std::abs(f);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * f;
    }
    return sum * h / 3.0;
}

bool PulseWindow::active(double t) const {
    return t >= center - 3.0 * duration && t <= center + 3.0 * duration;
}

EnvelopeSchedule::EnvelopeSchedule(PulseShape shape, std::vector<PulseWindow> windows, CombineMode combine)
    : shape_(shape), windows_(std::move(windows)), combine_(combine) {
    shape_.validate();
    for (const auto& w : windows_) {
        if (!(w.duration > 0.0)) throw std::invalid_argument("pulse window duration must be positive");
        if (!std::isfinite(w.center) || !std::isfinite(w.amplitude_scale)) {
            throw std::invalid_argument("pulse window fields must be finite");
        }
    }
    if (combine_ == CombineMode::Sequential) {
        std::sort(windows_.begin(), windows_.end(),
                  [](const PulseWindow& a, const PulseWindow& b) { return a.center < b.center; });
        for (std::size_t i = 1; i < windows_.size(); ++i) {
            const auto& a = windows_[i - 1];
            const auto& b = windows_[i];
            const double a_end = a.center + 0.5 * a.duration;
            const double b_start = b.center - 0.5 * b.duration;
            if (b_start < a_end) {
                std::ostringstream os;
                os << "sequential windows overlap: [" << a.center - 0.5 * a.duration << ", " << a_end << "] and ["
                   << b_start << ", " << b.center + 0.5 * b.duration << "]";
                throw std::invalid_argument(os.str());
            }
        }
    }
}

const PulseWindow* EnvelopeSchedule::sequential_window(double t) const {
    for (const auto& w : windows_) {
        if (t >= w.center - 0.5 * w.duration && t < w.center + 0.5 * w.duration) return &w;
    }
    return nullptr;
}

double EnvelopeSchedule::value(double t) const {
    if (combine_ == CombineMode::Sequential) {
        const auto* w = sequential_window(t);
        return w ? w->amplitude_scale * eval_envelope(shape_, w->normalized(t), w->duration) : 0.0;
    }
    double v = 0.0;
    for (const auto& w : windows_) v += w.amplitude_scale * eval_envelope(shape_, w.normalized(t), w.duration);
    return v;
}

double EnvelopeSchedule::derivative(double t) const {
    if (combine_ == CombineMode::Sequential) {
        const auto* w = sequential_window(t);
        return w ? w->amplitude_scale * eval_envelope_derivative(shape_, w->normalized(t), w->duration) : 0.0;
    }
    double v = 0.0;
    for (const auto& w : windows_) {
        v += w.amplitude_scale * eval_envelope_derivative(shape_, w.normalized(t), w.duration);
    }
    return v;
}

bool EnvelopeSchedule::active(double t) const {
    return std::any_of(windows_.begin(), windows_.end(), [t](const PulseWindow& w) { return w.active(t); });
}

}  // namespace pulsebench
