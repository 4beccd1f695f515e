#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pulsebench {

enum class ShapeKind { GP, SGP, OGP, LGP, HGP, AGP };

struct PulseShape {
    ShapeKind kind = ShapeKind::GP;
    int sgp_exponent = 4;                 // even, > 2
    std::optional<double> agp_asymmetry;  // time; defaults to T/2 when unset

    static PulseShape from_tag(std::string_view tag);
    [[nodiscard]] std::string tag() const;
    void validate() const;
};

inline constexpr ShapeKind kAllShapes[] = {ShapeKind::GP, ShapeKind::SGP, ShapeKind::OGP,
                                           ShapeKind::LGP, ShapeKind::HGP, ShapeKind::AGP};

std::string shape_tag(ShapeKind kind);

/// f(C) for normalized time C = (t - t_c)/T. `duration` only matters for AGP,
/// whose erf argument is C*T/tau_as.
double eval_envelope(const PulseShape& shape, double c, double duration = 1.0);

/// df/dt at normalized time C for a window of duration T (includes the 1/T chain factor).
double eval_envelope_derivative(const PulseShape& shape, double c, double duration);

/// Integral of f (or |f|) over C in [-half_width, half_width], in units of C.
double envelope_area(const PulseShape& shape, double duration, bool absolute, double half_width = 3.0);

struct PulseWindow {
    double center = 0.0;
    double duration = 1.0;
    double amplitude_scale = 1.0;

    [[nodiscard]] double normalized(double t) const { return (t - center) / duration; }
    /// Reporting support [t_c - 3T, t_c + 3T].
    [[nodiscard]] bool active(double t) const;
};

enum class CombineMode { Superpose, Sequential };

/// Shape plus windows; Sequential schedules must not overlap on [t_c - T/2, t_c + T/2].
class EnvelopeSchedule {
public:
    EnvelopeSchedule() = default;
    EnvelopeSchedule(PulseShape shape, std::vector<PulseWindow> windows, CombineMode combine = CombineMode::Superpose);

    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double derivative(double t) const;
    [[nodiscard]] bool active(double t) const;

    [[nodiscard]] const PulseShape& shape() const { return shape_; }
    [[nodiscard]] const std::vector<PulseWindow>& windows() const { return windows_; }
    [[nodiscard]] CombineMode combine() const { return combine_; }

private:
    [[nodiscard]] const PulseWindow* sequential_window(double t) const;

    PulseShape shape_;
    std::vector<PulseWindow> windows_;
    CombineMode combine_ = CombineMode::Superpose;
};

}  // namespace pulsebench
