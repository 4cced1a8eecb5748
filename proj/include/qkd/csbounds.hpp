#pragma once

#include <utility>

namespace qkd::cs {

/// Raw Cauchy-Schwarz envelope pair:
/// g_pm(y,z) = y + (1-z)(1-2y) +- 2 sqrt(z(1-z)y(1-y)).
std::pair<double, double> g_plus_minus(double y, double z);

struct Envelope {
    double lower = 0.0;
    double upper = 1.0;
};

/// Clamped envelopes: G_- = g_- on y > 1-z else 0; G_+ = g_+ on y < z else 1.
Envelope G_interval(double y, double z);

/// Envelope derivatives with respect to y; zero on the clamped branches.
std::pair<double, double> G_prime(double y, double z);

/// One-sided tangent line: value(y) = intercept + slope * y.
struct TangentLine {
    double intercept = 0.0;
    double slope = 0.0;
    double at(double y) const { return intercept + slope * y; }
};

struct LinearizedCs {
    TangentLine lower;  // underestimates G_-
    TangentLine upper;  // overestimates G_+
};

/// Tangents of the envelopes at y_ref. At y_ref in {0,1} where the active
/// branch slope diverges, no finite supporting line through the envelope
/// point exists, so the vacuous constant bound (0 resp. 1) is returned.
LinearizedCs linearize(double y_ref, double z);

/// The linearized constraint interval of the yield LP, evaluated at y.
Envelope linearized_interval(double y_ref, double z, double y);

}  // namespace qkd::cs
