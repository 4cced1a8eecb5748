#include "qkd/csbounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkd::cs {

namespace {

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

constexpr double kEdgeEps = 1e-12;

}  // namespace

std::pair<double, double> g_plus_minus(double y, double z) {
    check_unit(y, "y");
    check_unit(z, "z");
    double base = y + (1.0 - z) * (1.0 - 2.0 * y);
    double rad = z * (1.0 - z) * y * (1.0 - y);
    double s = 2.0 * std::sqrt(rad > 0.0 ? rad : 0.0);
    return {base - s, base + s};
}

Envelope G_interval(double y, double z) {
    auto [gm, gp] = g_plus_minus(y, z);
    Envelope e;
    e.lower = (y > 1.0 - z) ? std::fmax(gm, 0.0) : 0.0;
    e.upper = (y < z) ? std::fmin(gp, 1.0) : 1.0;
    return e;
}

std::pair<double, double> G_prime(double y, double z) {
    check_unit(y, "y");
    check_unit(z, "z");
    double sm = 0.0, sp = 0.0;
    double yy = y * (1.0 - y);
    if (yy > 0.0) {
        double r = std::sqrt(z * (1.0 - z) / yy);
        double c = (1.0 - 2.0 * y) * r;
        if (y > 1.0 - z) sm = -1.0 + 2.0 * z - c;
        if (y < z) sp = -1.0 + 2.0 * z + c;
    }
    return {sm, sp};
}

LinearizedCs linearize(double y_ref, double z) {
    check_unit(y_ref, "y_ref");
    check_unit(z, "z");
    LinearizedCs lin;
    bool lower_active = y_ref > 1.0 - z;
    bool upper_active = y_ref < z;
    bool at_edge = y_ref < kEdgeEps || y_ref > 1.0 - kEdgeEps;
    if (at_edge) {
        // diverging slope: only the vacuous horizontal bounds stay one-sided
        lin.lower = {0.0, 0.0};
        lin.upper = {1.0, 0.0};
        return lin;
    }
    Envelope g = G_interval(y_ref, z);
    auto [sm, sp] = G_prime(y_ref, z);
    lin.lower = lower_active ? TangentLine{g.lower - sm * y_ref, sm} : TangentLine{0.0, 0.0};
    lin.upper = upper_active ? TangentLine{g.upper - sp * y_ref, sp} : TangentLine{1.0, 0.0};
    return lin;
}

Envelope linearized_interval(double y_ref, double z, double y) {
    check_unit(y, "y");
    LinearizedCs lin = linearize(y_ref, z);
    return {lin.lower.at(y), lin.upper.at(y)};
}

}  // namespace qkd::cs
