#include "qkd/phase_error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkd::coin {

double real_ideal_fidelity_lower(double p_lower, double p_upper, double gamma_n) {
    if (p_lower < 0.0 || p_upper < p_lower || gamma_n < 0.0 || gamma_n > 1.0)
        throw std::invalid_argument("invalid fidelity bound inputs");
    if (p_lower <= 0.0) return 0.0;  // statistics box reaches zero: vacuous
    double q = p_lower / (p_lower + p_upper);
    double s = std::sqrt(q) + std::sqrt(1.0 - q);
    double f = (1.0 - gamma_n) * 0.5 * s * s;
    return std::clamp(f, 0.0, 1.0);
}

namespace {

double bures_distance(double fidelity) {
    double f = std::clamp(fidelity, 0.0, 1.0);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(f)));
}

}  // namespace

double bures_triangle_fidelity(double f_real_ideal_z, double ideal_coin_overlap,
                               double f_real_ideal_x) {
    double mid = std::clamp(ideal_coin_overlap, 0.0, 1.0);
    double d = bures_distance(f_real_ideal_z) + bures_distance(mid * mid) +
               bures_distance(f_real_ideal_x);
    d = std::clamp(d, 0.0, std::sqrt(2.0));
    double root_f = 1.0 - 0.5 * d * d;
    return std::clamp(root_f * root_f, 0.0, 1.0);
}

CoinAssessment coin_imbalance(double fidelity_lower, double yield_z_lower,
                              double yield_x_lower) {
    CoinAssessment a;
    a.fidelity_lower = std::clamp(fidelity_lower, 0.0, 1.0);
    a.coin_yield_lower = std::min(yield_z_lower, yield_x_lower);
    if (a.coin_yield_lower <= 0.0) {
        a.delta = 0.5;
        a.vacuous = true;
        return a;
    }
    a.delta = (1.0 - std::sqrt(a.fidelity_lower)) / (2.0 * a.coin_yield_lower);
    if (a.delta > 0.5) {
        a.delta = 0.5;
        a.vacuous = true;
    }
    return a;
}

double phase_error_upper(double bit_error_x, double delta) {
    if (bit_error_x < 0.0 || delta < 0.0)
        throw std::invalid_argument("negative phase-error inputs");
    double e = bit_error_x;
    if (e >= 0.5 || delta >= 0.5) return 0.5;
    double d = delta;
    double val = e + 4.0 * d * (1.0 - d) * (1.0 - 2.0 * e) +
                 4.0 * (1.0 - 2.0 * d) * std::sqrt(d * (1.0 - d) * e * (1.0 - e));
    return std::min(val, 0.5);
}

}  // namespace qkd::coin
