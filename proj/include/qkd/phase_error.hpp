#pragma once

namespace qkd::coin {

/// Lower bound on the fidelity between the real and ideal single-basis
/// virtual states at photon class n, from the eigenvector rotation bound and
/// the statistics box. q_lower = p_lower / (p_lower + p_upper).
double real_ideal_fidelity_lower(double p_lower, double p_upper, double gamma_n);

/// Chains Z-real->Z-ideal, Z-ideal->X-ideal, X-ideal->X-real through the
/// Bures triangle inequality and returns the implied fidelity lower bound.
/// The middle leg is given as the ideal coin overlap (fidelity = overlap^2).
double bures_triangle_fidelity(double f_real_ideal_z, double ideal_coin_overlap,
                               double f_real_ideal_x);

/// Result of the coin assessment at one photon class.
struct CoinAssessment {
    double fidelity_lower = 1.0;   // F^{n,eps,L}
    double coin_yield_lower = 0.0; // min over bases
    double delta = 0.0;            // detected-round imbalance bound
    bool vacuous = false;          // delta exceeded 1/2 (phase error pinned there)
};

/// Worst-case detected-round coin imbalance: (1 - sqrt(F)) / (2 Y_coin).
CoinAssessment coin_imbalance(double fidelity_lower, double yield_z_lower,
                              double yield_x_lower);

/// Phase-error upper bound from the X-basis bit error and the coin imbalance,
/// clamped to 1/2.
double phase_error_upper(double bit_error_x, double delta);

}  // namespace qkd::coin
