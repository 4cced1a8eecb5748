#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qkd/source.hpp"

namespace qkd::tha {

/// Coherent-state Trojan-horse attack against an N-phase actively randomized
/// transmitter: Eve's back-reflection at intensity setting beta carries
/// intensity Omega_beta = beta I / mu and the encoding phase of Eq.-(35) type.
struct ThaScenario {
    double back_intensity = 0.0;  // I, mean photons per round at the signal setting
    int phase_count = 8;          // N
    double mu = 0.5;              // signal intensity the leak scales against

    double omega_of(double beta) const { return mu > 0.0 ? beta * back_intensity / mu : 0.0; }
    /// epsilon implied by the leak intensity: max_beta (1 - e^-Omega_beta).
    double epsilon_of(double beta_max) const;
    void validate() const;
};

/// Encoding phase imprinted on the back-reflected light.
double encoding_phase(const source::EncodingLabel& a);

/// Gram matrix of the product states {V^a |sqrt(beta) e^{i theta_l}> (x)
/// |sqrt(Omega_beta) e^{i(theta_l + phi_a)}>} over all four encodings, the N
/// phases, and the given intensities. Hermitian, unit diagonal, PSD.
Eigen::MatrixXcd tha_gram(const ThaScenario& sc, const std::vector<double>& intensities);

/// Exact photon-class statistics of the leaky source (sums to 1).
std::vector<double> tha_photon_statistics(const ThaScenario& sc, double beta,
                                          const source::EncodingLabel& a);

/// Exact |<n^eps_zeta | n^eps_gamma>| for one encoding across two intensities.
double tha_intensity_overlap(const ThaScenario& sc, double zeta, double gamma,
                             const source::EncodingLabel& a, int n);

/// Cross-basis inner products O(j,k) = <n^eps_{jZ} | n^eps_{kX}> at one
/// intensity; the raw ingredients of the coin fidelity.
Eigen::Matrix2cd tha_cross_basis_overlaps(const ThaScenario& sc, double beta, int n);

/// Exact coin fidelity F^{n,eps}_beta, maximized over the free virtual-state
/// phases.
double tha_coin_fidelity(const ThaScenario& sc, double beta, int n);

/// Extra phase modulator countermeasure: the encoder/IM leak (intensity I,
/// phases phi_a + PM phase) and the PM leak (fixed intensity I_l, PM phase),
/// with the PM drawing from N evenly spaced phases.
struct PmScenario {
    double encoder_intensity = 0.0;  // I
    double pm_intensity = 0.0;       // I_l (= lambda)
    int phase_count = 4;             // N of the extra PM
    double mu = 0.5;
    int fock_cutoff = 0;  // 0 = choose automatically from the retained-mass target

    void validate() const;
    double omega_of(double beta) const { return mu > 0.0 ? beta * encoder_intensity / mu : 0.0; }
};

/// Lower bound on F(rho^{zeta,leak}, rho^{gamma,leak}) via the Fock projection
/// and the Bures triangle; encoding-independent.
double pm_leak_fidelity(const PmScenario& sc, double zeta, double gamma);

/// Coin fidelity of the PM scenario, maximized over the purification offsets
/// delta_a drawn from the N-phase set (exhaustive search).
double pm_coin_fidelity(const PmScenario& sc, double beta, int n);

}  // namespace qkd::tha
