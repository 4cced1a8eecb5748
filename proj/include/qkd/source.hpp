#pragma once

#include <stdexcept>
#include <vector>

namespace qkd::source {

/// Global-phase randomization law of the transmitter.
enum class PhaseKind { UniformContinuous, DiscreteUniform };

struct PhaseDistribution {
    PhaseKind kind = PhaseKind::UniformContinuous;
    int discrete_count = 0;  // number of evenly spaced phases, >= 2

    static PhaseDistribution uniform() { return {PhaseKind::UniformContinuous, 0}; }
    static PhaseDistribution discrete(int n) {
        if (n < 2) throw std::invalid_argument("discrete phase count must be >= 2");
        return {PhaseKind::DiscreteUniform, n};
    }
    bool is_discrete() const { return kind == PhaseKind::DiscreteUniform; }
};

/// Three-intensity decoy setting (signal, decoy, vacuum), mu > nu > omega >= 0.
struct IntensitySet {
    double mu = 0.5;
    double nu = 0.1;
    double omega = 0.0;
    double p_mu = 1.0, p_nu = 0.0, p_omega = 0.0;  // selection probabilities

    void validate() const;
    double value(int idx) const {
        switch (idx) {
            case 0: return mu;
            case 1: return nu;
            default: return omega;
        }
    }
};

enum class Basis { Z, X };

/// One of the four BB84 bit/basis settings, with its selection probability.
struct EncodingLabel {
    int bit = 0;  // 0 or 1
    Basis basis = Basis::Z;
    double p = 0.25;

    static EncodingLabel zero_z() { return {0, Basis::Z, 0.25}; }
    static EncodingLabel one_z() { return {1, Basis::Z, 0.25}; }
    static EncodingLabel zero_x() { return {0, Basis::X, 0.25}; }
    static EncodingLabel one_x() { return {1, Basis::X, 0.25}; }
};

/// Photon-number distribution of a phase-randomized source at one intensity.
/// For DiscreteUniform randomization the support is n = 0..N-1 and tail = 0.
struct PhotonStatistics {
    double intensity = 0.0;
    PhaseDistribution dist;
    int n_cut = 0;
    std::vector<double> probs;  // n = 0..n_cut
    double tail = 0.0;          // 1 - sum(probs)
};

/// Poisson photon statistics truncated at n_cut, tail kept explicitly.
PhotonStatistics poisson_pmf(double beta, int n_cut);

/// Photon-class statistics for N-phase discrete randomization (exact, no tail).
PhotonStatistics discrete_pmf(double beta, int N);

/// Sum over the wrapped ladder: sum_l b^(lN+n) / (lN+n)!.
/// The continuous case is recovered with N = 1 (full exponential series).
double wrapped_exp_series(double b, int n, int N);

/// <n_{gamma}|n_{zeta}> of the ideal (leak-free) n-photon-class states.
/// Uniform randomization gives Fock states, hence exactly 1.
double ideal_intensity_overlap(int n, double zeta, double gamma,
                               const PhaseDistribution& dist);

/// <m_a|m_b> of the dual-mode BB84 Fock expansions at photon number m.
double encoding_fock_overlap(const EncodingLabel& a, const EncodingLabel& b, int m);

/// |<Psi_Z|Psi_X>| of the ideal n-photon coin states (equal-amplitude
/// superposition over both encodings of each basis).
double ideal_coin_overlap(int n, double beta, const PhaseDistribution& dist);

}  // namespace qkd::source
